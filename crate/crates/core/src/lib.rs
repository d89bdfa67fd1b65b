//! A finite-relational kernel for abstract learning systems.
//!
//! Systems are relations on named finite component sets. On top of that
//! substrate the crate provides:
//!
//! - [`relation`]: atoms, finite sets, relations, projection, composition;
//! - [`systems`]: input-output and goal-seeking systems, cascade connection;
//! - [`learning`]: learning systems, clause-by-clause validation, behavior,
//!   decomposition into inductive and functional parts, level views;
//! - [`strata`]: the elementary / cascade / goal-seeking levels and the
//!   learning-theoretic concerns each one licenses;
//! - [`analyzers`]: desk-scale computations for those concerns (capacity,
//!   entropy, convergence traces, ...), each producing an
//!   [`analyzers::AnalysisReport`];
//! - [`learners`]: concrete constructors (ERM, 1-NN, integer perceptron) and
//!   hypothesis-class fixtures;
//! - [`io`]: the JSON document format, canonical report serialization and the
//!   batch command runner used by the `learnsys` binary.
//!
//! Data-parallel inner loops go through [`exec::Exec`]; with the default
//! `parallel` feature they run on rayon.

pub mod analyzers;
pub mod error;
pub mod exec;
pub mod io;
pub mod learners;
pub mod learning;
pub mod relation;
pub mod strata;
pub mod systems;
pub mod trace;
pub mod validation;

pub use error::{Error, Result};
pub use exec::Exec;
pub use relation::{Atom, FiniteSet, Relation};
