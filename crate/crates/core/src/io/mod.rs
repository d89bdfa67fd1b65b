//! Document format, canonical JSON output and the batch command runner.

pub mod cli;
pub mod document;
pub mod json;

pub use cli::{run, Command, LearnerKind, Options, Outcome};
pub use document::{Declarations, LearningBlock, SystemDocument};
pub use json::to_canonical_string;
