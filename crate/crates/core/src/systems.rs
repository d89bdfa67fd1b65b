//! Input-output systems, functional systems, goal-seeking systems and the
//! cascade connection.
//!
//! An [`IOSystem`] is a relation whose positions are laid out as
//! `inputs ++ outputs`. Cascading matches components by set name.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::relation::{self, cartesian_product, is_functional, project, Atom, FiniteSet, Functionality, Relation};
use crate::validation::{ClauseBuilder, ValidationReport, Witness};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IOSystem {
    pub inputs: Vec<FiniteSet>,
    pub outputs: Vec<FiniteSet>,
    pub rel: Relation,
}

impl IOSystem {
    /// Splits `rel`'s components: the first `n_inputs` are inputs.
    pub fn new(rel: Relation, n_inputs: usize) -> Result<Self> {
        if n_inputs > rel.arity() {
            return Err(Error::IndexOutOfRange {
                relation: rel.name().to_owned(),
                index: n_inputs,
                arity: rel.arity(),
            });
        }
        let (i, o) = rel.components().split_at(n_inputs);
        Ok(IOSystem {
            inputs: i.to_vec(),
            outputs: o.to_vec(),
            rel,
        })
    }

    pub fn input_positions(&self) -> Vec<usize> {
        (0..self.inputs.len()).collect()
    }

    pub fn output_positions(&self) -> Vec<usize> {
        (self.inputs.len()..self.inputs.len() + self.outputs.len()).collect()
    }

    pub fn component_names(&self) -> Vec<String> {
        self.inputs
            .iter()
            .chain(&self.outputs)
            .map(|s| s.name().to_owned())
            .collect()
    }
}

/// Checks `X ∩ Y = ∅` (by set name) and that the relation is laid out over
/// exactly `inputs ++ outputs`.
pub fn validate_io(sys: &IOSystem) -> ValidationReport {
    let mut disjoint = ClauseBuilder::default();
    let out_names: BTreeSet<&str> = sys.outputs.iter().map(FiniteSet::name).collect();
    for s in &sys.inputs {
        if out_names.contains(s.name()) {
            disjoint.fail(Witness::name(sys.rel.name(), "input_output_overlap", s.name()));
        }
    }

    let mut coverage = ClauseBuilder::default();
    let declared: Vec<&FiniteSet> = sys.inputs.iter().chain(&sys.outputs).collect();
    let declared_names: BTreeSet<&str> = declared.iter().map(|s| s.name()).collect();
    let rel_names: BTreeSet<&str> = sys.rel.components().iter().map(FiniteSet::name).collect();
    for extra in rel_names.difference(&declared_names) {
        coverage.fail(Witness::name(sys.rel.name(), "uncovered_component", extra));
    }
    for missing in declared_names.difference(&rel_names) {
        coverage.fail(Witness::name(sys.rel.name(), "missing_component", missing));
    }
    if coverage.is_clean() {
        let layout_ok = declared.len() == sys.rel.arity()
            && declared.iter().zip(sys.rel.components()).all(|(d, r)| d.same_as(r));
        if !layout_ok {
            for (pos, c) in sys.rel.components().iter().enumerate() {
                if declared.get(pos).is_none_or(|d| !d.same_as(c)) {
                    coverage.fail(Witness::new(
                        sys.rel.name(),
                        "position_mismatch",
                        vec![Atom::Int(pos as i64), Atom::sym(c.name())],
                    ));
                }
            }
        }
    }

    ValidationReport {
        clauses: vec![disjoint.finish("disjoint"), coverage.finish("coverage")],
    }
}

/// Functionality of the system read from inputs to outputs.
pub fn is_functional_system(sys: &IOSystem) -> Result<Functionality> {
    is_functional(&sys.rel, &sys.input_positions(), &sys.output_positions())
}

/// Cascade connection: outputs of `s1` feed the inputs of `s2` with the same
/// set name. The result has inputs `s1.inputs ++ (s2.inputs - shared)` and
/// outputs `(s1.outputs - shared) ++ s2.outputs`.
pub fn cascade(s1: &IOSystem, s2: &IOSystem) -> Result<IOSystem> {
    let mut pairs = Vec::new();
    let mut shared = BTreeSet::new();
    for (k, out) in s1.outputs.iter().enumerate() {
        if let Some(j) = s2.inputs.iter().position(|i| i.name() == out.name()) {
            if !out.same_as(&s2.inputs[j]) {
                return Err(Error::ComponentMismatch {
                    left: out.name().to_owned(),
                    right: s2.inputs[j].name().to_owned(),
                });
            }
            pairs.push((s1.inputs.len() + k, j));
            shared.insert(out.name().to_owned());
        }
    }
    if pairs.is_empty() {
        return Err(Error::NoSharedComponent {
            outputs: s1.outputs.iter().map(|s| s.name().to_owned()).collect(),
            inputs: s2.inputs.iter().map(|s| s.name().to_owned()).collect(),
        });
    }

    let composed = relation::compose(&s1.rel, &s2.rel, &pairs)?;

    let a = s1.inputs.len();
    let b = s1.outputs.len() - pairs.len();
    let c = s2.inputs.len() - pairs.len();
    let order: Vec<usize> = (0..a)
        .chain(a + b..a + b + c)
        .chain(a..a + b)
        .chain(a + b + c..composed.arity())
        .collect();
    let rel = project(&composed, &order)?;

    let inputs: Vec<FiniteSet> = s1
        .inputs
        .iter()
        .chain(s2.inputs.iter().filter(|s| !shared.contains(s.name())))
        .cloned()
        .collect();
    let outputs: Vec<FiniteSet> = s1
        .outputs
        .iter()
        .filter(|s| !shared.contains(s.name()))
        .chain(&s2.outputs)
        .cloned()
        .collect();
    Ok(IOSystem { inputs, outputs, rel })
}

/// Output tuples compatible with a partial input assignment, as a relation
/// over the output components.
pub fn reachable_outputs(sys: &IOSystem, fixed: &BTreeMap<String, Atom>) -> Result<Relation> {
    let mut constraints = Vec::new();
    for (name, value) in fixed {
        let pos = sys
            .inputs
            .iter()
            .position(|s| s.name() == name)
            .ok_or_else(|| Error::UnknownComponent(name.clone()))?;
        if !sys.inputs[pos].contains(value) {
            return Err(Error::ElementNotInComponent {
                relation: sys.rel.name().to_owned(),
                position: pos,
                component: name.clone(),
                element: value.clone(),
            });
        }
        constraints.push((pos, value));
    }
    let outs = sys.output_positions();
    let tuples = sys
        .rel
        .tuples()
        .filter(|t| constraints.iter().all(|(p, v)| &t[*p] == *v))
        .map(|t| outs.iter().map(|&i| t[i].clone()).collect());
    Relation::new("reachable", sys.outputs.clone(), tuples)
}

pub const REACHABILITY_LABEL: &str = "reachability (chosen surrogate)";

/// Controllability surrogate: with the inputs in `fixed` held constant and the
/// remaining inputs free, which outputs can be reached, and is that all of
/// them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reachability {
    pub label: &'static str,
    pub reachable: Relation,
    pub all_reachable: bool,
}

pub fn reachability(sys: &IOSystem, fixed: &BTreeMap<String, Atom>) -> Result<Reachability> {
    let reachable = reachable_outputs(sys, fixed)?;
    let all_reachable = match cartesian_product(&sys.outputs) {
        Ok(full) => full.tuple_set() == reachable.tuple_set(),
        Err(Error::EmptyComponent(_)) => true,
        Err(e) => return Err(e),
    };
    Ok(Reachability {
        label: REACHABILITY_LABEL,
        reachable,
        all_reachable,
    })
}

/// An input-output system specified by a goal relation `G` and a seeking
/// relation `E`. `G` ranges over the system's context (inputs, outputs and the
/// parameter set, each named once) followed by the value set; `E` over the
/// context without the parameter set, then values, then parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalSeekingSystem {
    pub io: IOSystem,
    pub params: FiniteSet,
    pub values: FiniteSet,
    pub goal: Relation,
    pub seek: Relation,
}

impl GoalSeekingSystem {
    fn context(&self) -> Vec<FiniteSet> {
        let mut seen = BTreeSet::new();
        self.io
            .inputs
            .iter()
            .chain(&self.io.outputs)
            .filter(|s| seen.insert(s.name().to_owned()))
            .cloned()
            .collect()
    }

    pub fn goal_components(&self) -> Vec<FiniteSet> {
        let mut c: Vec<FiniteSet> = self
            .context()
            .into_iter()
            .filter(|s| s.name() != self.params.name())
            .collect();
        c.push(self.params.clone());
        c.push(self.values.clone());
        c
    }

    pub fn seek_components(&self) -> Vec<FiniteSet> {
        let mut c: Vec<FiniteSet> = self
            .context()
            .into_iter()
            .filter(|s| s.name() != self.params.name())
            .collect();
        c.push(self.values.clone());
        c.push(self.params.clone());
        c
    }

    /// `goal` must be functional and total; `seek` functional.
    pub fn validate(&self) -> ValidationReport {
        let mut shape = ClauseBuilder::default();
        for (rel, expected) in [(&self.goal, self.goal_components()), (&self.seek, self.seek_components())] {
            if rel.components() != expected.as_slice() {
                shape.fail(Witness::new(
                    rel.name(),
                    "unexpected_components",
                    rel.component_names().into_iter().map(Atom::sym).collect(),
                ));
            }
        }
        let shape = shape.finish("shape");
        if !shape.passed {
            return ValidationReport { clauses: vec![shape] };
        }

        let mut goal = ClauseBuilder::default();
        let n = self.goal.arity();
        let f = is_functional(&self.goal, &(0..n - 1).collect::<Vec<_>>(), &[n - 1])
            .expect("positions in range");
        if !f.functional {
            goal.fail(Witness::name(self.goal.name(), "non_functional", self.goal.name()));
        }
        if !f.total {
            goal.fail_totality(Witness::name(self.goal.name(), "non_total", self.goal.name()));
        }
        let mut seek = ClauseBuilder::default();
        let m = self.seek.arity();
        let f = is_functional(&self.seek, &(0..m - 1).collect::<Vec<_>>(), &[m - 1])
            .expect("positions in range");
        if !f.functional {
            seek.fail(Witness::name(self.seek.name(), "non_functional", self.seek.name()));
        }
        ValidationReport {
            clauses: vec![shape, goal.finish("goal"), seek.finish("seek")],
        }
    }
}
