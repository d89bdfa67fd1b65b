//! Desk-scale analyses for the learning-theoretic concerns.
//!
//! Every analyzer returns an [`AnalysisReport`]; most also expose the
//! underlying structured result (e.g. [`capacity::VcResult`]) for callers
//! that want more than the report.

pub mod bounds;
pub mod capacity;
pub mod convergence;
pub mod entropy;
pub mod hypotheses;
pub mod risk;

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::strata::Concern;
use crate::trace::Trace;

pub use bounds::{algorithmic_cost, hardness_tag, sample_complexity_finite, HardnessClass};
pub use capacity::{
    capacity, falsifiability, flexibility, growth_function, local_capacity, vc_dimension, CapacityLimits,
    DichotomyTable, VcResult,
};
pub use convergence::{convergence_trace, trace_convergence, ArgminStep, ConvergenceRun, IdentityStep, StepRule, TableStep};
pub use entropy::{distribution_entropy, entropies, Entropies};
pub use hypotheses::HypothesisTable;
pub use risk::{chain_risks, error_of, monotonicity};

pub const RECONSTRUCTED: &str = "reconstructed definition";

#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    Count(u64),
    Real(f64),
    Counts(Vec<u64>),
    Series(Vec<f64>),
}

impl Metric {
    fn to_json(&self) -> Value {
        match self {
            Metric::Count(c) => json!(c),
            Metric::Real(r) => Value::from(*r),
            Metric::Counts(v) => json!(v),
            Metric::Series(v) => Value::Array(v.iter().map(|r| Value::from(*r)).collect()),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Metric::Count(c) => Some(*c as f64),
            Metric::Real(r) => Some(*r),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalCounts {
    pub g_evals: u64,
    pub e_apps: u64,
}

impl From<&Trace> for EvalCounts {
    fn from(t: &Trace) -> Self {
        EvalCounts {
            g_evals: t.g_evals,
            e_apps: t.e_apps,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub concern: Concern,
    pub inputs: BTreeMap<String, String>,
    pub metrics: BTreeMap<String, Metric>,
    pub verdicts: BTreeMap<String, bool>,
    pub notes: Vec<String>,
    pub eval_counts: EvalCounts,
}

impl AnalysisReport {
    pub fn new(concern: Concern) -> Self {
        AnalysisReport {
            concern,
            inputs: BTreeMap::new(),
            metrics: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            notes: Vec::new(),
            eval_counts: EvalCounts::default(),
        }
    }

    pub fn input(mut self, k: &str, v: impl ToString) -> Self {
        self.inputs.insert(k.to_owned(), v.to_string());
        self
    }

    pub fn metric(mut self, k: &str, m: Metric) -> Self {
        self.metrics.insert(k.to_owned(), m);
        self
    }

    pub fn verdict(mut self, k: &str, v: bool) -> Self {
        self.verdicts.insert(k.to_owned(), v);
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    pub fn to_json(&self) -> Value {
        let metrics: Map<String, Value> = self.metrics.iter().map(|(k, m)| (k.clone(), m.to_json())).collect();
        json!({
            "concern": self.concern.as_str(),
            "inputs": self.inputs,
            "metrics": metrics,
            "verdicts": self.verdicts,
            "notes": self.notes,
            "eval_counts": {
                "g_evals": self.eval_counts.g_evals,
                "e_apps": self.eval_counts.e_apps,
            },
        })
    }
}

/// Renders a list of atoms as `[a, b, c]` for report inputs.
pub(crate) fn atoms_str<'a>(atoms: impl IntoIterator<Item = &'a crate::relation::Atom>) -> String {
    let parts: Vec<String> = atoms.into_iter().map(|a| a.to_string()).collect();
    format!("[{}]", parts.join(", "))
}
