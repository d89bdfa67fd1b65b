//! Clause-by-clause validation reports with capped, canonically ordered
//! witnesses.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::relation::{Atom, Tuple};

pub const WITNESS_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Witness {
    pub relation: String,
    pub kind: String,
    pub tuple: Tuple,
}

impl Witness {
    pub fn new(relation: impl Into<String>, kind: impl Into<String>, tuple: Tuple) -> Self {
        Witness {
            relation: relation.into(),
            kind: kind.into(),
            tuple,
        }
    }

    pub fn name(relation: impl Into<String>, kind: impl Into<String>, name: &str) -> Self {
        Self::new(relation, kind, vec![Atom::sym(name)])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseResult {
    pub clause: String,
    pub passed: bool,
    /// Verdict when totality failures are ignored.
    pub passed_relaxed: bool,
    pub witnesses: Vec<Witness>,
    pub witness_total: usize,
}

/// Accumulates witnesses for one clause.
#[derive(Debug, Default)]
pub(crate) struct ClauseBuilder {
    strict: BTreeSet<Witness>,
    totality: BTreeSet<Witness>,
}

impl ClauseBuilder {
    pub fn fail(&mut self, w: Witness) {
        self.strict.insert(w);
    }

    /// A failure that only matters for the strict (total) verdict.
    pub fn fail_totality(&mut self, w: Witness) {
        self.totality.insert(w);
    }

    pub fn is_clean(&self) -> bool {
        self.strict.is_empty() && self.totality.is_empty()
    }

    pub fn finish(self, clause: &str) -> ClauseResult {
        let passed_relaxed = self.strict.is_empty();
        let all: BTreeSet<Witness> = self.strict.into_iter().chain(self.totality).collect();
        ClauseResult {
            clause: clause.to_owned(),
            passed: all.is_empty(),
            passed_relaxed,
            witness_total: all.len(),
            witnesses: all.into_iter().take(WITNESS_CAP).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub clauses: Vec<ClauseResult>,
}

impl ValidationReport {
    pub fn valid(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    /// Functional but possibly partial: every clause passes once totality
    /// failures are disregarded.
    pub fn valid_as_relation(&self) -> bool {
        self.clauses.iter().all(|c| c.passed_relaxed)
    }

    pub fn clause(&self, id: &str) -> Option<&ClauseResult> {
        self.clauses.iter().find(|c| c.clause == id)
    }

    pub fn failing(&self) -> Vec<String> {
        self.clauses
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.clause.clone())
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "clauses": self.clauses,
            "valid": self.valid(),
            "valid_as_relation": self.valid_as_relation(),
        })
    }
}
