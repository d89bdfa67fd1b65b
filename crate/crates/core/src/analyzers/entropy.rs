//! Empirical entropies of a sample of `(x, y)` pairs, in bits.
//!
//! Plug-in estimates from frequency counts with `0 · log 0 = 0`. Used as the
//! estimator for both information complexity and distribution concerns.

use std::collections::BTreeMap;

use super::{AnalysisReport, Metric, RECONSTRUCTED};
use crate::error::{Error, Result};
use crate::learning::Pair;
use crate::relation::Atom;
use crate::strata::Concern;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entropies {
    pub h_x: f64,
    pub h_y: f64,
    pub h_xy: f64,
    /// `H(Y | X) = H(X, Y) - H(X)`.
    pub h_y_given_x: f64,
}

fn entropy_of<K: Ord>(counts: &BTreeMap<K, usize>, n: usize) -> f64 {
    let n = n as f64;
    counts
        .values()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

pub fn entropies(pairs: &[Pair]) -> Result<Entropies> {
    if pairs.is_empty() {
        return Err(Error::EmptyData);
    }
    let mut cx: BTreeMap<&Atom, usize> = BTreeMap::new();
    let mut cy: BTreeMap<&Atom, usize> = BTreeMap::new();
    let mut cxy: BTreeMap<(&Atom, &Atom), usize> = BTreeMap::new();
    for (x, y) in pairs {
        *cx.entry(x).or_default() += 1;
        *cy.entry(y).or_default() += 1;
        *cxy.entry((x, y)).or_default() += 1;
    }
    let n = pairs.len();
    let h_x = entropy_of(&cx, n);
    let h_xy = entropy_of(&cxy, n);
    Ok(Entropies {
        h_x,
        h_y: entropy_of(&cy, n),
        h_xy,
        // clamp the rounding residue of a deterministic sample
        h_y_given_x: (h_xy - h_x).max(0.0),
    })
}

/// Report for [`Concern::InformationComplexity`] or [`Concern::Distribution`].
pub fn distribution_entropy(pairs: &[Pair], concern: Concern) -> Result<AnalysisReport> {
    let e = entropies(pairs)?;
    Ok(AnalysisReport::new(concern)
        .input("sample_size", pairs.len())
        .metric("h_x", Metric::Real(e.h_x))
        .metric("h_y", Metric::Real(e.h_y))
        .metric("h_xy", Metric::Real(e.h_xy))
        .metric("h_y_given_x", Metric::Real(e.h_y_given_x))
        .note("empirical entropy in bits, 0 log 0 = 0")
        .note(RECONSTRUCTED))
}
