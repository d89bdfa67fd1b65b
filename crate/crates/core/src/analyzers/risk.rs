//! Empirical risk along nested dataset chains, and goal values.

use std::collections::BTreeMap;

use super::{atoms_str, AnalysisReport, Metric};
use crate::error::{Error, Result};
use crate::learning::{validate, LearningSystem, Pair};
use crate::relation::Atom;
use crate::strata::Concern;

/// Multiset inclusion of sorted pair lists.
fn contained(small: &[Pair], large: &[Pair]) -> bool {
    let mut counts: BTreeMap<&Pair, isize> = BTreeMap::new();
    for p in large {
        *counts.entry(p).or_default() += 1;
    }
    small.iter().all(|p| {
        let c = counts.entry(p).or_default();
        *c -= 1;
        *c >= 0
    })
}

/// 0-1 risk of `H(A(d), ·)` on `eval` for each `d` in `chain`.
pub fn chain_risks(ls: &LearningSystem, chain: &[Atom], eval: &[Pair]) -> Result<Vec<f64>> {
    let report = validate(ls);
    if !report.valid() {
        return Err(Error::InvalidSystem(report.failing()));
    }
    if eval.is_empty() {
        return Err(Error::EmptyEval);
    }
    for (i, w) in chain.windows(2).enumerate() {
        if !contained(ls.dataset(&w[0])?, ls.dataset(&w[1])?) {
            return Err(Error::NotNested {
                index: i,
                smaller: w[0].clone(),
                larger: w[1].clone(),
            });
        }
    }
    let hyp = ls.hyp().last_as_function();
    chain
        .iter()
        .map(|d| {
            ls.dataset(d)?;
            let theta = ls.learned(d).expect("valid systems have total functional A");
            let errors = eval
                .iter()
                .filter(|(x, y)| {
                    hyp.get(&vec![theta.clone(), x.clone()])
                        .is_none_or(|pred| pred != y)
                })
                .count();
            Ok(errors as f64 / eval.len() as f64)
        })
        .collect()
}

/// Risk on `eval` after learning from each dataset of a nested chain; the
/// `monotone` verdict holds when risk never increases along the chain.
pub fn monotonicity(ls: &LearningSystem, chain: &[Atom], eval: &[Pair]) -> Result<AnalysisReport> {
    let risks = chain_risks(ls, chain, eval)?;
    let monotone = risks.windows(2).all(|w| w[1] <= w[0]);
    Ok(AnalysisReport::new(Concern::Monotonicity)
        .input("chain", atoms_str(chain))
        .input("eval_size", eval.len())
        .metric("risk", Metric::Series(risks))
        .verdict("monotone", monotone)
        .note("0-1 loss, normalized by evaluation size"))
}

/// `G(d, θ)`.
pub fn error_of(ls: &LearningSystem, d: &Atom, theta: &Atom) -> Result<Atom> {
    let mut values = ls
        .goal()
        .tuple_set()
        .range(vec![d.clone(), theta.clone()]..)
        .take_while(|t| &t[0] == d && &t[1] == theta)
        .map(|t| &t[2]);
    let first = values.next().ok_or_else(|| Error::UndefinedGoal {
        dataset: d.clone(),
        theta: theta.clone(),
    })?;
    if values.next().is_some() {
        return Err(Error::NotFunctional {
            relation: ls.goal().name().to_owned(),
        });
    }
    Ok(first.clone())
}

pub fn error_report(ls: &LearningSystem, d: &Atom, theta: &Atom) -> Result<AnalysisReport> {
    let v = error_of(ls, d, theta)?;
    let mut report = AnalysisReport::new(Concern::Error)
        .input("dataset", d)
        .input("theta", theta)
        .input("value", &v);
    report.eval_counts.g_evals = 1;
    if let Some(i) = v.as_int() {
        report = report.metric("value", Metric::Real(i as f64));
    }
    Ok(report)
}
