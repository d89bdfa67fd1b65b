//! Iterated seeking: apply a step rule `θ ↦ step(d, θ)` from `θ0` and watch
//! the goal values `G(d, θ_t)`.
//!
//! The run stops at the first fixed point, at the first repeated state (a
//! cycle, since the rule is deterministic) or after `max_steps` transitions.
//! Each visited state costs one goal evaluation and each call of the rule one
//! seeking application, so a trace of `t` transitions that ends in a fixed
//! point records `t + 1` of each.

use std::collections::{BTreeMap, HashMap};

use super::{atoms_str, AnalysisReport, EvalCounts, Metric};
use crate::error::{Error, Result};
use crate::learning::{validate, LearningSystem};
use crate::relation::{Atom, Relation, Tuple};
use crate::strata::Concern;
use crate::trace::Trace;

pub trait StepRule {
    fn name(&self) -> String;

    /// Next parameter, or `None` where the rule is undefined.
    fn step(&self, dataset: &Atom, theta: &Atom) -> Option<Atom>;
}

/// `θ ↦ θ`.
pub struct IdentityStep;

impl StepRule for IdentityStep {
    fn name(&self) -> String {
        "identity".to_owned()
    }

    fn step(&self, _dataset: &Atom, theta: &Atom) -> Option<Atom> {
        Some(theta.clone())
    }
}

/// Jumps to the least-index minimizer of `G(d, ·)` regardless of `θ`.
pub struct ArgminStep {
    best: BTreeMap<Atom, Atom>,
}

impl ArgminStep {
    pub fn new(ls: &LearningSystem) -> Result<Self> {
        let mut best: BTreeMap<Atom, (i64, Atom)> = BTreeMap::new();
        for t in ls.goal().tuples() {
            let v = t[2].as_int().ok_or_else(|| Error::UnorderedValues(t[2].clone()))?;
            // tuples arrive in canonical (d, θ) order, so strict < keeps the least index
            match best.get(&t[0]) {
                Some((bv, _)) if *bv <= v => {}
                _ => {
                    best.insert(t[0].clone(), (v, t[1].clone()));
                }
            }
        }
        Ok(ArgminStep {
            best: best.into_iter().map(|(d, (_, th))| (d, th)).collect(),
        })
    }
}

impl StepRule for ArgminStep {
    fn name(&self) -> String {
        "argmin".to_owned()
    }

    fn step(&self, dataset: &Atom, _theta: &Atom) -> Option<Atom> {
        self.best.get(dataset).cloned()
    }
}

/// A step rule given extensionally as a relation over `D × Θ × Θ`.
pub struct TableStep {
    name: String,
    table: HashMap<Tuple, Atom>,
}

impl TableStep {
    pub fn new(rel: &Relation) -> Result<Self> {
        if rel.arity() != 3 {
            return Err(Error::ArityMismatch {
                relation: rel.name().to_owned(),
                expected: 3,
                found: rel.arity(),
            });
        }
        let f = crate::relation::is_functional(rel, &[0, 1], &[2])?;
        if !f.functional {
            return Err(Error::NotFunctional {
                relation: rel.name().to_owned(),
            });
        }
        Ok(TableStep {
            name: rel.name().to_owned(),
            table: rel.last_as_function(),
        })
    }
}

impl StepRule for TableStep {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn step(&self, dataset: &Atom, theta: &Atom) -> Option<Atom> {
        self.table.get(&vec![dataset.clone(), theta.clone()]).cloned()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRun {
    pub thetas: Vec<Atom>,
    pub values: Vec<i64>,
    /// Step index `t` with `step(θ_t) = θ_t`.
    pub fixed_point_at: Option<usize>,
    /// Cycle length when a state repeated without a fixed point.
    pub period: Option<usize>,
}

impl ConvergenceRun {
    pub fn monotone_descent(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }

    pub fn oscillating(&self) -> bool {
        self.period.is_some()
    }

    pub fn final_theta(&self) -> &Atom {
        self.thetas.last().expect("a run has at least its start")
    }
}

fn goal_value(goal: &HashMap<Tuple, Atom>, d: &Atom, theta: &Atom) -> Result<i64> {
    let v = goal
        .get(&vec![d.clone(), theta.clone()])
        .ok_or_else(|| Error::UndefinedGoal {
            dataset: d.clone(),
            theta: theta.clone(),
        })?;
    v.as_int().ok_or_else(|| Error::UnorderedValues(v.clone()))
}

/// Runs the step rule; the system only needs to be valid as a relation.
pub fn trace_convergence(
    ls: &LearningSystem,
    dataset: &Atom,
    theta0: &Atom,
    step: &dyn StepRule,
    max_steps: usize,
    trace: &mut Trace,
) -> Result<ConvergenceRun> {
    let report = validate(ls);
    if !report.valid_as_relation() {
        return Err(Error::InvalidSystem(report.failing()));
    }
    if !ls.data().contains(dataset) {
        return Err(Error::UnknownDataset(dataset.clone()));
    }
    if !ls.params().contains(theta0) {
        return Err(Error::ElementNotInComponent {
            relation: "theta0".to_owned(),
            position: 0,
            component: ls.params().name().to_owned(),
            element: theta0.clone(),
        });
    }
    let goal = ls.goal().last_as_function();
    trace.begin("convergence_trace");

    let mut run = ConvergenceRun {
        thetas: vec![theta0.clone()],
        values: vec![goal_value(&goal, dataset, theta0)?],
        fixed_point_at: None,
        period: None,
    };
    trace.g_evals += 1;
    let mut seen: HashMap<Atom, usize> = HashMap::from([(theta0.clone(), 0)]);
    for t in 0..max_steps {
        let current = run.thetas[t].clone();
        let next = step.step(dataset, &current).ok_or_else(|| Error::StepUndefined {
            dataset: dataset.clone(),
            theta: current.clone(),
        })?;
        trace.e_apps += 1;
        if next == current {
            run.fixed_point_at = Some(t);
            break;
        }
        if let Some(&first) = seen.get(&next) {
            run.period = Some(t + 1 - first);
            break;
        }
        run.values.push(goal_value(&goal, dataset, &next)?);
        trace.g_evals += 1;
        seen.insert(next.clone(), t + 1);
        run.thetas.push(next);
    }
    Ok(run)
}

pub fn convergence_trace(
    ls: &LearningSystem,
    dataset: &Atom,
    theta0: &Atom,
    step: &dyn StepRule,
    max_steps: usize,
    trace: &mut Trace,
) -> Result<AnalysisReport> {
    let run = trace_convergence(ls, dataset, theta0, step, max_steps, trace)?;
    let exhausted = run.fixed_point_at.is_none() && run.period.is_none();
    let mut report = AnalysisReport::new(Concern::Convergence)
        .input("dataset", dataset)
        .input("theta0", theta0)
        .input("step", step.name())
        .input("max_steps", max_steps)
        .input("trajectory", atoms_str(&run.thetas))
        .metric("steps", Metric::Count((run.thetas.len() - 1) as u64))
        .metric("values", Metric::Series(run.values.iter().map(|&v| v as f64).collect()))
        .metric(
            "final_value",
            Metric::Real(*run.values.last().expect("nonempty") as f64),
        )
        .verdict("fixed_point", run.fixed_point_at.is_some())
        .verdict("monotone_descent", run.monotone_descent())
        .verdict("oscillating", run.oscillating())
        .verdict("exhausted", exhausted);
    if let Some(p) = run.period {
        report = report.metric("period", Metric::Count(p as u64));
    }
    report.eval_counts = EvalCounts::from(&*trace);
    Ok(report)
}
