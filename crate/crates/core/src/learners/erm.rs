use std::collections::BTreeMap;

use super::{canonical, check_datasets, HypothesisClass, LossRelation};
use crate::analyzers::HypothesisTable;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::learning::{derive_algorithm, Bindings, DataMode, LearningParts, LearningSystem};
use crate::relation::{Atom, FiniteSet, Relation};
use crate::trace::Trace;

/// Empirical risk minimization in batch mode.
///
/// `G(d, θ)` sums `loss(H(θ, x), y)` over the pairs of `d`; `E` picks the
/// least-index minimizer of `G(d, ·)`; `A` is derived from `G` and `E`.
pub fn erm_learner(class: &HypothesisClass, loss: &LossRelation, datasets: &Bindings) -> Result<LearningSystem> {
    erm_learner_traced(class, loss, datasets, &mut Trace::new(), Exec::default())
}

/// As [`erm_learner`], counting `|D|·|Θ|` goal evaluations and one seeking
/// application per dataset.
pub fn erm_learner_traced(
    class: &HypothesisClass,
    loss: &LossRelation,
    datasets: &Bindings,
    trace: &mut Trace,
    exec: Exec,
) -> Result<LearningSystem> {
    let table = HypothesisTable::new(&class.hyp)?;
    if !loss.y_set().same_as(&class.y_set) {
        return Err(Error::ComponentMismatch {
            left: loss.relation().name().to_owned(),
            right: class.y_set.name().to_owned(),
        });
    }
    let data = check_datasets(datasets, &class.x_set, &class.y_set)?;
    let datasets = canonical(datasets);
    trace.begin("erm");

    let grid: Vec<(&Atom, &Atom)> = data
        .elements()
        .iter()
        .flat_map(|d| class.params.elements().iter().map(move |t| (d, t)))
        .collect();
    let sums = exec.map(&grid, |&(d, theta)| -> i64 {
        datasets[d]
            .iter()
            .map(|(x, y)| {
                let pred = table.apply(theta, x).expect("pairs are typed");
                loss.loss(pred, y).expect("loss is total")
            })
            .sum()
    });
    trace.g_evals += grid.len() as u64;

    // least-index argmin per dataset; grid is in (d, θ) canonical order
    let mut best: BTreeMap<&Atom, (i64, &Atom)> = BTreeMap::new();
    for (&(d, theta), &v) in grid.iter().zip(&sums) {
        match best.get(d) {
            Some(&(bv, _)) if bv <= v => {}
            _ => {
                best.insert(d, (v, theta));
            }
        }
    }
    trace.e_apps += data.len() as u64;

    let values = FiniteSet::collect("V", sums.iter().map(|&v| Atom::Int(v)));
    let goal = Relation::new(
        "G",
        vec![data.clone(), class.params.clone(), values.clone()],
        grid.iter()
            .zip(&sums)
            .map(|(&(d, t), &v)| vec![d.clone(), t.clone(), Atom::Int(v)]),
    )?;
    let seek = Relation::new(
        "E",
        vec![data.clone(), values.clone(), class.params.clone()],
        best.iter()
            .map(|(&d, &(v, t))| vec![d.clone(), Atom::Int(v), t.clone()]),
    )?;
    let algo = derive_algorithm(&goal, &seek, &data, &class.params)?;
    LearningSystem::new(LearningParts {
        x_set: class.x_set.clone(),
        y_set: class.y_set.clone(),
        data,
        mode: DataMode::Batch,
        bindings: datasets,
        params: class.params.clone(),
        values,
        algo,
        goal,
        seek,
        hyp: class.hyp.clone(),
    })
}
