use std::collections::BTreeMap;

use super::{canonical, check_datasets};
use crate::error::{Error, Result};
use crate::learning::{Bindings, DataMode, LearningParts, LearningSystem};
use crate::relation::{Atom, FiniteSet, Relation};

/// Symmetric distances on `X`; the distance of a point to itself is 0.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DistanceTable {
    table: BTreeMap<(Atom, Atom), u64>,
}

impl DistanceTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: Atom, b: Atom, d: u64) {
        self.table.insert((a, b), d);
    }

    /// `|a - b|` on an integer set.
    pub fn abs_diff(x_set: &FiniteSet) -> Result<Self> {
        let ints = x_set
            .elements()
            .iter()
            .map(|a| a.as_int().ok_or_else(|| Error::UnorderedValues(a.clone())))
            .collect::<Result<Vec<i64>>>()?;
        let mut t = Self::new();
        for &a in &ints {
            for &b in &ints {
                t.insert(Atom::Int(a), Atom::Int(b), a.abs_diff(b));
            }
        }
        Ok(t)
    }

    /// Reads a relation `X × X × V` with non-negative integer values.
    pub fn from_relation(rel: &Relation) -> Result<Self> {
        if rel.arity() != 3 {
            return Err(Error::ArityMismatch {
                relation: rel.name().to_owned(),
                expected: 3,
                found: rel.arity(),
            });
        }
        let mut t = Self::new();
        for tuple in rel.tuples() {
            let d = tuple[2]
                .as_int()
                .filter(|v| *v >= 0)
                .ok_or_else(|| Error::UnorderedValues(tuple[2].clone()))?;
            t.insert(tuple[0].clone(), tuple[1].clone(), d as u64);
        }
        Ok(t)
    }

    pub fn get(&self, a: &Atom, b: &Atom) -> Result<u64> {
        if a == b {
            return Ok(0);
        }
        self.table
            .get(&(a.clone(), b.clone()))
            .or_else(|| self.table.get(&(b.clone(), a.clone())))
            .copied()
            .ok_or_else(|| Error::MissingDistance(a.clone(), b.clone()))
    }
}

/// 1-nearest-neighbor memorization in batch mode.
///
/// Parameters are the datasets themselves and `A` is the identity. `H(θ, x)`
/// is the label of the stored pair of `θ` nearest to `x`, ties going to the
/// smaller stored `x` and then the smaller `y`. `G` is the training 0-1 loss.
pub fn nn1_learner(
    x_set: &FiniteSet,
    y_set: &FiniteSet,
    distances: &DistanceTable,
    datasets: &Bindings,
) -> Result<LearningSystem> {
    let data = check_datasets(datasets, x_set, y_set)?;
    let datasets = canonical(datasets);
    if datasets.values().any(Vec::is_empty) {
        return Err(Error::EmptyData);
    }
    let params = data.renamed("Theta");

    let mut hyp_tuples = Vec::with_capacity(params.len() * x_set.len());
    let mut predict: BTreeMap<(&Atom, &Atom), &Atom> = BTreeMap::new();
    for (theta, stored) in &datasets {
        for x in x_set.elements() {
            let mut best: Option<(u64, &Atom, &Atom)> = None;
            for (sx, sy) in stored {
                let cand = (distances.get(x, sx)?, sx, sy);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
            let (_, _, y) = best.expect("datasets are nonempty");
            predict.insert((theta, x), y);
            hyp_tuples.push(vec![theta.clone(), x.clone(), y.clone()]);
        }
    }
    let hyp = Relation::new("H", vec![params.clone(), x_set.clone(), y_set.clone()], hyp_tuples)?;

    let mut goal_tuples = Vec::new();
    let mut seek_tuples = Vec::new();
    for (d, pairs) in &datasets {
        for theta in params.elements() {
            let errors = pairs.iter().filter(|(x, y)| predict[&(theta, x)] != y).count() as i64;
            if theta == d {
                seek_tuples.push(vec![d.clone(), Atom::Int(errors), theta.clone()]);
            }
            goal_tuples.push(vec![d.clone(), theta.clone(), Atom::Int(errors)]);
        }
    }
    let values = FiniteSet::collect("V", goal_tuples.iter().map(|t| t[2].clone()));
    let goal = Relation::new("G", vec![data.clone(), params.clone(), values.clone()], goal_tuples)?;
    let seek = Relation::new("E", vec![data.clone(), values.clone(), params.clone()], seek_tuples)?;
    let algo = Relation::new(
        "A",
        vec![data.clone(), params.clone()],
        data.elements().iter().map(|d| vec![d.clone(), d.clone()]),
    )?;
    LearningSystem::new(LearningParts {
        x_set: x_set.clone(),
        y_set: y_set.clone(),
        data,
        mode: DataMode::Batch,
        bindings: datasets,
        params,
        values,
        algo,
        goal,
        seek,
        hyp,
    })
}
