//! Concrete learning systems: empirical risk minimization over a finite
//! class, 1-nearest-neighbor memorization and a perceptron on a clamped
//! integer weight grid, plus two standard hypothesis classes on a line.
//!
//! Datasets are given as [`Bindings`]: dataset id to its multiset of `(x, y)`
//! pairs. All tie-breaking follows canonical element order.

mod erm;
mod nn1;
mod perceptron;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::learning::{Bindings, Pair};
use crate::relation::{is_functional, Atom, FiniteSet, Relation};

pub use erm::{erm_learner, erm_learner_traced};
pub use nn1::{nn1_learner, DistanceTable};
pub use perceptron::{
    decode_weights, encode_weights, encode_point, parse_point, perceptron_seeker, separable_fixture, xor_fixture,
    PerceptronFixture, PerceptronStep, WEIGHT_GRID_LIMIT,
};

/// A finite hypothesis class `H ⊆ Θ × X × Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisClass {
    pub x_set: FiniteSet,
    pub y_set: FiniteSet,
    pub params: FiniteSet,
    pub hyp: Relation,
}

const MAX_POINTS: usize = 20;

fn check_points(n: usize) -> Result<()> {
    if (1..=MAX_POINTS).contains(&n) {
        Ok(())
    } else {
        Err(Error::OutOfRangeParameter {
            name: "n".to_owned(),
            value: n.to_string(),
            expected: format!("1 <= n <= {MAX_POINTS}"),
        })
    }
}

/// Named indicator functions on `0..n`.
type Indicators = Vec<(Atom, Box<dyn Fn(i64) -> bool>)>;

fn line_class(n: usize, params: Indicators) -> HypothesisClass {
    let x_set = FiniteSet::ints("X", 0..n as i64);
    let y_set = FiniteSet::ints("Y", 0..2);
    let params_set = FiniteSet::collect("Theta", params.iter().map(|(p, _)| p.clone()));
    let tuples: Vec<Vec<Atom>> = params
        .iter()
        .flat_map(|(p, f)| (0..n as i64).map(move |x| vec![p.clone(), Atom::Int(x), Atom::Int(f(x) as i64)]))
        .collect();
    let hyp = Relation::new("H", vec![params_set.clone(), x_set.clone(), y_set.clone()], tuples)
        .expect("line classes are well typed");
    HypothesisClass {
        x_set,
        y_set,
        params: params_set,
        hyp,
    }
}

/// Thresholds on `{0..n-1}`: `H(t_i, x) = 1` iff `x >= i`, for `i` in `0..=n`.
pub fn threshold_class(n: usize) -> Result<HypothesisClass> {
    check_points(n)?;
    let params = (0..=n as i64)
        .map(|i| {
            let f: Box<dyn Fn(i64) -> bool> = Box::new(move |x| x >= i);
            (Atom::sym(format!("t{i:02}")), f)
        })
        .collect();
    Ok(line_class(n, params))
}

/// Intervals `[a, b]` on `{0..n-1}` plus the empty interval, which sorts
/// first.
pub fn interval_class(n: usize) -> Result<HypothesisClass> {
    check_points(n)?;
    let mut params: Indicators = vec![(Atom::sym("empty"), Box::new(|_| false))];
    for a in 0..n as i64 {
        for b in a..n as i64 {
            params.push((Atom::sym(format!("i{a:02}_{b:02}")), Box::new(move |x| a <= x && x <= b)));
        }
    }
    Ok(line_class(n, params))
}

/// A loss `Y × Y → V` over integer values, read as `loss(predicted, actual)`.
/// Every diagonal entry is the least element of `V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LossRelation {
    rel: Relation,
    table: HashMap<(Atom, Atom), i64>,
}

impl LossRelation {
    pub fn new(rel: Relation) -> Result<Self> {
        if rel.arity() != 3 {
            return Err(Error::ArityMismatch {
                relation: rel.name().to_owned(),
                expected: 3,
                found: rel.arity(),
            });
        }
        if !rel.components()[0].same_as(&rel.components()[1]) {
            return Err(Error::ComponentMismatch {
                left: rel.components()[0].name().to_owned(),
                right: rel.components()[1].name().to_owned(),
            });
        }
        let f = is_functional(&rel, &[0, 1], &[2])?;
        if !f.functional {
            return Err(Error::NotFunctional {
                relation: rel.name().to_owned(),
            });
        }
        if !f.total {
            return Err(Error::NotTotal {
                relation: rel.name().to_owned(),
            });
        }
        let values = &rel.components()[2];
        let floor = values
            .elements()
            .iter()
            .map(|v| v.as_int().ok_or_else(|| Error::UnorderedValues(v.clone())))
            .collect::<Result<Vec<i64>>>()?
            .into_iter()
            .min()
            .ok_or_else(|| Error::EmptyComponent(values.name().to_owned()))?;
        let mut table = HashMap::new();
        for t in rel.tuples() {
            let v = t[2].as_int().expect("checked above");
            if t[0] == t[1] && v != floor {
                return Err(Error::OutOfRangeParameter {
                    name: format!("{}({}, {})", rel.name(), t[0], t[1]),
                    value: v.to_string(),
                    expected: format!("the least value {floor}"),
                });
            }
            table.insert((t[0].clone(), t[1].clone()), v);
        }
        Ok(LossRelation { rel, table })
    }

    /// 0-1 loss on `y_set`.
    pub fn zero_one(y_set: &FiniteSet) -> Self {
        let values = FiniteSet::ints("V", 0..2);
        let tuples: Vec<Vec<Atom>> = y_set
            .elements()
            .iter()
            .flat_map(|p| {
                y_set
                    .elements()
                    .iter()
                    .map(move |a| vec![p.clone(), a.clone(), Atom::Int((p != a) as i64)])
            })
            .collect();
        let rel = Relation::new("loss", vec![y_set.clone(), y_set.clone(), values], tuples)
            .expect("0-1 loss is well typed");
        Self::new(rel).expect("0-1 loss is a valid loss")
    }

    pub fn relation(&self) -> &Relation {
        &self.rel
    }

    pub fn y_set(&self) -> &FiniteSet {
        &self.rel.components()[0]
    }

    pub fn loss(&self, predicted: &Atom, actual: &Atom) -> Option<i64> {
        self.table.get(&(predicted.clone(), actual.clone())).copied()
    }
}

/// Checks every bound pair against `X × Y`.
fn check_datasets(datasets: &Bindings, x_set: &FiniteSet, y_set: &FiniteSet) -> Result<FiniteSet> {
    if datasets.is_empty() {
        return Err(Error::EmptyDatasets);
    }
    for pairs in datasets.values() {
        for (x, y) in pairs {
            for (pos, set, a) in [(0, x_set, x), (1, y_set, y)] {
                if !set.contains(a) {
                    return Err(Error::ElementNotInComponent {
                        relation: "datasets".to_owned(),
                        position: pos,
                        component: set.name().to_owned(),
                        element: a.clone(),
                    });
                }
            }
        }
    }
    Ok(FiniteSet::collect("D", datasets.keys().cloned()))
}

/// Sorted copy of the bindings, so pair insertion order never matters.
fn canonical(datasets: &Bindings) -> Bindings {
    datasets
        .iter()
        .map(|(d, pairs)| {
            let mut pairs: Vec<Pair> = pairs.clone();
            pairs.sort();
            (d.clone(), pairs)
        })
        .collect()
}
