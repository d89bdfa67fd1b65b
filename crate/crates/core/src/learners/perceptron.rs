//! Perceptron on a clamped integer weight grid.
//!
//! Inputs are integer points written `(a,b)`, labels are `-1` and `1`, and a
//! parameter is a weight triple `(w1, w2, bias)` with every entry in
//! `[-W, W]`, written as a symbol like `w+1-2+0`. A point is misclassified
//! when `y * (w1*a + w2*b + bias) <= 0`; the hypothesis predicts `1` exactly
//! when the activation is positive.

use std::collections::BTreeMap;

use super::check_datasets;
use crate::analyzers::StepRule;
use crate::error::{Error, Result};
use crate::learning::{derive_algorithm, Bindings, DataMode, LearningParts, LearningSystem, Pair};
use crate::relation::{Atom, FiniteSet, Relation};

pub const WEIGHT_GRID_LIMIT: usize = 100_000;

type Weights = (i64, i64, i64);
type Point = (i64, i64);

pub fn encode_weights((w1, w2, b): Weights) -> Atom {
    Atom::sym(format!("w{w1:+}{w2:+}{b:+}"))
}

pub fn decode_weights(a: &Atom) -> Option<Weights> {
    let Atom::Sym(s) = a else { return None };
    let rest = s.strip_prefix('w')?;
    let starts: Vec<usize> = rest.match_indices(['+', '-']).map(|(i, _)| i).collect();
    if starts.len() != 3 || starts[0] != 0 {
        return None;
    }
    let part = |i: usize| {
        let end = starts.get(i + 1).copied().unwrap_or(rest.len());
        rest[starts[i]..end].parse::<i64>().ok()
    };
    let w = (part(0)?, part(1)?, part(2)?);
    (encode_weights(w) == *a).then_some(w)
}

pub fn encode_point((a, b): Point) -> Atom {
    Atom::sym(format!("({a},{b})"))
}

/// Parses `(a,b)`; only the canonical spelling is accepted.
pub fn parse_point(x: &Atom) -> Result<Point> {
    let malformed = || Error::MalformedPoint(x.to_string());
    let Atom::Sym(s) = x else { return Err(malformed()) };
    let inner = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(malformed)?;
    let (a, b) = inner.split_once(',').ok_or_else(malformed)?;
    let p = (a.parse().map_err(|_| malformed())?, b.parse().map_err(|_| malformed())?);
    if encode_point(p) != *x {
        return Err(malformed());
    }
    Ok(p)
}

fn label(y: &Atom) -> Result<i64> {
    match y.as_int() {
        Some(v @ (-1 | 1)) => Ok(v),
        _ => Err(Error::ElementNotInComponent {
            relation: "datasets".to_owned(),
            position: 1,
            component: "Y".to_owned(),
            element: y.clone(),
        }),
    }
}

fn activation((w1, w2, b): Weights, (x1, x2): Point) -> i64 {
    w1 * x1 + w2 * x2 + b
}

/// Update on the first misclassified point of the dataset, in canonical
/// pair order; the weights stay put when nothing is misclassified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerceptronStep {
    weight_bound: i64,
    points: BTreeMap<Atom, Vec<(Point, i64)>>,
}

impl PerceptronStep {
    pub fn new(datasets: &Bindings, weight_bound: i64) -> Result<Self> {
        if weight_bound < 0 {
            return Err(Error::OutOfRangeParameter {
                name: "weight_bound".to_owned(),
                value: weight_bound.to_string(),
                expected: ">= 0".to_owned(),
            });
        }
        let mut points = BTreeMap::new();
        for (d, pairs) in datasets {
            let mut pairs: Vec<&Pair> = pairs.iter().collect();
            pairs.sort();
            let parsed = pairs
                .into_iter()
                .map(|(x, y)| Ok((parse_point(x)?, label(y)?)))
                .collect::<Result<Vec<_>>>()?;
            points.insert(d.clone(), parsed);
        }
        Ok(PerceptronStep { weight_bound, points })
    }

    /// Rebuilds the rule from a perceptron system: datasets from the bindings,
    /// the bound from the largest weight in `Θ`.
    pub fn from_system(ls: &LearningSystem) -> Result<Self> {
        let mut bound = 0;
        for theta in ls.params().elements() {
            let (a, b, c) = decode_weights(theta).ok_or_else(|| Error::OutOfRangeParameter {
                name: ls.params().name().to_owned(),
                value: theta.to_string(),
                expected: "weight triples like w+1-2+0".to_owned(),
            })?;
            bound = bound.max(a.abs()).max(b.abs()).max(c.abs());
        }
        Self::new(ls.bindings(), bound)
    }

    pub fn weight_bound(&self) -> i64 {
        self.weight_bound
    }

    fn update(&self, w: Weights, points: &[(Point, i64)]) -> Weights {
        let Some(&((x1, x2), y)) = points.iter().find(|&&(p, y)| y * activation(w, p) <= 0) else {
            return w;
        };
        let clamp = |v: i64| v.clamp(-self.weight_bound, self.weight_bound);
        (clamp(w.0 + y * x1), clamp(w.1 + y * x2), clamp(w.2 + y))
    }
}

impl StepRule for PerceptronStep {
    fn name(&self) -> String {
        format!("perceptron(W={})", self.weight_bound)
    }

    fn step(&self, dataset: &Atom, theta: &Atom) -> Option<Atom> {
        let w = decode_weights(theta)?;
        let points = self.points.get(dataset)?;
        Some(encode_weights(self.update(w, points)))
    }
}

#[derive(Debug, Clone)]
pub struct PerceptronFixture {
    pub system: LearningSystem,
    pub step: PerceptronStep,
    pub theta0: Atom,
    /// Fixed point reached from `theta0` for each dataset, if any within the
    /// step budget.
    pub fixed_points: BTreeMap<Atom, Option<Atom>>,
}

/// Builds the perceptron learning system.
///
/// `G(d, θ)` counts misclassified pairs. `E` holds, for each dataset whose
/// run from `theta0` reaches a fixed point within `max_steps`, that fixed
/// point and its goal value. Datasets without one are left out of `E`, so
/// `A` is partial there and the system is only valid as a relation.
pub fn perceptron_seeker(
    datasets: &Bindings,
    weight_bound: i64,
    theta0: Weights,
    max_steps: usize,
) -> Result<PerceptronFixture> {
    let step = PerceptronStep::new(datasets, weight_bound)?;
    let side = 2 * weight_bound as usize + 1;
    let size = side.saturating_mul(side).saturating_mul(side);
    if size > WEIGHT_GRID_LIMIT {
        return Err(Error::GridTooLarge {
            size,
            limit: WEIGHT_GRID_LIMIT,
        });
    }
    if [theta0.0, theta0.1, theta0.2].iter().any(|v| v.abs() > weight_bound) {
        return Err(Error::OutOfRangeParameter {
            name: "theta0".to_owned(),
            value: encode_weights(theta0).to_string(),
            expected: format!("entries within [-{weight_bound}, {weight_bound}]"),
        });
    }

    let x_set = FiniteSet::collect("X", datasets.values().flatten().map(|(x, _)| x.clone()));
    let y_set = FiniteSet::ints("Y", [-1, 1]);
    let data = check_datasets(datasets, &x_set, &y_set)?;
    let w = weight_bound;
    let grid: Vec<Weights> = (-w..=w)
        .flat_map(|a| (-w..=w).flat_map(move |b| (-w..=w).map(move |c| (a, b, c))))
        .collect();
    let params = FiniteSet::collect("Theta", grid.iter().map(|&w| encode_weights(w)));

    let xs: Vec<(Atom, Point)> = x_set
        .elements()
        .iter()
        .map(|x| Ok((x.clone(), parse_point(x)?)))
        .collect::<Result<_>>()?;
    let hyp = Relation::new(
        "H",
        vec![params.clone(), x_set.clone(), y_set.clone()],
        grid.iter().flat_map(|&w| {
            xs.iter().map(move |(x, p)| {
                let y = if activation(w, *p) > 0 { 1 } else { -1 };
                vec![encode_weights(w), x.clone(), Atom::Int(y)]
            })
        }),
    )?;

    let loss = |d: &Atom, w: Weights| -> i64 {
        step.points[d]
            .iter()
            .filter(|&&(p, y)| (if activation(w, p) > 0 { 1 } else { -1 }) != y)
            .count() as i64
    };
    let mut goal_tuples = Vec::with_capacity(data.len() * grid.len());
    for d in data.elements() {
        for &w in &grid {
            goal_tuples.push(vec![d.clone(), encode_weights(w), Atom::Int(loss(d, w))]);
        }
    }
    let values = FiniteSet::collect("V", goal_tuples.iter().map(|t| t[2].clone()));
    let goal = Relation::new("G", vec![data.clone(), params.clone(), values.clone()], goal_tuples)?;

    let mut fixed_points = BTreeMap::new();
    let mut seek_tuples = Vec::new();
    for d in data.elements() {
        let mut w = theta0;
        let mut end = None;
        for _ in 0..=max_steps {
            let next = step.update(w, &step.points[d]);
            if next == w {
                end = Some(w);
                break;
            }
            w = next;
        }
        if let Some(w) = end {
            seek_tuples.push(vec![d.clone(), Atom::Int(loss(d, w)), encode_weights(w)]);
        }
        fixed_points.insert(d.clone(), end.map(encode_weights));
    }
    let seek = Relation::new("E", vec![data.clone(), values.clone(), params.clone()], seek_tuples)?;
    let algo = derive_algorithm(&goal, &seek, &data, &params)?;
    let system = LearningSystem::new(LearningParts {
        x_set,
        y_set,
        data,
        mode: DataMode::Batch,
        bindings: datasets.clone(),
        params,
        values,
        algo,
        goal,
        seek,
        hyp,
    })?;
    Ok(PerceptronFixture {
        system,
        step,
        theta0: encode_weights(theta0),
        fixed_points,
    })
}

fn fixture(id: &str, points: &[(Point, i64)]) -> Bindings {
    let pairs = points.iter().map(|&(p, y)| (encode_point(p), Atom::Int(y))).collect();
    Bindings::from([(Atom::sym(id), pairs)])
}

/// Four linearly separable points.
pub fn separable_fixture() -> Bindings {
    fixture("sep", &[((1, 1), 1), ((2, 1), 1), ((-1, -1), -1), ((-1, -2), -1)])
}

/// XOR labels on the unit square; no separator exists.
pub fn xor_fixture() -> Bindings {
    fixture("xor", &[((0, 0), -1), ((1, 1), -1), ((0, 1), 1), ((1, 0), 1)])
}
