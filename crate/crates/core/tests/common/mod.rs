//! Seeded corpus of small learning systems and single-tuple mutations.
#![allow(dead_code)]

pub mod golden;

use std::collections::{BTreeMap, BTreeSet};

use learnsys::learners::{
    encode_point, erm_learner, interval_class, nn1_learner, perceptron_seeker, threshold_class, DistanceTable,
    LossRelation,
};
use learnsys::learning::{Bindings, DataMode, LearningSystem, Pair};
use learnsys::{Atom, FiniteSet, Relation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed_1e4e;

pub type SeededRng = ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct Sample {
    pub label: String,
    pub learner: &'static str,
    pub system: LearningSystem,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn int_pairs(rng: &mut ChaCha8Rng, n_x: i64, labels: &[i64], len: usize) -> Vec<Pair> {
    (0..len)
        .map(|_| {
            let x = rng.gen_range(0..n_x);
            let y = *labels.choose(rng).unwrap();
            (Atom::Int(x), Atom::Int(y))
        })
        .collect()
}

fn datasets(rng: &mut ChaCha8Rng, n_x: i64, max_sets: usize, max_len: usize) -> Bindings {
    let k = rng.gen_range(1..=max_sets);
    (0..k)
        .map(|i| {
            let len = rng.gen_range(1..=max_len);
            (Atom::sym(format!("d{i}")), int_pairs(rng, n_x, &[0, 1], len))
        })
        .collect()
}

fn with_mode(ls: LearningSystem, mode: DataMode) -> LearningSystem {
    let mut parts = ls.into_parts();
    parts.mode = mode;
    LearningSystem::new(parts).unwrap()
}

/// Linearly separable points on `[-2, 2]²`, labeled by a random separator.
fn separable(rng: &mut ChaCha8Rng, len: usize) -> Vec<Pair> {
    loop {
        let w: (i64, i64, i64) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2), rng.gen_range(-1..=1));
        if w.0 == 0 && w.1 == 0 {
            continue;
        }
        let mut pairs = Vec::new();
        while pairs.len() < len {
            let p = (rng.gen_range(-2..=2i64), rng.gen_range(-2..=2i64));
            let act = w.0 * p.0 + w.1 * p.1 + w.2;
            if act != 0 {
                pairs.push((encode_point(p), Atom::Int(act.signum())));
            }
        }
        return pairs;
    }
}

fn perceptron_sample(rng: &mut ChaCha8Rng) -> LearningSystem {
    loop {
        let k = rng.gen_range(1..=2);
        let data: Bindings = (0..k)
            .map(|i| {
                let len = rng.gen_range(2..=4);
                (Atom::sym(format!("p{i}")), separable(rng, len))
            })
            .collect();
        let f = perceptron_seeker(&data, 2, (0, 0, 0), 50).unwrap();
        if f.fixed_points.values().all(Option::is_some) {
            return f.system;
        }
    }
}

/// At least 50 systems from all four constructors, deterministic in `seed`.
pub fn corpus(seed: u64) -> Vec<Sample> {
    let mut rng = rng(seed);
    let mut out = Vec::new();
    let mut push = |label: String, learner, system| out.push(Sample { label, learner, system });
    for i in 0..15 {
        let n = rng.gen_range(2..=6);
        let class = threshold_class(n).unwrap();
        let data = datasets(&mut rng, n as i64, 4, 5);
        let ls = erm_learner(&class, &LossRelation::zero_one(&class.y_set), &data).unwrap();
        push(format!("erm_threshold_{i}"), "erm", ls);
    }
    for i in 0..12 {
        let n = rng.gen_range(2..=5);
        let class = interval_class(n).unwrap();
        let data = datasets(&mut rng, n as i64, 4, 5);
        let ls = erm_learner(&class, &LossRelation::zero_one(&class.y_set), &data).unwrap();
        push(format!("erm_interval_{i}"), "erm", ls);
    }
    for i in 0..5 {
        let n = rng.gen_range(2..=5);
        let class = threshold_class(n).unwrap();
        let data = datasets(&mut rng, n as i64, 4, 1);
        let ls = erm_learner(&class, &LossRelation::zero_one(&class.y_set), &data).unwrap();
        push(format!("erm_literal_{i}"), "erm", with_mode(ls, DataMode::Literal));
    }
    for i in 0..12 {
        let n = rng.gen_range(3..=6);
        let x = FiniteSet::ints("X", 0..n);
        let y = FiniteSet::ints("Y", 0..2);
        let data = datasets(&mut rng, n, 4, 4);
        let ls = nn1_learner(&x, &y, &DistanceTable::abs_diff(&x).unwrap(), &data).unwrap();
        push(format!("nn1_{i}"), "nn1", ls);
    }
    for i in 0..8 {
        push(format!("perceptron_{i}"), "perceptron", perceptron_sample(&mut rng));
    }
    out
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("nonempty")
}

/// Replaces the `x` of one bound pair with an element outside `X`.
pub fn break_bindings(ls: &LearningSystem, rng: &mut ChaCha8Rng) -> LearningSystem {
    let mut bindings = ls.bindings().clone();
    let keys: Vec<Atom> = bindings.keys().cloned().collect();
    let d = pick(rng, &keys).clone();
    let pairs = bindings.get_mut(&d).unwrap();
    let i = rng.gen_range(0..pairs.len());
    pairs[i].0 = Atom::sym("outside-x");
    ls.with_bindings(bindings).unwrap()
}

/// Drops or contradicts one tuple of `H`.
pub fn break_hypotheses(ls: &LearningSystem, rng: &mut ChaCha8Rng) -> LearningSystem {
    let tuples: Vec<Vec<Atom>> = ls.hyp().tuples().cloned().collect();
    let t = pick(rng, &tuples).clone();
    let hyp = if rng.gen_bool(0.5) {
        ls.hyp().without_tuple(&t)
    } else {
        let other = ls.y_set().elements().iter().find(|y| **y != t[2]).unwrap().clone();
        ls.hyp().with_tuple(vec![t[0].clone(), t[1].clone(), other]).unwrap()
    };
    ls.with_hyp(hyp).unwrap()
}

fn off_algorithm_cells(ls: &LearningSystem) -> Vec<(Atom, Atom)> {
    let mut cells = Vec::new();
    for d in ls.data().elements() {
        let learned = ls.learned(d).unwrap();
        for t in ls.params().elements() {
            if t != learned {
                cells.push((d.clone(), t.clone()));
            }
        }
    }
    cells
}

/// Drops or contradicts one `G` tuple away from the learned parameter.
pub fn break_goal(ls: &LearningSystem, rng: &mut ChaCha8Rng) -> Option<LearningSystem> {
    let cells = off_algorithm_cells(ls);
    if cells.is_empty() {
        return None;
    }
    let (d, t) = pick(rng, &cells).clone();
    let g = ls.goal().last_as_function();
    let v = g[&vec![d.clone(), t.clone()]].clone();
    let other = ls.values().elements().iter().find(|w| **w != v).cloned();
    let goal = match other {
        Some(w) if rng.gen_bool(0.5) => ls.goal().with_tuple(vec![d, t, w]).unwrap(),
        _ => ls.goal().without_tuple(&[d, t, v]),
    };
    Some(ls.with_goal(goal).unwrap())
}

/// Redirects one `A` tuple, or removes the `E` tuple behind it.
pub fn break_consistency(ls: &LearningSystem, rng: &mut ChaCha8Rng) -> Option<LearningSystem> {
    let cells = off_algorithm_cells(ls);
    if cells.is_empty() || rng.gen_bool(0.5) {
        let d = pick(rng, ls.data().elements()).clone();
        let theta = ls.learned(&d).unwrap().clone();
        let v = ls.goal().last_as_function()[&vec![d.clone(), theta.clone()]].clone();
        return Some(ls.with_seek(ls.seek().without_tuple(&[d, v, theta])).unwrap());
    }
    let (d, t) = pick(rng, &cells).clone();
    let learned = ls.learned(&d).unwrap().clone();
    let algo = ls
        .algo()
        .without_tuple(&[d.clone(), learned])
        .with_tuple(vec![d, t])
        .unwrap();
    Some(ls.with_algo(algo).unwrap())
}

// ---- oracles, written directly against the extensional relations ----

/// `{(d, θ) : (d, G(d, θ), θ) ∈ E}` by nested loops.
pub fn oracle_algorithm(ls: &LearningSystem) -> BTreeSet<Vec<Atom>> {
    let mut out = BTreeSet::new();
    for d in ls.data().elements() {
        for t in ls.params().elements() {
            for g in ls.goal().tuples() {
                if &g[0] == d && &g[1] == t && ls.seek().contains(&[d.clone(), g[2].clone(), t.clone()]) {
                    out.insert(vec![d.clone(), t.clone()]);
                }
            }
        }
    }
    out
}

/// `{(d, x, y) : ∃θ. (d, θ) ∈ A ∧ (θ, x, y) ∈ H}` by nested loops.
pub fn oracle_behavior(ls: &LearningSystem) -> BTreeSet<Vec<Atom>> {
    let mut out = BTreeSet::new();
    for a in ls.algo().tuples() {
        for h in ls.hyp().tuples() {
            if a[1] == h[0] {
                out.insert(vec![a[0].clone(), h[1].clone(), h[2].clone()]);
            }
        }
    }
    out
}

/// 0-1 training loss of `θ` on `d`, straight from the bindings and `H`.
pub fn oracle_loss(ls: &LearningSystem, d: &Atom, theta: &Atom) -> i64 {
    ls.bindings()[d]
        .iter()
        .filter(|(x, y)| !ls.hyp().contains(&[theta.clone(), x.clone(), y.clone()]))
        .count() as i64
}

/// Number of distinct labelings of `sample` realized by `hyp`, from scratch.
pub fn oracle_growth(hyp: &Relation, sample: &[Atom]) -> usize {
    let mut by_theta: BTreeMap<&Atom, BTreeMap<&Atom, &Atom>> = BTreeMap::new();
    for t in hyp.tuples() {
        by_theta.entry(&t[0]).or_default().insert(&t[1], &t[2]);
    }
    let labelings: BTreeSet<Vec<&Atom>> = by_theta
        .values()
        .map(|f| sample.iter().map(|x| f[x]).collect())
        .collect();
    labelings.len()
}

/// Largest `k` such that some `k`-subset of `sample` is shattered, by trying
/// every subset.
pub fn oracle_vc(hyp: &Relation, sample: &[Atom]) -> usize {
    let n = sample.len();
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let subset: Vec<Atom> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| sample[i].clone()).collect();
        if subset.len() > best && oracle_growth(hyp, &subset) == 1 << subset.len() {
            best = subset.len();
        }
    }
    best
}
