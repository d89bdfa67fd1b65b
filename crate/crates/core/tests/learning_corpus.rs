mod common;

use std::collections::BTreeSet;

use common::{
    break_bindings, break_consistency, break_goal, break_hypotheses, corpus, oracle_algorithm, oracle_behavior,
    oracle_loss, rng, SEED,
};
use learnsys::learners::{erm_learner, nn1_learner, threshold_class, DistanceTable, LossRelation};
use learnsys::learning::{
    behavior, cascade_view, decompose, derive_algorithm, elementary_view, recompose, validate, Bindings,
    LearningSystem,
};
use learnsys::relation::compose;
use learnsys::systems::is_functional_system;
use learnsys::{Atom, FiniteSet};
use proptest::prelude::*;

#[test]
fn corpus_is_large_and_valid() {
    let samples = corpus(SEED);
    assert!(samples.len() >= 50);
    let learners: BTreeSet<&str> = samples.iter().map(|s| s.learner).collect();
    assert_eq!(learners, BTreeSet::from(["erm", "nn1", "perceptron"]));
    for s in &samples {
        let report = validate(&s.system);
        assert!(report.valid(), "{}: {:?}", s.label, report.failing());
    }
}

#[test]
fn corpus_is_deterministic() {
    let a: Vec<LearningSystem> = corpus(SEED).into_iter().map(|s| s.system).collect();
    let b: Vec<LearningSystem> = corpus(SEED).into_iter().map(|s| s.system).collect();
    assert_eq!(a, b);
}

#[test]
fn derived_algorithm_matches_declared() {
    for s in corpus(SEED) {
        let ls = &s.system;
        let derived = derive_algorithm(ls.goal(), ls.seek(), ls.data(), ls.params()).unwrap();
        assert_eq!(derived.tuple_set(), ls.algo().tuple_set(), "{}", s.label);
        assert_eq!(&oracle_algorithm(ls), ls.algo().tuple_set(), "{}", s.label);
    }
}

#[test]
fn behavior_agrees_with_composition_and_cascade() {
    for s in corpus(SEED) {
        let ls = &s.system;
        let p = behavior(ls).unwrap();
        assert_eq!(p.tuple_set(), &oracle_behavior(ls), "{}", s.label);
        let via_compose = compose(ls.algo(), ls.hyp(), &[(1, 0)]).unwrap();
        assert_eq!(p.tuple_set(), via_compose.tuple_set(), "{}", s.label);
        let (i, f) = decompose(ls).unwrap();
        let joined = recompose(&i, &f).unwrap();
        assert_eq!(p.tuple_set(), joined.rel.tuple_set(), "{}", s.label);
        let (a, h) = cascade_view(ls).unwrap();
        assert_eq!(a.rel.tuple_set(), ls.algo().tuple_set());
        assert_eq!(h.rel.tuple_set(), ls.hyp().tuple_set());
    }
}

#[test]
fn elementary_view_is_a_total_function() {
    for s in corpus(SEED) {
        let view = elementary_view(&s.system).unwrap();
        assert!(is_functional_system(&view).unwrap().holds(), "{}", s.label);
    }
}

#[test]
fn learned_parameters_minimize_training_loss() {
    for s in corpus(SEED).into_iter().filter(|s| s.learner == "erm") {
        let ls = &s.system;
        for d in ls.data().elements() {
            let losses: Vec<i64> = ls.params().elements().iter().map(|t| oracle_loss(ls, d, t)).collect();
            let min = *losses.iter().min().unwrap();
            let first = losses.iter().position(|&l| l == min).unwrap();
            assert_eq!(ls.learned(d), Some(&ls.params().elements()[first]), "{} {d}", s.label);
        }
    }
}

fn mutation_rejected_only_at(clause: &str, m: &LearningSystem) {
    let report = validate(m);
    assert_eq!(report.failing(), vec![clause.to_owned()]);
    let c = report.clause(clause).unwrap();
    assert!(!c.witnesses.is_empty());
}

#[test]
fn single_tuple_mutations_are_caught_at_their_clause() {
    let samples = corpus(SEED);
    let mut r = rng(SEED ^ 0xc1a05e);
    for s in &samples {
        let ls = &s.system;
        mutation_rejected_only_at("C1", &break_bindings(ls, &mut r));
        mutation_rejected_only_at("C2", &break_hypotheses(ls, &mut r));
        if let Some(m) = break_goal(ls, &mut r) {
            mutation_rejected_only_at("C3", &m);
        }
        if let Some(m) = break_consistency(ls, &mut r) {
            mutation_rejected_only_at("C4", &m);
        }
    }
}

fn int_pairs(ps: &[(i64, i64)]) -> Vec<(Atom, Atom)> {
    ps.iter().map(|&(x, y)| (Atom::Int(x), Atom::Int(y))).collect()
}

proptest! {
    #[test]
    fn erm_output_is_valid_and_optimal(
        n in 2..=6usize,
        raw in prop::collection::vec(prop::collection::vec((0..6i64, 0..2i64), 0..6), 1..4),
    ) {
        let class = threshold_class(n).unwrap();
        let data: Bindings = raw
            .iter()
            .enumerate()
            .map(|(i, ps)| {
                let ps: Vec<(i64, i64)> = ps.iter().map(|&(x, y)| (x % n as i64, y)).collect();
                (Atom::sym(format!("d{i}")), int_pairs(&ps))
            })
            .collect();
        let ls = erm_learner(&class, &LossRelation::zero_one(&class.y_set), &data).unwrap();
        prop_assert!(validate(&ls).valid());
        for d in ls.data().elements() {
            let chosen = oracle_loss(&ls, d, ls.learned(d).unwrap());
            for t in ls.params().elements() {
                prop_assert!(chosen <= oracle_loss(&ls, d, t));
            }
        }
    }

    #[test]
    fn nn1_ignores_pair_order(
        ps in prop::collection::vec((0..5i64, 0..2i64), 1..6),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        let x = FiniteSet::ints("X", 0..5);
        let y = FiniteSet::ints("Y", 0..2);
        let dist = DistanceTable::abs_diff(&x).unwrap();
        let mut shuffled = ps.clone();
        shuffled.shuffle(&mut rng(seed));
        let a = nn1_learner(&x, &y, &dist, &Bindings::from([(Atom::sym("d"), int_pairs(&ps))])).unwrap();
        let b = nn1_learner(&x, &y, &dist, &Bindings::from([(Atom::sym("d"), int_pairs(&shuffled))])).unwrap();
        prop_assert_eq!(a.hyp(), b.hyp());
        prop_assert!(validate(&a).valid());
    }
}
