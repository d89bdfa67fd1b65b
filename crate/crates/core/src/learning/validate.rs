//! Clause-by-clause check of a learning system.
//!
//! * `C1` every data element is bound to pairs in `X × Y` (one pair in
//!   literal mode, any finite multiset in batch mode)
//! * `C2` `A: D → Θ` and `H: Θ × X → Y` are functional and total
//! * `C3` `G: D × Θ → V` is functional and total
//! * `C4` `(d, v, θ) ∈ E` for some `v = G(d, θ)` exactly when `(d, θ) ∈ A`,
//!   and `E` is functional as `D × V → Θ`
//!
//! Totality failures are tracked separately so that a functional but partial
//! system still gets a "valid as relation" verdict.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::{grid, DataMode, LearningSystem};
use crate::exec::Exec;
use crate::relation::{cartesian_product, Atom, Relation, Tuple};
use crate::validation::{ClauseBuilder, ValidationReport, Witness};

pub fn validate(ls: &LearningSystem) -> ValidationReport {
    validate_with(ls, Exec::default())
}

pub fn validate_with(ls: &LearningSystem, exec: Exec) -> ValidationReport {
    ValidationReport {
        clauses: vec![
            check_bindings(ls).finish("C1"),
            {
                let mut b = ClauseBuilder::default();
                check_function(ls.algo(), 1, &mut b);
                check_function(ls.hyp(), 2, &mut b);
                b.finish("C2")
            },
            {
                let mut b = ClauseBuilder::default();
                check_function(ls.goal(), 2, &mut b);
                b.finish("C3")
            },
            check_consistency(ls, exec).finish("C4"),
        ],
    }
}

fn check_bindings(ls: &LearningSystem) -> ClauseBuilder {
    let mut b = ClauseBuilder::default();
    let rel = ls.data().name();
    for d in ls.data().elements() {
        let Some(pairs) = ls.bindings().get(d) else {
            b.fail(Witness::new(rel, "unbound", vec![d.clone()]));
            continue;
        };
        if ls.mode() == DataMode::Literal && pairs.len() != 1 {
            b.fail(Witness::new(
                rel,
                "literal_not_single_pair",
                vec![d.clone(), Atom::Int(pairs.len() as i64)],
            ));
        }
        for (x, y) in pairs {
            if !ls.x_set().contains(x) || !ls.y_set().contains(y) {
                b.fail(Witness::new(rel, "pair_outside_xy", vec![d.clone(), x.clone(), y.clone()]));
            }
        }
    }
    for d in ls.bindings().keys() {
        if !ls.data().contains(d) {
            b.fail(Witness::new(rel, "binding_outside_d", vec![d.clone()]));
        }
    }
    b
}

/// Reads `rel` as a function of its first `n_domain` positions onto the rest.
fn check_function(rel: &Relation, n_domain: usize, b: &mut ClauseBuilder) {
    let domain: Vec<usize> = (0..n_domain).collect();
    let codomain: Vec<usize> = (n_domain..rel.arity()).collect();
    let images = rel.image_map(&domain, &codomain);
    for (key, imgs) in &images {
        let distinct: BTreeSet<&Tuple> = imgs.iter().collect();
        if distinct.len() > 1 {
            for img in distinct {
                let t: Tuple = key.iter().chain(img).cloned().collect();
                b.fail(Witness::new(rel.name(), "non_functional", t));
            }
        }
    }
    let domain_sets = rel.components()[..n_domain].to_vec();
    if let Ok(all) = cartesian_product(&domain_sets) {
        if all.len() != images.len() {
            for key in all.tuples().filter(|k| !images.contains_key(*k)) {
                b.fail_totality(Witness::new(rel.name(), "non_total", key.clone()));
            }
        }
    }
}

fn check_consistency(ls: &LearningSystem, exec: Exec) -> ClauseBuilder {
    let mut b = ClauseBuilder::default();

    let mut goal_values: BTreeMap<(&Atom, &Atom), Vec<&Atom>> = BTreeMap::new();
    for t in ls.goal().tuples() {
        goal_values.entry((&t[0], &t[1])).or_default().push(&t[2]);
    }
    let seek: HashSet<&Tuple> = ls.seek().tuples().collect();
    let cells: Vec<Tuple> = grid(ls).tuples().cloned().collect();
    let mismatches = exec.map(&cells, |cell| {
        let (d, theta) = (&cell[0], &cell[1]);
        let derived = goal_values.get(&(d, theta)).is_some_and(|vs| {
            vs.iter()
                .any(|v| seek.contains(&vec![d.clone(), (*v).clone(), theta.clone()]))
        });
        let declared = ls.algo().contains(cell);
        match (declared, derived) {
            (true, false) => Some("in_algorithm_not_derived"),
            (false, true) => Some("derived_not_in_algorithm"),
            _ => None,
        }
    });
    for (cell, kind) in cells.iter().zip(mismatches) {
        if let Some(kind) = kind {
            b.fail(Witness::new(ls.algo().name(), kind, cell.clone()));
        }
    }

    let images = ls.seek().image_map(&[0, 1], &[2]);
    for (key, imgs) in images {
        if imgs.len() > 1 {
            for img in imgs {
                let t: Tuple = key.iter().chain(&img).cloned().collect();
                b.fail(Witness::new(ls.seek().name(), "non_functional", t));
            }
        }
    }
    b
}
