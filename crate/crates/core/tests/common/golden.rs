//! Golden input documents and the command matrix run against them.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use learnsys::io::{Command, Declarations, LearningBlock, SystemDocument};
use learnsys::learners::{
    encode_weights, erm_learner, nn1_learner, perceptron_seeker, separable_fixture, threshold_class, xor_fixture,
    DistanceTable, LossRelation,
};
use learnsys::learning::{Bindings, DataMode, LearningSystem};
use learnsys::strata::Concern;
use learnsys::{Atom, FiniteSet, Relation};

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn pairs(v: &[(i64, i64)]) -> Vec<(Atom, Atom)> {
    v.iter().map(|&(x, y)| (Atom::Int(x), Atom::Int(y))).collect()
}

fn threshold_system() -> LearningSystem {
    let class = threshold_class(5).unwrap();
    let d0 = pairs(&[(0, 0), (4, 1)]);
    let mut d1 = d0.clone();
    d1.extend(pairs(&[(1, 0), (3, 1)]));
    let mut d2 = d1.clone();
    d2.extend(pairs(&[(2, 1)]));
    let data = Bindings::from([(Atom::sym("d0"), d0), (Atom::sym("d1"), d1), (Atom::sym("d2"), d2)]);
    erm_learner(&class, &LossRelation::zero_one(&class.y_set), &data).unwrap()
}

fn threshold_declarations(ls: &LearningSystem) -> (Relation, Declarations) {
    let params = ls.params().clone();
    let el = params.elements();
    let tuples: Vec<Vec<Atom>> = el
        .windows(2)
        .flat_map(|w| [vec![w[0].clone(), w[1].clone()], vec![w[1].clone(), w[0].clone()]])
        .collect();
    let neighbors = Relation::new("N", vec![params.clone(), params], tuples).unwrap();
    let decl = Declarations {
        hardness: Some("P".into()),
        neighbors: Some("N".into()),
        sample: Some(vec![Atom::Int(1), Atom::Int(2), Atom::Int(3)]),
        partition: Some(vec![vec![Atom::Int(0), Atom::Int(1)], vec![Atom::Int(2), Atom::Int(3), Atom::Int(4)]]),
        chain: Some(vec![Atom::sym("d0"), Atom::sym("d1"), Atom::sym("d2")]),
        eval: Some(pairs(&[(0, 0), (1, 0), (2, 1), (3, 1), (4, 1)])),
        theta: Some(Atom::sym("t02")),
        ..Declarations::default()
    };
    (neighbors, decl)
}

fn erm_document() -> SystemDocument {
    let ls = threshold_system();
    let (neighbors, decl) = threshold_declarations(&ls);
    let mut doc = SystemDocument::from_learning_system(&ls);
    doc.relations.insert("N".into(), neighbors);
    doc.declarations = decl;
    doc
}

/// The ERM document with the seeking tuple behind `A(d1)` removed.
fn erm_broken_document() -> SystemDocument {
    let ls = threshold_system();
    let d = Atom::sym("d1");
    let theta = ls.learned(&d).unwrap().clone();
    let v = ls.goal().last_as_function()[&vec![d.clone(), theta.clone()]].clone();
    let broken = ls.with_seek(ls.seek().without_tuple(&[d, v, theta])).unwrap();
    let (neighbors, decl) = threshold_declarations(&ls);
    let mut doc = SystemDocument::from_learning_system(&broken);
    doc.relations.insert("N".into(), neighbors);
    doc.declarations = decl;
    doc
}

fn elementary_document() -> SystemDocument {
    let data = Bindings::from([
        (Atom::sym("a"), pairs(&[(0, 0), (1, 1)])),
        (Atom::sym("b"), pairs(&[(0, 0), (1, 1), (2, 1)])),
    ]);
    let sets = [
        FiniteSet::new("D", [Atom::sym("a"), Atom::sym("b")]).unwrap(),
        FiniteSet::ints("X", 0..3),
        FiniteSet::ints("Y", 0..2),
    ];
    SystemDocument {
        format_version: 1,
        sets: sets.into_iter().map(|s| (s.name().to_owned(), s)).collect(),
        relations: BTreeMap::new(),
        learning_system: Some(LearningBlock {
            components: ["D", "X", "Y"].iter().map(|k| (k.to_string(), k.to_string())).collect(),
            mode: Some(DataMode::Batch),
            datasets: Some(data),
        }),
        declarations: Declarations::default(),
    }
}

fn nn1_document() -> SystemDocument {
    let x = FiniteSet::ints("X", 0..6);
    let y = FiniteSet::ints("Y", 0..2);
    let data = Bindings::from([
        (Atom::sym("s"), pairs(&[(0, 0), (5, 1)])),
        (Atom::sym("t"), pairs(&[(1, 0), (2, 1), (4, 1)])),
    ]);
    let ls = nn1_learner(&x, &y, &DistanceTable::abs_diff(&x).unwrap(), &data).unwrap();
    let mut doc = SystemDocument::from_learning_system(&ls);
    doc.declarations.step = Some("identity".into());
    doc.declarations.theta = Some(Atom::sym("s"));
    doc
}

fn perceptron_document(data: &Bindings) -> SystemDocument {
    let f = perceptron_seeker(data, 2, (0, 0, 0), 50).unwrap();
    let mut doc = SystemDocument::from_learning_system(&f.system);
    doc.declarations.step = Some("perceptron".into());
    doc.declarations.weight_bound = Some(2);
    doc.declarations.theta0 = Some(encode_weights((0, 0, 0)));
    doc.declarations.theta = Some(encode_weights((1, 1, 0)));
    doc
}

/// `(file stem, canonical document text)` for every golden input.
pub fn documents() -> Vec<(&'static str, String)> {
    [
        ("erm_threshold", erm_document()),
        ("erm_threshold_c4_broken", erm_broken_document()),
        ("elementary", elementary_document()),
        ("nn1", nn1_document()),
        ("perceptron_separable", perceptron_document(&separable_fixture())),
        ("perceptron_xor", perceptron_document(&xor_fixture())),
    ]
    .into_iter()
    .map(|(name, doc)| (name, doc.to_canonical_string()))
    .collect()
}

/// CLI argument lists exercised on each document: every command, every
/// concern and every learner.
pub fn invocations() -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = [Command::Verify, Command::Decompose, Command::Classify]
        .iter()
        .map(|c| vec![c.as_str().to_owned()])
        .collect();
    for c in Concern::ALL {
        out.push(vec!["analyze".into(), "--concern".into(), c.to_string()]);
    }
    for l in ["erm", "nn1", "perceptron"] {
        out.push(vec!["learn".into(), "--learner".into(), l.into()]);
    }
    out
}

/// File-name slug for an invocation, e.g. `analyze-capacity`.
pub fn slug(args: &[String]) -> String {
    args.iter().filter(|a| !a.starts_with("--")).cloned().collect::<Vec<_>>().join("-")
}
