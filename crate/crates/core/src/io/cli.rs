//! Batch commands over a parsed document. Each command yields an exit code,
//! the report for standard output and diagnostics for standard error.
//!
//! Exit codes: 0 success or valid, 1 invalid system (or a negative headline
//! verdict under `--strict`), 2 parse or usage error.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use super::document::SystemDocument;
use super::json::to_canonical_string;
use crate::analyzers::{
    self, capacity::capacity_with, capacity::local_capacity_with, convergence_trace, risk::error_report,
    AnalysisReport, ArgminStep, CapacityLimits, IdentityStep, StepRule, TableStep,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::learners::{
    decode_weights, erm_learner, nn1_learner, perceptron_seeker, DistanceTable, HypothesisClass, LossRelation,
    PerceptronStep,
};
use crate::learning::{
    behavior, decompose, derive_algorithm_traced, recompose, validate_with, DataMode, LearningSystem,
};
use crate::relation::{Atom, FiniteSet};
use crate::strata::{classify, licensed_concerns, required_components, ComponentKey, Concern};
use crate::trace::Trace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Verify,
    Decompose,
    Classify,
    Analyze,
    Learn,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Verify,
        Command::Decompose,
        Command::Classify,
        Command::Analyze,
        Command::Learn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Decompose => "decompose",
            Command::Classify => "classify",
            Command::Analyze => "analyze",
            Command::Learn => "learn",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearnerKind {
    Erm,
    Nn1,
    Perceptron,
}

impl FromStr for LearnerKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "erm" => Ok(LearnerKind::Erm),
            "nn1" => Ok(LearnerKind::Nn1),
            "perceptron" => Ok(LearnerKind::Perceptron),
            other => Err(format!("unknown learner `{other}` (expected erm, nn1 or perceptron)")),
        }
    }
}

impl LearnerKind {
    fn as_str(self) -> &'static str {
        match self {
            LearnerKind::Erm => "erm",
            LearnerKind::Nn1 => "nn1",
            LearnerKind::Perceptron => "perceptron",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub concern: Option<Concern>,
    pub strict: bool,
    pub max_subset: usize,
    pub max_steps: usize,
    pub mode: Option<DataMode>,
    pub epsilon: f64,
    pub delta: f64,
    pub learner: Option<LearnerKind>,
    pub exec: Exec,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            concern: None,
            strict: false,
            max_subset: CapacityLimits::default().max_subset,
            max_steps: 50,
            mode: None,
            epsilon: 0.1,
            delta: 0.05,
            learner: None,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn report(code: i32, v: &Value) -> Self {
        Outcome {
            code,
            stdout: to_canonical_string(v),
            stderr: String::new(),
        }
    }

    fn error(e: &Error) -> Self {
        let code = match e {
            Error::InvalidSystem(_) => 1,
            _ => 2,
        };
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }

    fn usage(msg: &str) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("usage error: {msg}\n"),
        }
    }
}

/// Runs `command` on the document text.
pub fn run(command: Command, text: &str, opts: &Options) -> Outcome {
    let doc = match SystemDocument::parse(text) {
        Ok(d) => d,
        Err(e) => return Outcome::error(&e),
    };
    let result = match command {
        Command::Verify => verify(&doc, opts),
        Command::Decompose => decompose_cmd(&doc, opts),
        Command::Classify => Ok(classify_cmd(&doc)),
        Command::Analyze => match opts.concern {
            None => return Outcome::usage("analyze needs --concern <name>"),
            Some(c) => analyze(&doc, c, opts),
        },
        Command::Learn => match opts.learner {
            None => return Outcome::usage("learn needs --learner erm|nn1|perceptron"),
            Some(l) => learn(&doc, l, opts),
        },
    };
    result.unwrap_or_else(|e| Outcome::error(&e))
}

fn verify(doc: &SystemDocument, opts: &Options) -> Result<Outcome> {
    let ls = doc.learning_system(opts.mode)?;
    let report = validate_with(&ls, opts.exec);
    Ok(Outcome::report(if report.valid() { 0 } else { 1 }, &report.to_json()))
}

fn names(sets: &[FiniteSet]) -> Vec<&str> {
    sets.iter().map(FiniteSet::name).collect()
}

fn decompose_cmd(doc: &SystemDocument, opts: &Options) -> Result<Outcome> {
    let ls = doc.learning_system(opts.mode)?;
    let report = validate_with(&ls, opts.exec);
    if !report.valid() {
        return Ok(Outcome::report(1, &json!({ "validation": report.to_json() })));
    }
    let (inductive, functional) = decompose(&ls)?;
    let recomposed = recompose(&inductive, &functional)?;
    let behavior = behavior(&ls)?;
    let gs = &inductive.system;
    let out = json!({
        "inductive": {
            "system": gs.io.rel.name(),
            "inputs": names(&gs.io.inputs),
            "outputs": names(&gs.io.outputs),
            "goal": gs.goal.name(),
            "seek": gs.seek.name(),
            "params": gs.params.name(),
            "values": gs.values.name(),
            "tuples": gs.io.rel.len(),
        },
        "functional": {
            "system": functional.io.rel.name(),
            "inputs": names(&functional.io.inputs),
            "outputs": names(&functional.io.outputs),
            "tuples": functional.io.rel.len(),
        },
        "behavior_tuples": behavior.len(),
        "recomposition_matches_behavior": recomposed.rel.tuple_set() == behavior.tuple_set(),
    });
    Ok(Outcome::report(0, &out))
}

fn classify_cmd(doc: &SystemDocument) -> Outcome {
    let inv = doc.inventory();
    let level = classify(&inv);
    let concerns: Vec<&str> = level
        .map(|l| licensed_concerns(l).into_iter().map(Concern::as_str).collect())
        .unwrap_or_default();
    let out = json!({
        "components": inv.keys().map(|k| k.as_str()).collect::<Vec<_>>(),
        "level": level.map(|l| l.to_string()),
        "licensed_concerns": concerns,
        "concern_count": concerns.len(),
    });
    Outcome::report(0, &out)
}

fn missing(field: &str) -> Error {
    Error::MissingField {
        field: field.to_owned(),
        location: "declarations".to_owned(),
    }
}

/// Verdict that decides the exit code under `--strict`.
fn headline(concern: Concern) -> Option<&'static str> {
    match concern {
        Concern::Monotonicity => Some("monotone"),
        Concern::Falsifiability => Some("falsifiable"),
        Concern::Convergence => Some("fixed_point"),
        _ => None,
    }
}

fn pooled_pairs(doc: &SystemDocument) -> Result<Vec<(Atom, Atom)>> {
    let datasets = doc.datasets()?;
    match &doc.declarations.dataset {
        Some(d) => datasets
            .get(d)
            .cloned()
            .ok_or_else(|| Error::UnknownDataset(d.clone())),
        None => Ok(datasets.values().flatten().cloned().collect()),
    }
}

fn first_dataset(ls: &LearningSystem, decl: &Option<Atom>) -> Result<Atom> {
    decl.clone()
        .or_else(|| ls.data().elements().first().cloned())
        .ok_or_else(|| missing("dataset"))
}

fn step_rule(doc: &SystemDocument, ls: &LearningSystem) -> Result<Box<dyn StepRule>> {
    Ok(match doc.declarations.step.as_deref().unwrap_or("argmin") {
        "argmin" => Box::new(ArgminStep::new(ls)?),
        "identity" => Box::new(IdentityStep),
        "perceptron" => Box::new(PerceptronStep::from_system(ls)?),
        name => Box::new(TableStep::new(doc.relation(name, "declarations.step")?)?),
    })
}

fn analyze(doc: &SystemDocument, concern: Concern, opts: &Options) -> Result<Outcome> {
    let have = doc.inventory();
    let need = required_components(concern).required;
    if !need.is_subset(&have) {
        let list = |inv: &crate::strata::ComponentInventory| {
            inv.keys().map(|k| k.as_str()).collect::<Vec<_>>().join(", ")
        };
        return Ok(Outcome::usage(&format!(
            "concern `{concern}` needs components {{{}}}; the document binds {{{}}}",
            list(&need),
            list(&have)
        )));
    }
    let decl = &doc.declarations;
    let limits = CapacityLimits {
        max_subset: opts.max_subset,
        ..CapacityLimits::default()
    };
    let report: AnalysisReport = match concern {
        Concern::Hardness => analyzers::hardness_tag(decl.hardness.as_deref())?,
        Concern::Monotonicity => {
            let ls = doc.learning_system(opts.mode)?;
            let chain = decl.chain.as_ref().ok_or_else(|| missing("chain"))?;
            let eval = decl.eval.as_ref().ok_or_else(|| missing("eval"))?;
            analyzers::monotonicity(&ls, chain, eval)?
        }
        Concern::InformationComplexity | Concern::Distribution => {
            analyzers::distribution_entropy(&pooled_pairs(doc)?, concern)?
        }
        Concern::Falsifiability => {
            let hyp = doc.bound_relation("H")?;
            let sample = match &decl.sample {
                Some(s) => s.clone(),
                None => doc.bound_set("X")?.elements().to_vec(),
            };
            analyzers::falsifiability(hyp, &sample)?
        }
        Concern::Flexibility => {
            let hyp = doc.bound_relation("H")?;
            let name = decl.neighbors.as_deref().ok_or_else(|| missing("neighbors"))?;
            analyzers::flexibility(hyp, doc.relation(name, "declarations.neighbors")?)?
        }
        Concern::Capacity => {
            let hyp = doc.bound_relation("H")?;
            let sample = match &decl.sample {
                Some(s) => s.clone(),
                None => doc.bound_set("X")?.elements().to_vec(),
            };
            let mut report = capacity_with(hyp, &sample, opts.max_subset, &limits, opts.exec)?;
            if let Some(cells) = &decl.partition {
                let local = local_capacity_with(hyp, cells, &limits, opts.exec)?;
                report.metrics.extend(local.metrics);
                report.verdicts.extend(local.verdicts);
            }
            report
        }
        Concern::SampleComplexity => {
            let table = analyzers::HypothesisTable::new(doc.bound_relation("H")?)?;
            let report = analyzers::sample_complexity_finite(table.distinct_count() as u64, opts.epsilon, opts.delta)?
                .input("parameters", table.params().len());
            if have.contains(ComponentKey::D) {
                report.note("datasets are bound; a distribution-dependent bound could refine m")
            } else {
                report
            }
        }
        Concern::Convergence => {
            let ls = doc.learning_system(opts.mode)?;
            let d = first_dataset(&ls, &decl.dataset)?;
            let theta0 = match &decl.theta0 {
                Some(t) => t.clone(),
                None => ls.params().elements().first().cloned().ok_or_else(|| missing("theta0"))?,
            };
            let step = step_rule(doc, &ls)?;
            convergence_trace(&ls, &d, &theta0, step.as_ref(), opts.max_steps, &mut Trace::new())?
        }
        Concern::Error => {
            let ls = doc.learning_system(opts.mode)?;
            let d = first_dataset(&ls, &decl.dataset)?;
            let theta = decl.theta.clone().ok_or_else(|| missing("theta"))?;
            error_report(&ls, &d, &theta)?
        }
        Concern::AlgorithmicComplexity => {
            let ls = doc.learning_system(opts.mode)?;
            let mut trace = Trace::new();
            derive_algorithm_traced(ls.goal(), ls.seek(), ls.data(), ls.params(), &mut trace, opts.exec)?;
            analyzers::algorithmic_cost(Some(&trace))?
        }
    };
    let negative = headline(concern).is_some_and(|v| report.verdicts.get(v) == Some(&false));
    let code = if opts.strict && negative { 1 } else { 0 };
    Ok(Outcome::report(code, &report.to_json()))
}

fn learn(doc: &SystemDocument, learner: LearnerKind, opts: &Options) -> Result<Outcome> {
    let datasets = doc.datasets()?;
    let ls = match learner {
        LearnerKind::Erm => {
            let class = HypothesisClass {
                x_set: doc.bound_set("X")?.clone(),
                y_set: doc.bound_set("Y")?.clone(),
                params: doc.bound_set("Theta")?.clone(),
                hyp: doc.bound_relation("H")?.clone(),
            };
            let loss = match &doc.declarations.loss {
                Some(name) => LossRelation::new(doc.relation(name, "declarations.loss")?.clone())?,
                None => LossRelation::zero_one(&class.y_set),
            };
            erm_learner(&class, &loss, datasets)?
        }
        LearnerKind::Nn1 => {
            let x = doc.bound_set("X")?;
            let distances = match &doc.declarations.distance {
                Some(name) => DistanceTable::from_relation(doc.relation(name, "declarations.distance")?)?,
                None => DistanceTable::abs_diff(x)?,
            };
            nn1_learner(x, doc.bound_set("Y")?, &distances, datasets)?
        }
        LearnerKind::Perceptron => {
            let bound = doc.declarations.weight_bound.unwrap_or(3);
            let theta0 = match &doc.declarations.theta0 {
                Some(t) => decode_weights(t).ok_or_else(|| Error::InvalidValue {
                    location: "declarations.theta0".to_owned(),
                    message: format!("`{t}` is not a weight triple like w+1-2+0"),
                })?,
                None => (0, 0, 0),
            };
            perceptron_seeker(datasets, bound, theta0, opts.max_steps)?.system
        }
    };
    let report = validate_with(&ls, opts.exec);
    let learned: Map<String, Value> = ls
        .data()
        .elements()
        .iter()
        .map(|d| (d.to_string(), ls.learned(d).map_or(Value::Null, |t| json!(t))))
        .collect();
    let out = json!({
        "learner": learner.as_str(),
        "learned": learned,
        "validation": report.to_json(),
    });
    Ok(Outcome::report(if report.valid() { 0 } else { 1 }, &out))
}
