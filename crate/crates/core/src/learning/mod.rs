//! Learning systems over the eight components `A, D, Θ, G, E, H, X, Y` plus
//! the value set `V`.
//!
//! Relations are stored in canonical column order:
//!
//! * `A ⊆ D × Θ`, read as a function `D → Θ`
//! * `G ⊆ D × Θ × V`, read as `G: D × Θ → V`
//! * `E ⊆ D × V × Θ`, read as `E: D × V → Θ`
//! * `H ⊆ Θ × X × Y`, read as `H: Θ × X → Y`
//!
//! Relations supplied in another column order are permuted into this one by
//! matching component names. Each element of `D` is bound to the `(x, y)`
//! pairs it denotes: exactly one pair in literal mode, a finite multiset in
//! batch mode.
//!
//! The behavior relation over `D × X × Y` is our reading of the projection
//! `P(S)` (the notation is used without definition), namely
//! `(d, x, y) ∈ P(S) ⇔ ∃θ. (d, θ) ∈ A ∧ (θ, x, y) ∈ H`.

mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use validate::{validate, validate_with};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::relation::{cartesian_product, is_functional, project, Atom, FiniteSet, Relation};
use crate::strata::{ComponentInventory, ComponentKey, StratumLevel};
use crate::systems::{cascade, GoalSeekingSystem, IOSystem};
use crate::trace::Trace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DataMode {
    Literal,
    Batch,
}

impl FromStr for DataMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "literal" => Ok(DataMode::Literal),
            "batch" => Ok(DataMode::Batch),
            other => Err(format!("unknown data mode `{other}` (expected literal or batch)")),
        }
    }
}

impl fmt::Display for DataMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DataMode::Literal => "literal",
            DataMode::Batch => "batch",
        })
    }
}

pub type Pair = (Atom, Atom);

/// What each data element denotes. Pair lists are kept sorted.
pub type Bindings = BTreeMap<Atom, Vec<Pair>>;

/// Raw ingredients of a [`LearningSystem`].
#[derive(Debug, Clone)]
pub struct LearningParts {
    pub x_set: FiniteSet,
    pub y_set: FiniteSet,
    pub data: FiniteSet,
    pub mode: DataMode,
    pub bindings: Bindings,
    pub params: FiniteSet,
    pub values: FiniteSet,
    pub algo: Relation,
    pub goal: Relation,
    pub seek: Relation,
    pub hyp: Relation,
}

/// A learning system whose relations are well-typed and in canonical column
/// order. Whether it satisfies the four defining clauses is a separate
/// question answered by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearningSystem {
    x_set: FiniteSet,
    y_set: FiniteSet,
    data: FiniteSet,
    mode: DataMode,
    bindings: Bindings,
    params: FiniteSet,
    values: FiniteSet,
    algo: Relation,
    goal: Relation,
    seek: Relation,
    hyp: Relation,
}

/// Permutes `rel`'s columns so that its components are `expected`.
fn normalize(rel: Relation, expected: &[&FiniteSet]) -> Result<Relation> {
    let mismatch = || Error::ComponentMismatch {
        left: format!("{}({})", rel.name(), rel.component_names().join(",")),
        right: expected.iter().map(|s| s.name()).collect::<Vec<_>>().join(","),
    };
    if rel.arity() != expected.len() {
        return Err(mismatch());
    }
    let mut order = Vec::with_capacity(expected.len());
    for want in expected {
        let pos = rel
            .components()
            .iter()
            .enumerate()
            .position(|(i, c)| c.name() == want.name() && !order.contains(&i))
            .ok_or_else(mismatch)?;
        if !rel.components()[pos].same_as(want) {
            return Err(mismatch());
        }
        order.push(pos);
    }
    if order.iter().enumerate().all(|(i, &p)| i == p) {
        return Ok(rel);
    }
    project(&rel, &order)
}

impl LearningSystem {
    pub fn new(parts: LearningParts) -> Result<Self> {
        let LearningParts {
            x_set,
            y_set,
            data,
            mode,
            mut bindings,
            params,
            values,
            algo,
            goal,
            seek,
            hyp,
        } = parts;
        let algo = normalize(algo, &[&data, &params])?;
        let goal = normalize(goal, &[&data, &params, &values])?;
        let seek = normalize(seek, &[&data, &values, &params])?;
        let hyp = normalize(hyp, &[&params, &x_set, &y_set])?;
        for pairs in bindings.values_mut() {
            pairs.sort();
        }
        Ok(LearningSystem {
            x_set,
            y_set,
            data,
            mode,
            bindings,
            params,
            values,
            algo,
            goal,
            seek,
            hyp,
        })
    }

    pub fn into_parts(self) -> LearningParts {
        LearningParts {
            x_set: self.x_set,
            y_set: self.y_set,
            data: self.data,
            mode: self.mode,
            bindings: self.bindings,
            params: self.params,
            values: self.values,
            algo: self.algo,
            goal: self.goal,
            seek: self.seek,
            hyp: self.hyp,
        }
    }

    pub fn x_set(&self) -> &FiniteSet {
        &self.x_set
    }
    pub fn y_set(&self) -> &FiniteSet {
        &self.y_set
    }
    pub fn data(&self) -> &FiniteSet {
        &self.data
    }
    pub fn mode(&self) -> DataMode {
        self.mode
    }
    pub fn bindings(&self) -> &Bindings {
        &self.bindings
    }
    pub fn params(&self) -> &FiniteSet {
        &self.params
    }
    pub fn values(&self) -> &FiniteSet {
        &self.values
    }
    pub fn algo(&self) -> &Relation {
        &self.algo
    }
    pub fn goal(&self) -> &Relation {
        &self.goal
    }
    pub fn seek(&self) -> &Relation {
        &self.seek
    }
    pub fn hyp(&self) -> &Relation {
        &self.hyp
    }

    /// Pairs bound to data element `d`.
    pub fn dataset(&self, d: &Atom) -> Result<&[Pair]> {
        self.bindings
            .get(d)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownDataset(d.clone()))
    }

    pub fn with_algo(&self, algo: Relation) -> Result<Self> {
        let mut parts = self.clone().into_parts();
        parts.algo = algo;
        Self::new(parts)
    }

    pub fn with_goal(&self, goal: Relation) -> Result<Self> {
        let mut parts = self.clone().into_parts();
        parts.goal = goal;
        Self::new(parts)
    }

    pub fn with_seek(&self, seek: Relation) -> Result<Self> {
        let mut parts = self.clone().into_parts();
        parts.seek = seek;
        Self::new(parts)
    }

    pub fn with_hyp(&self, hyp: Relation) -> Result<Self> {
        let mut parts = self.clone().into_parts();
        parts.hyp = hyp;
        Self::new(parts)
    }

    pub fn with_bindings(&self, bindings: Bindings) -> Result<Self> {
        let mut parts = self.clone().into_parts();
        parts.bindings = bindings;
        Self::new(parts)
    }

    /// `A(d)` when `A` maps `d` to exactly one parameter.
    pub fn learned(&self, d: &Atom) -> Option<&Atom> {
        let mut it = self
            .algo
            .tuple_set()
            .range(vec![d.clone()]..)
            .take_while(|t| &t[0] == d);
        let first = it.next()?;
        it.next().is_none().then_some(&first[1])
    }

    /// Which of the eight component keys a set or relation name denotes here.
    pub fn key_of(&self, name: &str) -> Option<ComponentKey> {
        let table = [
            (self.algo.name(), ComponentKey::A),
            (self.data.name(), ComponentKey::D),
            (self.params.name(), ComponentKey::Theta),
            (self.goal.name(), ComponentKey::G),
            (self.seek.name(), ComponentKey::E),
            (self.hyp.name(), ComponentKey::H),
            (self.x_set.name(), ComponentKey::X),
            (self.y_set.name(), ComponentKey::Y),
        ];
        table.iter().find(|(n, _)| *n == name).map(|(_, k)| *k)
    }

    fn ensure_valid(&self) -> Result<()> {
        let report = validate(self);
        if report.valid() {
            Ok(())
        } else {
            Err(Error::InvalidSystem(report.failing()))
        }
    }
}

/// The behavior relation over `D × X × Y`, computed directly from the
/// existential definition.
pub fn behavior(ls: &LearningSystem) -> Result<Relation> {
    ls.ensure_valid()?;
    Ok(behavior_unchecked(ls))
}

pub(crate) fn behavior_unchecked(ls: &LearningSystem) -> Relation {
    let mut by_theta: BTreeMap<&Atom, Vec<(&Atom, &Atom)>> = BTreeMap::new();
    for t in ls.hyp.tuples() {
        by_theta.entry(&t[0]).or_default().push((&t[1], &t[2]));
    }
    let mut tuples = BTreeSet::new();
    for a in ls.algo.tuples() {
        if let Some(graph) = by_theta.get(&a[1]) {
            for (x, y) in graph {
                tuples.insert(vec![a[0].clone(), (*x).clone(), (*y).clone()]);
            }
        }
    }
    Relation::new(
        "P",
        vec![ls.data.clone(), ls.x_set.clone(), ls.y_set.clone()],
        tuples,
    )
    .expect("behavior tuples are drawn from the component sets")
}

/// `A = {(d, θ) : (d, G(d, θ), θ) ∈ E}`.
pub fn derive_algorithm(
    goal: &Relation,
    seek: &Relation,
    data: &FiniteSet,
    params: &FiniteSet,
) -> Result<Relation> {
    derive_algorithm_traced(goal, seek, data, params, &mut Trace::new(), Exec::default())
}

pub fn derive_algorithm_traced(
    goal: &Relation,
    seek: &Relation,
    data: &FiniteSet,
    params: &FiniteSet,
    trace: &mut Trace,
    exec: Exec,
) -> Result<Relation> {
    let values = goal
        .components()
        .get(2)
        .cloned()
        .ok_or_else(|| Error::ComponentMismatch {
            left: goal.name().to_owned(),
            right: "D,Theta,V".to_owned(),
        })?;
    let goal = normalize(goal.clone(), &[data, params, &values])?;
    let seek = normalize(seek.clone(), &[data, &values, params])?;
    let f = is_functional(&goal, &[0, 1], &[2])?;
    if !f.total {
        return Err(Error::IncompleteGoal {
            relation: goal.name().to_owned(),
        });
    }
    if !f.functional {
        return Err(Error::NotFunctional {
            relation: goal.name().to_owned(),
        });
    }

    trace.begin("derive_algorithm");
    let g = goal.last_as_function();
    let grid: Vec<(&Atom, &Atom)> = data
        .elements()
        .iter()
        .flat_map(|d| params.elements().iter().map(move |t| (d, t)))
        .collect();
    let chosen = exec.map(&grid, |&(d, t)| {
        let v = &g[&vec![d.clone(), t.clone()]];
        seek.contains(&[d.clone(), v.clone(), t.clone()])
    });
    trace.g_evals += grid.len() as u64;
    trace.e_apps += grid.len() as u64;

    let tuples = grid
        .iter()
        .zip(chosen)
        .filter(|(_, keep)| *keep)
        .map(|(&(d, t), _)| vec![d.clone(), t.clone()]);
    Relation::new("A", vec![data.clone(), params.clone()], tuples)
}

/// The goal-seeking fragment `(A, D, Θ, G, E)`: input `D`, output `Θ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InductiveSystem {
    pub system: GoalSeekingSystem,
}

impl InductiveSystem {
    pub fn io(&self) -> &IOSystem {
        &self.system.io
    }
}

/// The hypothesis fragment `(Θ, H, X, Y)`: inputs `Θ, X`, output `Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalSystem {
    pub io: IOSystem,
}

fn split(ls: &LearningSystem) -> (InductiveSystem, FunctionalSystem) {
    let inductive = InductiveSystem {
        system: GoalSeekingSystem {
            io: IOSystem::new(ls.algo.clone(), 1).expect("A has two components"),
            params: ls.params.clone(),
            values: ls.values.clone(),
            goal: ls.goal.clone(),
            seek: ls.seek.clone(),
        },
    };
    let functional = FunctionalSystem {
        io: IOSystem::new(ls.hyp.clone(), 2).expect("H has three components"),
    };
    (inductive, functional)
}

pub fn decompose(ls: &LearningSystem) -> Result<(InductiveSystem, FunctionalSystem)> {
    ls.ensure_valid()?;
    Ok(split(ls))
}

/// Recombines the two fragments through `Θ`.
pub fn recompose(inductive: &InductiveSystem, functional: &FunctionalSystem) -> Result<IOSystem> {
    cascade(inductive.io(), &functional.io)
}

/// Learning as a single input-output system `D × X → Y`.
pub fn elementary_view(ls: &LearningSystem) -> Result<IOSystem> {
    IOSystem::new(behavior(ls)?, 2)
}

/// Learning as `A: D → Θ` cascaded into `H: Θ × X → Y`.
pub fn cascade_view(ls: &LearningSystem) -> Result<(IOSystem, IOSystem)> {
    let (i, f) = decompose(ls)?;
    Ok((i.system.io, f.io))
}

/// Learning as a goal-seeking inductive system cascaded into `H`.
pub fn goal_seeking_view(ls: &LearningSystem) -> Result<(GoalSeekingSystem, IOSystem)> {
    let (i, f) = decompose(ls)?;
    Ok((i.system, f.io))
}

/// Component keys actually present in the view for `level`, read off the
/// view objects themselves.
pub fn view_inventory(ls: &LearningSystem, level: StratumLevel) -> Result<ComponentInventory> {
    let mut names: Vec<String> = Vec::new();
    match level {
        StratumLevel::Elementary => {
            names.extend(elementary_view(ls)?.component_names());
        }
        StratumLevel::Cascade => {
            let (a, h) = cascade_view(ls)?;
            for sys in [&a, &h] {
                names.push(sys.rel.name().to_owned());
                names.extend(sys.component_names());
            }
        }
        StratumLevel::GoalSeeking => {
            let (gs, h) = goal_seeking_view(ls)?;
            names.push(gs.io.rel.name().to_owned());
            names.extend(gs.io.component_names());
            names.push(gs.goal.name().to_owned());
            names.push(gs.seek.name().to_owned());
            names.push(h.rel.name().to_owned());
            names.extend(h.component_names());
        }
    }
    Ok(names.iter().filter_map(|n| ls.key_of(n)).collect())
}

/// Every `(d, θ)` in `D × Θ`, data-major.
pub(crate) fn grid(ls: &LearningSystem) -> Relation {
    cartesian_product(&[ls.data.clone(), ls.params.clone()])
        .unwrap_or_else(|_| Relation::empty("DxTheta", vec![ls.data.clone(), ls.params.clone()]).unwrap())
}
