//! The three levels of abstraction for learning systems and the
//! learning-theoretic concerns each one licenses.
//!
//! A level is identified by the component sets it names:
//!
//! | level        | components                    |
//! |--------------|-------------------------------|
//! | Elementary   | D, X, Y                       |
//! | Cascade      | A, D, Θ, H, X, Y              |
//! | GoalSeeking  | A, D, Θ, G, E, H, X, Y        |
//!
//! The value set V is internal to the goal-seeking level and is not an
//! inventory key.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum StratumLevel {
    Elementary,
    Cascade,
    GoalSeeking,
}

impl StratumLevel {
    pub const ALL: [StratumLevel; 3] = [
        StratumLevel::Elementary,
        StratumLevel::Cascade,
        StratumLevel::GoalSeeking,
    ];

    /// The component sets that define this level.
    pub fn signature(self) -> ComponentInventory {
        use ComponentKey::*;
        match self {
            StratumLevel::Elementary => ComponentInventory::of(&[D, X, Y]),
            StratumLevel::Cascade => ComponentInventory::of(&[A, D, Theta, H, X, Y]),
            StratumLevel::GoalSeeking => ComponentInventory::of(&ComponentKey::ALL),
        }
    }
}

impl fmt::Display for StratumLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ComponentKey {
    A,
    D,
    Theta,
    G,
    E,
    H,
    X,
    Y,
}

impl ComponentKey {
    pub const ALL: [ComponentKey; 8] = [
        ComponentKey::A,
        ComponentKey::D,
        ComponentKey::Theta,
        ComponentKey::G,
        ComponentKey::E,
        ComponentKey::H,
        ComponentKey::X,
        ComponentKey::Y,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ComponentKey::A => "A",
            ComponentKey::D => "D",
            ComponentKey::Theta => "Theta",
            ComponentKey::G => "G",
            ComponentKey::E => "E",
            ComponentKey::H => "H",
            ComponentKey::X => "X",
            ComponentKey::Y => "Y",
        }
    }
}

impl FromStr for ComponentKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ComponentKey::ALL
            .into_iter()
            .find(|k| k.as_str() == s || (s == "Θ" && *k == ComponentKey::Theta))
            .ok_or_else(|| format!("unknown component key `{s}`"))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct ComponentInventory(BTreeSet<ComponentKey>);

impl ComponentInventory {
    pub fn of(keys: &[ComponentKey]) -> Self {
        ComponentInventory(keys.iter().copied().collect())
    }

    pub fn insert(&mut self, k: ComponentKey) {
        self.0.insert(k);
    }

    pub fn contains(&self, k: ComponentKey) -> bool {
        self.0.contains(&k)
    }

    pub fn is_subset(&self, other: &ComponentInventory) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn keys(&self) -> impl Iterator<Item = ComponentKey> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<ComponentKey> for ComponentInventory {
    fn from_iter<I: IntoIterator<Item = ComponentKey>>(iter: I) -> Self {
        ComponentInventory(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Concern {
    Hardness,
    Monotonicity,
    InformationComplexity,
    Distribution,
    Falsifiability,
    Flexibility,
    Capacity,
    SampleComplexity,
    Convergence,
    Error,
    AlgorithmicComplexity,
}

impl Concern {
    pub const ALL: [Concern; 11] = [
        Concern::Hardness,
        Concern::Monotonicity,
        Concern::InformationComplexity,
        Concern::Distribution,
        Concern::Falsifiability,
        Concern::Flexibility,
        Concern::Capacity,
        Concern::SampleComplexity,
        Concern::Convergence,
        Concern::Error,
        Concern::AlgorithmicComplexity,
    ];

    /// Snake-case name used on the command line and in reports.
    pub fn as_str(self) -> &'static str {
        match self {
            Concern::Hardness => "hardness",
            Concern::Monotonicity => "monotonicity",
            Concern::InformationComplexity => "information_complexity",
            Concern::Distribution => "distribution",
            Concern::Falsifiability => "falsifiability",
            Concern::Flexibility => "flexibility",
            Concern::Capacity => "capacity",
            Concern::SampleComplexity => "sample_complexity",
            Concern::Convergence => "convergence",
            Concern::Error => "error",
            Concern::AlgorithmicComplexity => "algorithmic_complexity",
        }
    }
}

impl fmt::Display for Concern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Concern {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Concern::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown concern `{s}`"))
    }
}

/// Highest level whose signature the inventory contains, if any.
pub fn classify(inv: &ComponentInventory) -> Option<StratumLevel> {
    StratumLevel::ALL
        .into_iter()
        .rev()
        .find(|l| l.signature().is_subset(inv))
}

pub fn licensed_concerns(level: StratumLevel) -> BTreeSet<Concern> {
    use Concern::*;
    let elementary = [Hardness, Monotonicity, InformationComplexity, Distribution];
    let cascade = [Falsifiability, Flexibility, Capacity, SampleComplexity];
    let goal_seeking = [Convergence, Error, AlgorithmicComplexity];
    let mut out: BTreeSet<Concern> = elementary.into_iter().collect();
    if level >= StratumLevel::Cascade {
        out.extend(cascade);
    }
    if level >= StratumLevel::GoalSeeking {
        out.extend(goal_seeking);
    }
    out
}

/// Components a concern needs. `optional` lists components that refine the
/// analysis when present (distribution-dependent sample complexity).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Requirement {
    pub required: ComponentInventory,
    pub optional: ComponentInventory,
    /// The association is our reconstruction rather than one stated outright.
    pub reconstructed: bool,
}

pub fn required_components(c: Concern) -> Requirement {
    use ComponentKey::*;
    let (required, optional, reconstructed): (&[ComponentKey], &[ComponentKey], bool) = match c {
        Concern::Hardness => (&[X, Y], &[], true),
        Concern::Monotonicity => (&[D, X, Y], &[], false),
        Concern::InformationComplexity => (&[D, X, Y], &[], true),
        Concern::Distribution => (&[D, X, Y], &[], true),
        Concern::Falsifiability => (&[H, Theta, X, Y], &[], true),
        Concern::Flexibility => (&[H, Theta, X, Y], &[], true),
        Concern::Capacity => (&[H, Theta, X, Y], &[], false),
        Concern::SampleComplexity => (&[H, Theta], &[D], false),
        Concern::Convergence => (&[A, G, E, H, Theta], &[], false),
        Concern::Error => (&[G, D, Theta], &[], false),
        Concern::AlgorithmicComplexity => (&[G, E, A], &[], false),
    };
    Requirement {
        required: ComponentInventory::of(required),
        optional: ComponentInventory::of(optional),
        reconstructed,
    }
}
