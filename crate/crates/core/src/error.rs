use thiserror::Error;

use crate::relation::Atom;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("component set `{0}` is empty")]
    EmptyComponent(String),
    #[error("a Cartesian product needs at least one component set")]
    NoComponents,
    #[error("set `{set}` lists element {element} more than once")]
    DuplicateElement { set: String, element: Atom },
    #[error("relation `{relation}`: tuple of length {found}, expected arity {expected}")]
    ArityMismatch {
        relation: String,
        expected: usize,
        found: usize,
    },
    #[error("relation `{relation}`: element {element} at position {position} is not in component `{component}`")]
    ElementNotInComponent {
        relation: String,
        position: usize,
        component: String,
        element: Atom,
    },
    #[error("relation `{relation}`: position {index} out of range for arity {arity}")]
    IndexOutOfRange {
        relation: String,
        index: usize,
        arity: usize,
    },
    #[error("relation `{relation}`: position {index} selected more than once")]
    DuplicateIndex { relation: String, index: usize },
    #[error("relation `{relation}`: domain and codomain share position {index}")]
    OverlappingPositions { relation: String, index: usize },
    #[error("component mismatch: `{left}` vs `{right}`")]
    ComponentMismatch { left: String, right: String },
    #[error("systems share no component set (outputs {outputs:?}, inputs {inputs:?})")]
    NoSharedComponent {
        outputs: Vec<String>,
        inputs: Vec<String>,
    },
    #[error("unknown component `{0}`")]
    UnknownComponent(String),
    #[error("relation `{relation}` is not functional")]
    NotFunctional { relation: String },
    #[error("relation `{relation}` is not total")]
    NotTotal { relation: String },
    #[error("goal relation `{relation}` is not total on D x Theta")]
    IncompleteGoal { relation: String },
    #[error("learning system is not valid: failing clauses {0:?}")]
    InvalidSystem(Vec<String>),
    #[error("dataset chain is not nested at step {index} (`{smaller}` is not contained in `{larger}`)")]
    NotNested {
        index: usize,
        smaller: Atom,
        larger: Atom,
    },
    #[error("evaluation dataset is empty")]
    EmptyEval,
    #[error("dataset is empty")]
    EmptyData,
    #[error("unknown dataset {0}")]
    UnknownDataset(Atom),
    #[error("sample of size {size} exceeds the limit {limit}")]
    SampleTooLarge { size: usize, limit: usize },
    #[error("output set `{set}` has {size} elements; VC search needs exactly 2")]
    NonBinaryOutput { set: String, size: usize },
    #[error("cells do not partition `{set}`: {reason}")]
    NotAPartition { set: String, reason: String },
    #[error("neighbor relation is empty")]
    EmptyNeighborRelation,
    #[error("neighbor relation `{relation}` must be symmetric and irreflexive: offending pair ({a}, {b})")]
    InvalidNeighborRelation { relation: String, a: Atom, b: Atom },
    #[error("parameter `{name}` = {value} out of range ({expected})")]
    OutOfRangeParameter {
        name: String,
        value: String,
        expected: String,
    },
    #[error("step rule undefined at dataset {dataset}, parameter {theta}")]
    StepUndefined { dataset: Atom, theta: Atom },
    #[error("goal undefined at dataset {dataset}, parameter {theta}")]
    UndefinedGoal { dataset: Atom, theta: Atom },
    #[error("value {0} is not numeric; values must be totally ordered integers")]
    UnorderedValues(Atom),
    #[error("no traced run available")]
    NoTracedRun,
    #[error("unknown hardness tag `{0}` (expected P, NP-complete, NP-hard or unknown)")]
    UnknownTag(String),
    #[error("no datasets supplied")]
    EmptyDatasets,
    #[error("missing distance between {0} and {1}")]
    MissingDistance(Atom, Atom),
    #[error("weight grid has {size} parameters, limit is {limit}")]
    GridTooLarge { size: usize, limit: usize },
    #[error("malformed point `{0}`; expected `(a,b)` with integer coordinates")]
    MalformedPoint(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unresolved name `{name}` at {location}")]
    UnresolvedName { name: String, location: String },
    #[error("duplicate name `{name}` at {location}")]
    DuplicateName { name: String, location: String },
    #[error("missing `{field}` in {location}")]
    MissingField { field: String, location: String },
    #[error("invalid value at {location}: {message}")]
    InvalidValue { location: String, message: String },
    #[error("unsupported format_version {0}")]
    UnsupportedVersion(u32),
}
