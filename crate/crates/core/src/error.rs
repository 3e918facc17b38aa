use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live on different probability spaces")]
    SpaceMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("value list has {found} entries but the space has {expected} atoms")]
    AtomCountMismatch { expected: usize, found: usize },
    #[error("invalid probability space: {0}")]
    InvalidSpace(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("family of events or scalars is empty")]
    EmptyFamily,
    #[error("order comparison of complex-valued scalars")]
    ComplexOrder,
    #[error("events do not form a partition of the space")]
    NotPartition,
    #[error("event has probability zero")]
    NullEvent,
    #[error("system is not underdetermined: {rows} equations in {cols} unknowns")]
    NotUnderdetermined { rows: usize, cols: usize },
    #[error("basis lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("submodule spec needs at least one generator")]
    NoGenerators,
    #[error("point lies in the submodule almost surely; no hereditarily disjoint stratum exists")]
    NoHereditaryStratum,
    #[error("vector is not in the span of the stratum basis at atom `{0}`")]
    NotInSpan(String),
    #[error("instance is infeasible on atoms {0:?}")]
    Infeasible(Vec<String>),
    #[error("instance is feasible; no violating witness exists")]
    Feasible,
    #[error("malformed instance: {0}")]
    MalformedInstance(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
