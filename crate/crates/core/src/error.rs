use thiserror::Error;

/// Errors raised across the crate. Each variant names the witness that
/// triggered it where one exists.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("Cayley table is not square: row {row} has {len} entries, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("Cayley table entry {value} at ({row}, {col}) is out of range 0..{order}")]
    EntryOutOfRange { row: usize, col: usize, value: usize, order: usize },
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("size cap exceeded: reached {size}, cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("subgroup {0} is not contained in subgroup {1}")]
    NotContained(String, String),
    #[error("subgroup {0} is not normal")]
    NotNormal(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime must be odd, got {0}")]
    EvenPrime(u64),
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("maps do not share a target G-set")]
    TargetMismatch,
    #[error("coefficients must be integers")]
    NonIntegerCoefficients,
    #[error("coefficient field is not usable: {0}")]
    NonFieldCoefficients(String),
    #[error("coefficient does not live in the functor's field: {0}")]
    CoefficientMismatch(String),
    #[error("invalid G-set or G-map: {0}")]
    InvalidAction(String),
    #[error("levels out of order: cannot go from level {from} to level {to}")]
    LevelOrder { from: usize, to: usize },
    #[error("bad divisor chain: {0}")]
    BadDivisorChain(String),
    #[error("subgroup spec {spec} cannot be resolved: {reason}")]
    SpecUnresolvable { spec: String, reason: String },
    #[error("incoherent marker chain at level {level}: {detail}")]
    IncoherentMarkers { level: usize, detail: String },
    #[error("unknown class id {0}")]
    UnknownClass(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
