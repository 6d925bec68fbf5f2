use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coordinates, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("element {element} is not a canonical element of {group}")]
    NotInGroup { group: String, element: String },
    #[error("group mismatch: expected {expected}, got {found}")]
    GroupMismatch { expected: String, found: String },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHomomorphism(String),
    #[error("Følner index {k} out of range 1..={max}")]
    WindowIndex { k: usize, max: usize },
    #[error("guard `{guard}` exceeded: requested {requested}, limit {limit}")]
    Guard {
        guard: &'static str,
        requested: u128,
        limit: u128,
    },
    #[error("duplicate coordinate {0} in cylinder pattern")]
    DuplicateCoordinate(String),
    #[error("symbol {sym} out of range for an alphabet of size {alphabet}")]
    InvalidSymbol { sym: u32, alphabet: usize },
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
