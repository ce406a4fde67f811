use thiserror::Error;

/// Errors raised by the engine. Validation failures are reported, not raised;
/// these cover contract violations and unsupported requests.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("infinite fiber; supply a support set")]
    InfiniteFiber,

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("non-homogeneous relation: {0}")]
    NonHomogeneousRelation(String),

    #[error("inadmissible relation: {0}")]
    InadmissibleRelation(String),

    #[error("possibly infinite-dimensional; raise cap or add relations (cap = {cap})")]
    PossiblyInfinite { cap: usize },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("incompatible objects: {0}")]
    Incompatible(String),

    #[error("algebra lacks radical data: {0}")]
    NoRadical(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("window too small: radius {given} given, at least {required} required")]
    WindowTooSmall { given: u32, required: u32 },

    #[error("no valid module found within {0} attempts")]
    RetryBudget(usize),

    #[error("{0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
