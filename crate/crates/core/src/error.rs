use thiserror::Error;

/// Errors raised while building groups, invariants and reports.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid classification: type {label} with rank {rank}")]
    InvalidClassification { label: String, rank: usize },
    #[error("zero vector has no reflection or coroot")]
    ZeroVector,
    #[error("simple roots are linearly dependent")]
    SingularGram,
    #[error("{0} is not crystallographic")]
    NotCrystallographic(String),
    #[error("operation requires a finite group")]
    NotFinite,
    #[error("generator {0} is not an involutive reflection")]
    NotReflections(usize),
    #[error("degree search up to {bound} produced only {found} of {needed} independent invariants")]
    IndependenceFailure { bound: u32, found: usize, needed: usize },
    #[error("weight is not in the weight lattice")]
    WeightNotInLattice,
    #[error("translation is not in the coroot lattice")]
    TranslationNotInLattice,
    #[error("linear part is not an element of the finite Weyl group")]
    NotInFiniteGroup,
    #[error("no involution of the fundamental weights matches -gamma_{0}")]
    InvolutionNotFound(usize),
    #[error("bad index tuple {0:?}")]
    BadIndexTuple(Vec<usize>),
    #[error("group order {0} exceeds the enumeration cap")]
    EnumerationTooLarge(u128),
    #[error("affine shell radius {0} outside 1..=6")]
    RadiusOutOfRange(usize),
    #[error("{0} is not irreducible")]
    NotIrreducible(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
