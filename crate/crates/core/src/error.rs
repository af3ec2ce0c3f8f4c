use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid composition: {0}")]
    InvalidComposition(String),

    #[error("composition {0} is not admissible (first part must exceed 1)")]
    NotAdmissible(String),

    #[error("lambda index j = {j} outside 1..={a}")]
    LambdaIndex { a: u32, j: u32 },

    #[error("requested coefficient order {requested} exceeds available order {available}")]
    OrderExceeded { requested: usize, available: usize },

    #[error("Eisenstein series need an even weight >= 2, got {0}")]
    InvalidWeight(u32),

    #[error("weight {found} exceeds the allowed weight {limit}")]
    WeightTooLarge { found: u32, limit: u32 },

    #[error("unsupported argument: {0}")]
    Unsupported(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("linear system {0}")]
    LinearSystem(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
