use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("ill-posed interpolation: {0}")]
    IllPosedInterpolation(String),

    #[error("surface {surface}: Gram matrix is not symmetric at ({row}, {col})")]
    AsymmetricGram {
        surface: String,
        row: usize,
        col: usize,
    },

    #[error("surface {surface}: {reason}")]
    MalformedSurface { surface: String, reason: String },

    #[error("linear system is under-determined: rank {rank} < {unknowns}")]
    UnderDetermined { rank: usize, unknowns: usize },

    #[error("linear system is inconsistent at row {row} ({label})")]
    Inconsistent { row: usize, label: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("quotient is not well-defined: {0}")]
    Quotient(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("divisor pattern coefficient {slot} is negative ({value})")]
    PatternViolation { slot: &'static str, value: String },

    #[error("strata table: {0}")]
    StrataTable(String),

    #[error("decorated-basis matching failed: {0}")]
    DecoratedMatch(String),

    #[error("fixture {name}: {source}")]
    Fixture {
        name: String,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
