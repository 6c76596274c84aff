use thiserror::Error;

/// Errors produced by the library and the batch front end.
#[derive(Debug, Error)]
pub enum Error {
    /// An exhaustive enumeration would exceed the configured word cap.
    #[error("enumeration limit exceeded: {what} needs {required} entries, cap is {cap}")]
    EnumerationLimit {
        what: String,
        required: u128,
        cap: usize,
    },

    #[error("invalid shift: {0}")]
    InvalidShift(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    /// A cylinder carries zero mass where a logarithm is required.
    #[error("zero-probability cylinder {word}")]
    ZeroProbability { word: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("sequences are defined over different shifts")]
    MixedShift,

    #[error("empty grid")]
    EmptyGrid,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
