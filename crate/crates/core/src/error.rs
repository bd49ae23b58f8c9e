use thiserror::Error;

/// Errors raised while building models, loading predictors or transcribing.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable `{name}` has reversed bounds [{lower}, {upper}]")]
    ReversedBounds { name: String, lower: f64, upper: f64 },
    #[error("variable `{name}` has a non-finite bound")]
    NonFiniteBound { name: String },
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
    #[error("expected {expected} features, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("dangling variable reference `{0}`")]
    DanglingHandle(String),
    #[error("predicted variable `{0}` cannot appear in a linear constraint")]
    PredictedInConstraint(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("unknown predictor family `{0}`")]
    UnknownFamily(String),
    #[error("unknown predictor `{0}`")]
    UnknownPredictor(String),
    #[error("predictor id `{0}` is already registered with different parameters")]
    PredictorConflict(String),
    #[error("dimension inconsistency: {0}")]
    Dimension(String),
    #[error("feature names do not match: expected {expected:?}, got {got:?}")]
    FeatureMismatch { expected: Vec<String>, got: Vec<String> },
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("interval count must be at least 1")]
    ZeroIntervals,
    #[error("name collision after mangling: `{0}`")]
    NameCollision(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
