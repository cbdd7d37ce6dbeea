use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by every stage of the pipeline.
#[derive(Debug, Error)]
pub enum TwcError {
    #[error("dataset has {n} points, at least {min} required")]
    DatasetTooSmall { n: usize, min: usize },
    #[error("duplicate point id `{0}`")]
    DuplicateId(String),
    #[error("point `{id}` has a non-finite coordinate")]
    NonFinite { id: String },
    #[error("{path}: line {line}: {msg}")]
    Parse { path: String, line: u64, msg: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("degenerate dataset: {0}")]
    DegenerateDataset(String),
    #[error("weights underflowed to zero (parameter too large)")]
    Underflow,
    #[error("free energy has no interior maximum in (0, {alpha_max}]; retry with a larger alpha_max")]
    AlphaNotBracketed { alpha_max: f64 },
    #[error("alpha vector is empty")]
    EmptyAlphaVector,
    #[error("node `{0}` has no outgoing transition mass")]
    AbsorbingState(String),
    #[error("meta-distance did not converge within {iterations} iterations")]
    NotConverged { iterations: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, TwcError>;

impl TwcError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        TwcError::Io { path: path.into(), source }
    }
}
