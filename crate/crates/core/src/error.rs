//! Error type shared by every module of the crate.

use std::path::PathBuf;

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while loading, resampling, training or evaluating.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error in {path}: {message}")]
    Csv { path: PathBuf, message: String },

    #[error("non-numeric value {value:?} at row {row}, column {column:?}")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row} has {found} cells, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("label column {0:?} not found")]
    MissingLabelColumn(String),

    #[error("unknown class {0:?}")]
    UnknownClass(String),

    #[error("binarization leaves class {0:?} empty")]
    EmptyClass(String),

    #[error("positive class {positive:?} has {n_positive} rows but the negative side has only {n_negative}; the positive class must be the minority")]
    PositiveNotMinority {
        positive: String,
        n_positive: usize,
        n_negative: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("class {class} has {count} instances, fewer than k = {k} folds")]
    ClassSmallerThanFolds { class: String, count: usize, k: usize },

    #[error("minority class has {found} instances; at least {needed} are required")]
    InsufficientMinority { needed: usize, found: usize },

    #[error("target count {target} is below the current minority count {current}")]
    TargetBelowMinority { target: usize, current: usize },

    #[error("E_NO_PAIRS: no native counterfactual pairs at tolerance factor {tolerance} with at most {max_diffs} differences ({n_majority} majority x {n_minority} minority candidates checked)")]
    NoPairs {
        tolerance: f64,
        max_diffs: usize,
        n_majority: usize,
        n_minority: usize,
    },

    #[error("the CF-Set holds no pairs")]
    EmptyCfSet,

    #[error("safe-level sampling discarded {discarded} consecutive draws without producing a synthetic instance")]
    Livelock { discarded: usize },

    #[error("training data contains a single class")]
    SingleClass,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("configuration {config}: {source}")]
    InConfig {
        config: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line front end: 2 validation, 3 algorithmic, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 4,
            Error::NoPairs { .. }
            | Error::EmptyCfSet
            | Error::Livelock { .. }
            | Error::SingleClass
            | Error::InsufficientMinority { .. } => 3,
            Error::InConfig { source, .. } => source.exit_code(),
            _ => 2,
        }
    }
}
