use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("asymmetry level must lie strictly inside (0, 1), got {0}")]
    InvalidTau(f64),

    #[error("series must be nonempty")]
    EmptySeries,

    #[error("non-finite value {value} at position {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual} ({context})")]
    DimensionMismatch {
        expected: usize,
        actual: usize,
        context: &'static str,
    },

    #[error("all values lie on one side of the center ({side})")]
    OneSided { side: Side },

    #[error("invalid cluster count k={k} for n={n} observations")]
    InvalidK { k: usize, n: usize },

    #[error("cluster {0} is empty")]
    EmptyCluster(usize),

    #[error("label {label} at position {index} is out of range for k={k}")]
    LabelOutOfRange {
        index: usize,
        label: usize,
        k: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("need at least {needed} clusters, got {actual}")]
    TooFewClusters { needed: usize, actual: usize },

    #[error("clusters {0} and {1} have coincident means")]
    CoincidentMeans(usize, usize),

    #[error("mean squared error is zero; PSNR is infinite")]
    InfinitePsnr,

    #[error("column {column} has zero variance")]
    ZeroVariance { column: usize },

    #[error("{path}: row {row} has {actual} fields, expected {expected}")]
    RaggedRow {
        path: PathBuf,
        row: usize,
        expected: usize,
        actual: usize,
    },

    #[error("{path}: cannot parse {cell:?} at row {row}, column {column}")]
    ParseCell {
        path: PathBuf,
        row: usize,
        column: usize,
        cell: String,
    },

    #[error("{path}: file contains no data")]
    EmptyFile { path: PathBuf },

    #[error("invalid PPM: {0}")]
    InvalidPpm(String),

    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which side of a center all values fell on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Above => f.write_str("all above"),
            Side::Below => f.write_str("all below"),
        }
    }
}
