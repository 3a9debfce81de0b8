use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is zero")]
    ZeroMatrix,

    #[error("iterative solver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("beta must lie in (0, 1], got {0}")]
    BadBeta(f64),

    #[error("invalid sample count: {0}")]
    BadCount(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("sampled index {0} has zero probability")]
    ZeroProbabilitySampled(usize),

    #[error("bad shape: {0}")]
    BadShape(String),

    #[error("selected column {0} has zero leverage score")]
    ZeroLeverage(usize),

    #[error("matrix is not rank one (sigma_2 / sigma_1 = {0:e})")]
    NotRankOne(f64),

    #[error("selected column {0} is zero")]
    ZeroColumnSelected(usize),

    #[error("index {index} out of range for {len} columns")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("parameter `{name}` = {value} outside {range}")]
    RangeViolation {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("bad spectrum: {0}")]
    BadSpectrum(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported Matrix Market header: {0}")]
    UnsupportedField(String),

    #[error("ragged rows: line {line} has {found} fields, expected {expected}")]
    RaggedRows {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("trial failed (strategy {strategy}, c = {c}, trial {trial}, seed {seed}): {source}")]
    Trial {
        strategy: String,
        c: usize,
        trial: usize,
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
