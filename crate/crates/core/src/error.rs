use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("mixed scalar kinds in one point set")]
    MixedScalarKinds,

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid distance: {0}")]
    InvalidDistance(String),

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("no rational point on the circle of squared radius {0}")]
    NoRationalPoint(String),

    #[error("parameter range is empty: {0}")]
    EmptyRange(String),

    #[error("concentric circles or spheres have no well-defined intersection")]
    Concentric,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error(
        "separation certificate failed between layers {layer} and {next}: \
         |d2 - delta2| = {deviation:e} lies in (eps, 100 eps] with eps = {eps:e}"
    )]
    Unstable {
        layer: usize,
        next: usize,
        deviation: f64,
        eps: f64,
    },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("no edges at the requested distance")]
    NoEdges,

    #[error("claim `{claim}` does not apply to `{target}`")]
    InapplicableClaim { claim: String, target: String },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("exponent fit needs at least 3 rows with positive counts, got {0}")]
    TooFewRows(usize),

    #[error("enumeration limit of {0} nodes exceeded")]
    LimitExceeded(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
