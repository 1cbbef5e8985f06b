//! File formats, experiment sweeps, exponent fits and claim checks.

mod experiment;
mod io;
mod verify;

pub use experiment::{
    build, count_built, fit_exponent, run_experiment, Built, ConstructionId, Counts,
    ExperimentConfig, ExperimentReport, ExperimentRow, Fit, GenParams, Shape,
};
pub use io::{
    format_manifest, format_points, format_tree, parse_points, parse_tree, read_manifest,
    read_points, read_tree, write_manifest, write_points, write_tree,
};
pub use verify::{verify, verify_covering, Claim, Target, VerifyReport};
