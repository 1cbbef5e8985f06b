//! An exponent sweep as the CLI runs it: CSV on stdout, verdict on stderr.

use chain_census::harness::{run_experiment, ConstructionId, ExperimentConfig};

fn main() -> chain_census::Result<()> {
    let cfg = ExperimentConfig::new(ConstructionId::Planar, 5, vec![16, 32, 64, 128]);
    let report = run_experiment(&cfg)?;
    print!("{}", report.csv());
    eprint!("{}", report.summary());
    std::fs::write(std::env::temp_dir().join("planar-k5.svg"), report.svg())?;
    Ok(())
}
