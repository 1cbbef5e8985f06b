//! Chains, walks and incidences of a small layered configuration, checked
//! against brute force.

use chain_census::geometry::{int, DistanceSpec, PointSet};
use chain_census::layered::{count_chains, count_walks, for_each_chain, LayeredConfig};

fn main() -> chain_census::Result<()> {
    // integer points on a line; every layer is the same set
    let set = PointSet::exact(1, (0..8).map(|x| vec![int(x)]).collect())?;
    let spec = DistanceSpec::exact(vec![int(1), int(4), int(1)])?;
    let config = LayeredConfig::repeated(set, spec)?;
    println!("{}", config.summary());

    let chains = count_chains(&config)?;
    let walks = count_walks(&config)?;
    let mut listed = 0u32;
    for_each_chain(&config, |_| listed += 1)?;
    println!("chains {chains} (enumerated {listed}), walks {walks}");
    assert_eq!(chains, listed.into());
    Ok(())
}
