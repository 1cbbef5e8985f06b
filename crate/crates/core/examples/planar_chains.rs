//! Planar constructions: the three-step induction and the split-grid base
//! for chain lengths of the form 3j + 1.

use chain_census::constructions::{
    gen_planar_chain, gen_planar_k1mod3, last_layer_diameter2, planar_chain_floor,
};
use chain_census::geometry::int;
use chain_census::layered::count_chains;

fn main() -> chain_census::Result<()> {
    for k in 0..=6 {
        let n = 12;
        let config = gen_planar_chain(k, &vec![int(1); k], n, 0.25)?;
        println!(
            "k={k}: {} chains (floor {}), last layer diameter {:.3}",
            count_chains(&config)?,
            planar_chain_floor(k, n),
            last_layer_diameter2(&config).sqrt()
        );
    }

    let c = gen_planar_k1mod3(4, 64, 0.5, 1)?;
    println!(
        "k=4 on the 64-point grid: {} chains, floor n * preserved = {} (preserved {} of {})",
        count_chains(&c.config)?,
        c.floor,
        c.split.preserved,
        c.split.original
    );
    Ok(())
}
