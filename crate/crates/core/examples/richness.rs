//! Rich points, dyadic classes and the covering by stable filtering
//! sequences.

use chain_census::constructions::gen_unit_rich_grid;
use chain_census::geometry::{format_rational, int, ratio, DistanceSpec, Mode};
use chain_census::layered::LayeredConfig;
use chain_census::richness::{
    check_richness_bound, dyadic_partition, stable_covering, DEFAULT_NODE_LIMIT,
};

fn main() -> chain_census::Result<()> {
    let grid = gen_unit_rich_grid(25)?;
    let (p, d2) = (&grid.points, &grid.popular_d2);
    for c in dyadic_partition(p, p, d2, Mode::Exact)? {
        let hi = c.hi.map_or_else(|| "inf".into(), |h| h.to_string());
        println!("richness [{}, {hi}): {} points", c.lo, c.points.len());
    }
    let rep = check_richness_bound(p, p, d2, Mode::Exact)?;
    println!(
        "richness bound holds: {} (tightest ratio {:.3})",
        rep.holds, rep.tightest
    );

    let config = LayeredConfig::repeated(
        grid.points.subset(&(0..9).collect::<Vec<_>>()),
        DistanceSpec::exact(vec![int(1); 3])?,
    )?;
    let eps = ratio(1, 2);
    let cov = stable_covering(&config, &eps, DEFAULT_NODE_LIMIT)?;
    println!(
        "{} stable sequences after {} nodes, length bound {}",
        cov.sequences.len(),
        cov.nodes,
        format_rational(&cov.length_bound(3))
    );
    for s in cov.sequences.iter().take(5) {
        let gamma: Vec<Vec<String>> = s
            .gamma
            .iter()
            .map(|g| g.iter().map(format_rational).collect())
            .collect();
        println!(
            "  {gamma:?} -> class sizes {:?}",
            s.class.iter().map(Vec::len).collect::<Vec<_>>()
        );
    }
    Ok(())
}
