//! The unit-rich grid: popular distance, min-degree peeling, and cutting a
//! grid pair into a pair whose second side is tiny.

use chain_census::constructions::{gen_unit_rich_grid, peel_min_degree, split_and_translate};
use chain_census::geometry::{format_rational, int, Mode};

fn main() -> chain_census::Result<()> {
    let grid = gen_unit_rich_grid(400)?;
    println!(
        "400-point grid: popular squared distance {} realized by {} pairs",
        format_rational(&grid.popular_d2),
        grid.pairs
    );

    let peeled = peel_min_degree(&grid.points, &grid.popular_d2, Mode::Exact)?;
    println!(
        "peeled core: {} points, min degree {}, threshold met: {}",
        peeled.core.len(),
        peeled.min_degree,
        peeled.meets_threshold()
    );

    let s = split_and_translate(&grid.points, &grid.points, &int(1), &int(1), 42)?;
    println!(
        "split at distance 1: {} of {} incidences kept (floor {}), second side has {} points, diameter {:.4}",
        s.preserved,
        s.original,
        format_rational(&s.floor()),
        s.x2.len(),
        s.x2.diameter2().to_f64().sqrt()
    );
    Ok(())
}
