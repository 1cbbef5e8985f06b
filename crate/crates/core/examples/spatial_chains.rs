//! Constructions in three dimensions: even chains with an exact count, and
//! the two odd variants.

use chain_census::constructions::{
    gen_3d_even, gen_3d_odd_regular, gen_3d_odd_sphere, CircleBouquet,
};
use chain_census::geometry::int;
use chain_census::layered::count_chains;

fn main() -> chain_census::Result<()> {
    let even = gen_3d_even(4, &vec![int(1); 4], 20)?;
    println!(
        "even k=4 n=20: {} chains (n^3 = 8000)",
        count_chains(&even)?
    );

    let odd = gen_3d_odd_sphere(3, 20, &CircleBouquet::default())?;
    println!(
        "sphere k=3 n=20: {} chains, {} incidences on the sphere, floor {}",
        count_chains(&odd.config)?,
        odd.incidences,
        odd.floor
    );

    let reg = gen_3d_odd_regular(3, 125)?;
    println!(
        "regular k=3: core of {} points with min degree {}, {} chains, floor {:?}",
        reg.peeled.core.len(),
        reg.peeled.min_degree,
        count_chains(&reg.config)?,
        reg.floor
    );
    Ok(())
}
