//! Writing a configuration as a manifest with point files, reading it back,
//! and checking a claim against it.

use chain_census::constructions::gen_orthogonal_circles;
use chain_census::harness::{format_points, read_manifest, verify, write_manifest, Claim, Target};
use chain_census::layered::count_chains;

fn main() -> chain_census::Result<()> {
    let dir = std::env::temp_dir().join("chain-census-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("orthogonal.manifest");
    let config = gen_orthogonal_circles(4, 2, 6)?;
    write_manifest(&path, &config)?;
    print!("{}", std::fs::read_to_string(&path)?);
    print!("{}", format_points(config.layer(0)));

    let back = read_manifest(&path)?;
    println!("chains after reload: {}", count_chains(&back)?);
    print!("{}", verify(&Target::Config(back), Claim::Richness)?);
    Ok(())
}
