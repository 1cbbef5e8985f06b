//! Tree embeddings: a star of concentric circles and both patterns for the
//! three-level tree.

use chain_census::constructions::{gen_star, gen_t_l3, Variant};
use chain_census::layered::{count_tree_embeddings, count_tree_homomorphisms};

fn main() -> chain_census::Result<()> {
    let star = gen_star(3, 12)?;
    let e = count_tree_embeddings(&star.layers, &star.tree, star.mode)?;
    println!("star l=3 n=12: {e} embeddings, guaranteed {}", star.floor);

    for variant in [Variant::JointsFixed, Variant::CenterFixed] {
        let t = gen_t_l3(2, 16, variant, 7)?;
        let c = &t.construction;
        let e = count_tree_embeddings(&c.layers, &c.tree, c.mode)?;
        let h = count_tree_homomorphisms(&c.layers, &c.tree, c.mode)?;
        println!(
            "{variant:?}: {e} embeddings ({h} homomorphisms), guaranteed {}",
            c.floor
        );
    }
    Ok(())
}
