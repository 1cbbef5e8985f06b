//! Explicit point configurations realizing lower-bound constructions, each
//! with a count it is guaranteed to reach.

mod grid;
mod planar;
mod space;
mod special;
mod split;

pub use grid::{
    gen_cube_grid, gen_unit_rich_grid, peel_min_degree, popular_distance, PeeledCore, RichGrid,
};
pub use planar::{
    gen_planar_chain, gen_planar_k1mod3, last_layer_diameter2, planar_chain_floor,
    planar_chain_meets_floor, K1Mod3,
};
pub use space::{
    gen_3d_even, gen_3d_odd_regular, gen_3d_odd_sphere, CircleBouquet, OddRegular, OddSphere,
    SpherePair, SphereSupplier,
};
pub use special::{
    alternating_chain_count, gen_orthogonal_circles, gen_star, gen_star_with_radii, gen_t_l3,
    stereographic, stereographic_inverse, tree_l3, Tl3, TreeConstruction, Variant,
};
pub use split::{split_and_translate, SplitPair};

use crate::geometry::{to_f64, Rational, DEFAULT_EPS};

/// Tolerance for float constructions: the default, shrunk when some distance
/// is so small that the guard band would not fit.
pub(crate) fn float_tolerance(delta2: &[Rational]) -> f64 {
    delta2
        .iter()
        .map(|d| to_f64(d) / 1000.0)
        .fold(DEFAULT_EPS, f64::min)
}
