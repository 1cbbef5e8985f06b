use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::float_tolerance;
use super::gen_unit_rich_grid;
use super::split::{split_and_translate, SplitPair};
use crate::error::{Error, Result};
use crate::geometry::{
    certify_separation, circle_circle_intersection, format_rational, int, ratio,
    rational_circle_points, rational_circle_seed, to_f64, DistanceSpec, Mode, Point, PointSet,
    Rational,
};
use crate::layered::{LabeledTree, LayeredConfig, TreeEdge};

/// Two circles of squared radius 1/2 in orthogonal coordinate planes of
/// `R^d`, `n/2` exact points each. Every cross pair is at squared distance 1.
pub fn gen_orthogonal_circles(d: usize, k: usize, n: usize) -> Result<LayeredConfig> {
    if d < 4 {
        return Err(Error::Construction(format!("dimension {d} is below 4")));
    }
    if n == 0 || n % 2 != 0 {
        return Err(Error::Construction(format!(
            "n = {n} must be positive and even"
        )));
    }
    let half = ratio(1, 2);
    let origin = Point::exact(0, vec![int(0), int(0)]);
    let zero = int(0);
    let arc = rational_circle_points(
        &origin,
        &half,
        n / 2,
        (&zero, &half),
        Some((half.clone(), half.clone())),
    )?;
    let mut coords = Vec::with_capacity(n);
    for axes in [(0, 1), (2, 3)] {
        for p in &arc {
            let c = p.exact_coords().unwrap();
            let mut v = vec![int(0); d];
            v[axes.0] = c[0].clone();
            v[axes.1] = c[1].clone();
            coords.push(v);
        }
    }
    LayeredConfig::repeated(
        PointSet::exact(d, coords)?,
        DistanceSpec::exact(vec![int(1); k])?,
    )
}

fn falling(m: usize, r: usize) -> BigUint {
    if r > m {
        return BigUint::zero();
    }
    (0..r).fold(BigUint::one(), |acc, i| acc * BigUint::from(m - i))
}

/// Distinct tuples of length `k + 1` alternating between sets of sizes `a`
/// and `b`, starting on either side.
pub fn alternating_chain_count(a: usize, b: usize, k: usize) -> BigUint {
    let (hi, lo) = ((k + 2) / 2, (k + 1) / 2);
    falling(a, hi) * falling(b, lo) + falling(b, hi) * falling(a, lo)
}

/// Layers (one per tree vertex) together with the tree they embed.
#[derive(Clone, Debug)]
pub struct TreeConstruction {
    pub layers: Vec<PointSet>,
    pub tree: LabeledTree,
    pub mode: Mode,
    /// Count the construction guarantees.
    pub floor: BigUint,
}

impl TreeConstruction {
    /// The layers as a configuration whose distances follow the tree's edge
    /// order; handy for writing a manifest.
    pub fn as_config(&self) -> Result<LayeredConfig> {
        let delta2 = self.tree.edges().iter().map(|e| e.d2.clone()).collect();
        LayeredConfig::new(self.layers.clone(), DistanceSpec::new(delta2, self.mode)?)
    }
}

/// Star: a center singleton and `l` circles of squared radii `1, 4, ..., l^2`
/// carrying `n / l` exact points each. Exactly `(n/l)^l` embeddings.
pub fn gen_star(l: usize, n: usize) -> Result<TreeConstruction> {
    if l == 0 || n % l != 0 || n == 0 {
        return Err(Error::Construction(format!(
            "n = {n} must be a positive multiple of l = {l}"
        )));
    }
    let radii: Vec<Rational> = (1..=l as i64).map(|i| int(i * i)).collect();
    gen_star_with_radii(&radii, n / l)
}

/// Star with the given squared radii and `per` points per circle.
pub fn gen_star_with_radii(radii2: &[Rational], per: usize) -> Result<TreeConstruction> {
    let mut seen = HashSet::new();
    for r in radii2 {
        if !seen.insert(r) {
            return Err(Error::InvalidDistance(format!(
                "repeated radius {}",
                format_rational(r)
            )));
        }
    }
    if radii2.is_empty() || per == 0 {
        return Err(Error::Construction(
            "a star needs at least one leaf and one point per circle".into(),
        ));
    }
    let origin = Point::exact(0, vec![int(0), int(0)]);
    let mut layers = vec![PointSet::exact(2, vec![vec![int(0), int(0)]])?];
    let (zero, one) = (int(0), int(1));
    for r in radii2 {
        let seed = rational_circle_seed(r)?;
        layers.push(rational_circle_points(
            &origin,
            r,
            per,
            (&zero, &one),
            Some(seed),
        )?);
    }
    Ok(TreeConstruction {
        layers,
        tree: LabeledTree::star(radii2)?,
        mode: Mode::Exact,
        floor: BigUint::from(per).pow(radii2.len() as u32),
    })
}

/// The tree with a center of degree `l` and `l` pendant paths of 3 vertices.
/// Vertex 0 is the center; arm `j` is `3j+1 - 3j+2 - 3j+3`. Every edge
/// carries `d2`.
pub fn tree_l3(l: usize, d2: &Rational) -> Result<LabeledTree> {
    let mut edges = Vec::with_capacity(3 * l);
    for j in 0..l {
        let (a, b, c) = (3 * j + 1, 3 * j + 2, 3 * j + 3);
        for (u, v) in [(0, a), (a, b), (b, c)] {
            edges.push(TreeEdge {
                a: u,
                b: v,
                d2: d2.clone(),
            });
        }
    }
    LabeledTree::new(3 * l + 1, edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// One fixed center; every arm is a split unit-rich pair.
    CenterFixed,
    /// The leaves' neighbors are fixed singletons.
    JointsFixed,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "center" | "center-fixed" => Ok(Variant::CenterFixed),
            "joints" | "joints-fixed" => Ok(Variant::JointsFixed),
            _ => Err(Error::Construction(format!("unknown variant `{s}`"))),
        }
    }
}

/// Output of [`gen_t_l3`]. For the center variant `split` holds the pair
/// used on every arm.
#[derive(Clone, Debug)]
pub struct Tl3 {
    pub construction: TreeConstruction,
    pub split: Option<SplitPair>,
}

const ARM_ATTEMPTS: usize = 32;

/// Configurations for the tree of [`tree_l3`] realizing one of the two
/// lower-bound patterns, in tolerant mode.
///
/// `JointsFixed` uses unit distances and guarantees `n^(l+1)` embeddings.
/// `CenterFixed` uses the popular distance of the `n`-point grid and
/// guarantees `preserved^l`, where `preserved` is the incidence count of the
/// split grid pair.
pub fn gen_t_l3(l: usize, n: usize, variant: Variant, seed: u64) -> Result<Tl3> {
    if l == 0 || n == 0 {
        return Err(Error::Construction("l and n must be positive".into()));
    }
    let grid = match variant {
        Variant::CenterFixed => Some(gen_unit_rich_grid(n.max(4))?),
        Variant::JointsFixed => None,
    };
    let d2 = grid
        .as_ref()
        .map_or_else(|| int(1), |g| g.popular_d2.clone());
    let tree = tree_l3(l, &d2)?;
    let tol = float_tolerance(&vec![d2.clone(); 3 * l]);
    let r2 = to_f64(&d2);
    let delta = r2.sqrt();
    let third = delta / 3.0;
    let reach = 2.0 * delta - 2.0 * third;
    for attempt in 0..ARM_ATTEMPTS {
        let turn = 0.3 + 0.611 * attempt as f64;
        let (mut layers, split) = match variant {
            Variant::JointsFixed => {
                let center: Vec<[f64; 2]> =
                    (0..n).map(|i| [third * i as f64 / n as f64, 0.0]).collect();
                let mut layers = vec![center.clone()];
                for j in 0..l {
                    let theta = turn + std::f64::consts::TAU * j as f64 / l as f64;
                    let (s, c) = theta.sin_cos();
                    let x = [center[0][0] + reach * c, center[0][1] + reach * s];
                    let matched = matched_layer(&center, &x, r2)?;
                    let leaves = (0..n)
                        .map(|i| {
                            let (s, c) = (theta + third * i as f64 / n as f64).sin_cos();
                            [x[0] + delta * c, x[1] + delta * s]
                        })
                        .collect();
                    layers.extend([matched, vec![x], leaves]);
                }
                (layers, None)
            }
            Variant::CenterFixed => {
                let grid = grid.as_ref().expect("built above");
                let split =
                    split_and_translate(&grid.points, &grid.points, &d2, &ratio(1, 3), seed)?;
                let x1: Vec<[f64; 2]> = split
                    .x1
                    .iter()
                    .map(|p| [p.approx()[0], p.approx()[1]])
                    .collect();
                let x2: Vec<[f64; 2]> = split
                    .x2
                    .iter()
                    .map(|p| [p.approx()[0], p.approx()[1]])
                    .collect();
                let c = [0.0, 0.0];
                let mut layers = vec![vec![c]];
                for j in 0..l {
                    let theta = turn + std::f64::consts::TAU * j as f64 / l as f64;
                    let (s, co) = theta.sin_cos();
                    let anchor = x2[0];
                    let target = [reach * co, reach * s];
                    // rotate about the anchor, then move the anchor onto the target
                    let place = |p: &[f64; 2]| {
                        let (dx, dy) = (p[0] - anchor[0], p[1] - anchor[1]);
                        [target[0] + co * dx - s * dy, target[1] + s * dx + co * dy]
                    };
                    let joints: Vec<[f64; 2]> = x2.iter().map(place).collect();
                    let leaves: Vec<[f64; 2]> = x1.iter().map(place).collect();
                    let matched = matched_layer(&joints, &c, r2)?;
                    layers.extend([matched, joints, leaves]);
                }
                (layers, Some(split))
            }
        };
        // a center-fixed arm draws its joints from its own leaf set
        let groups: Vec<Vec<[f64; 2]>> = match variant {
            Variant::JointsFixed => layers.clone(),
            Variant::CenterFixed => {
                let mut g = vec![layers[0].clone()];
                for arm in layers[1..].chunks(3) {
                    g.push(arm[0].clone());
                    g.push(arm[2].clone());
                }
                g
            }
        };
        if !pairwise_disjoint(&groups) {
            continue;
        }
        let sets: Vec<PointSet> = layers
            .drain(..)
            .map(|l| PointSet::float(2, l.into_iter().map(|p| p.to_vec()).collect()))
            .collect::<Result<_>>()?;
        let mode = Mode::Tolerant(tol);
        let stable = tree
            .edges()
            .iter()
            .all(|e| certify_separation(&sets[e.a], &sets[e.b], &e.d2, mode).is_stable());
        if !stable {
            continue;
        }
        let floor = match &split {
            None => BigUint::from(n).pow(l as u32 + 1),
            Some(s) => BigUint::from(s.preserved).pow(l as u32),
        };
        return Ok(Tl3 {
            construction: TreeConstruction {
                layers: sets,
                tree,
                mode,
                floor,
            },
            split,
        });
    }
    Err(Error::Construction(format!(
        "no arm placement passed the checks after {ARM_ATTEMPTS} attempts"
    )))
}

/// One point at squared distance `r2` from both `z` and `x`, for every `z`.
fn matched_layer(from: &[[f64; 2]], x: &[f64; 2], r2: f64) -> Result<Vec<[f64; 2]>> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(from.len());
    for z in from {
        let w = *circle_circle_intersection(z, r2, x, r2)?
            .first()
            .ok_or_else(|| Error::Construction("circles failed to meet".into()))?;
        if seen.insert(w.map(f64::to_bits)) {
            out.push(w);
        }
    }
    Ok(out)
}

fn pairwise_disjoint(layers: &[Vec<[f64; 2]>]) -> bool {
    let total: usize = layers.iter().map(Vec::len).sum();
    let keys: HashSet<[u64; 2]> = layers
        .iter()
        .flatten()
        .map(|p| p.map(|x| if x == 0.0 { 0 } else { x.to_bits() }))
        .collect();
    keys.len() == total
}

/// Inverse stereographic projection of planar points onto the unit sphere:
/// `(x, y) -> (2x, 2y, x^2 + y^2 - 1) / (1 + x^2 + y^2)`. Exact sets stay
/// exact.
pub fn stereographic(set: &PointSet) -> Result<PointSet> {
    if set.dim() != 2 {
        return Err(Error::DimensionMismatch(2, set.dim()));
    }
    let points = set
        .iter()
        .map(|p| match p.exact_coords() {
            Some(c) => {
                let s = &c[0] * &c[0] + &c[1] * &c[1];
                let den = &s + int(1);
                Point::exact(
                    p.id,
                    vec![
                        &c[0] * int(2) / &den,
                        &c[1] * int(2) / &den,
                        (s - int(1)) / den,
                    ],
                )
            }
            None => {
                let c = p.approx();
                let s = c[0] * c[0] + c[1] * c[1];
                let den = 1.0 + s;
                Point::float(
                    p.id,
                    vec![2.0 * c[0] / den, 2.0 * c[1] / den, (s - 1.0) / den],
                )
            }
        })
        .collect();
    PointSet::new(3, set.kind(), points)
}

/// Inverse of [`stereographic`]: `(X, Y, Z) -> (X, Y) / (1 - Z)`. The pole
/// `Z = 1` has no image.
pub fn stereographic_inverse(set: &PointSet) -> Result<PointSet> {
    if set.dim() != 3 {
        return Err(Error::DimensionMismatch(3, set.dim()));
    }
    let points = set
        .iter()
        .map(|p| match p.exact_coords() {
            Some(c) => {
                let den = int(1) - &c[2];
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Point::exact(p.id, vec![&c[0] / &den, &c[1] / &den]))
            }
            None => {
                let c = p.approx();
                let den = 1.0 - c[2];
                if den == 0.0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(Point::float(p.id, vec![c[0] / den, c[1] / den]))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(2, set.kind(), points)
}
