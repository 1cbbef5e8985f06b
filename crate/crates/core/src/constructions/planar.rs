use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{One, Signed};

use super::split::{split_and_translate, SplitPair};
use super::{float_tolerance, gen_unit_rich_grid};
use crate::error::{Error, Result};
use crate::geometry::{
    certify_separation, circle_circle_intersection, int, rational_below, rational_circle_points,
    rational_circle_seed, rational_sqrt, rational_sqrt_upper, to_f64, DistanceSpec, Mode, Point,
    PointSet, Rational, Scalar,
};
use crate::layered::{count_chains, LayeredConfig};

/// Seed for the split pair tried as the `k = 1` base.
const BASE_SPLIT_SEED: u64 = 0x5eed;

/// Directions tried for the singleton of each inductive step.
const STEP_ATTEMPTS: usize = 64;

/// Planar configuration with at least `n^(floor((k+1)/3)+1)` chains whose last
/// layer has diameter at most `eps`.
///
/// For `k <= 2` the layers are exact whenever the needed circles carry
/// rational points. Longer chains are built by repeatedly appending three
/// layers (a matched layer, a singleton, an arc) and use tolerant mode.
pub fn gen_planar_chain(
    k: usize,
    delta2: &[Rational],
    n: usize,
    eps: f64,
) -> Result<LayeredConfig> {
    check_args(k, delta2, n, eps)?;
    if k <= 2 {
        return planar_base(k, delta2, n, eps);
    }
    let d = |i: usize| to_f64(&delta2[i]).sqrt();
    let inner_eps = d(k - 3).min(d(k - 2)) / 3.0;
    let inner = gen_planar_chain(k - 3, &delta2[..k - 3], n, inner_eps)?;
    let mut layers = float_layers(&inner);
    let tol = float_tolerance(delta2);
    extend(&mut layers, &delta2[k - 3..], inner_eps, n, eps, tol)?;
    finish(layers, delta2, tol)
}

/// The count every [`gen_planar_chain`] output is guaranteed to reach.
pub fn planar_chain_floor(k: usize, n: usize) -> BigUint {
    BigUint::from(n).pow(((k + 1) / 3 + 1) as u32)
}

fn check_args(k: usize, delta2: &[Rational], n: usize, eps: f64) -> Result<()> {
    if delta2.len() != k {
        return Err(Error::InvalidConfig(format!(
            "{} squared distances for k = {k}",
            delta2.len()
        )));
    }
    if n == 0 {
        return Err(Error::Construction("n must be at least 1".into()));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidTolerance(format!(
            "eps {eps} is not positive"
        )));
    }
    DistanceSpec::exact(delta2.to_vec())?;
    Ok(())
}

fn planar_base(k: usize, delta2: &[Rational], n: usize, eps: f64) -> Result<LayeredConfig> {
    let e = rational_below(eps, 40);
    if !e.is_positive() {
        return Err(Error::InvalidTolerance(format!("eps {eps} is too small")));
    }
    let origin = Point::exact(0, vec![int(0), int(0)]);
    match k {
        0 => {
            let step = &e / int(n as i64);
            let coords = (0..n)
                .map(|i| vec![&step * int(i as i64), int(0)])
                .collect();
            LayeredConfig::new(
                vec![PointSet::exact(2, coords)?],
                DistanceSpec::exact(vec![])?,
            )
        }
        1 => {
            if let Some(pair) = split_base(&delta2[0], n, &e)? {
                return Ok(pair);
            }
            let arc = arc_points(&origin, &delta2[0], n, &e, false);
            let spec = DistanceSpec::exact(delta2.to_vec())?;
            match arc {
                Some(arc) => LayeredConfig::new(
                    vec![PointSet::exact(2, vec![vec![int(0), int(0)]])?, arc?],
                    spec,
                ),
                None => {
                    let layers = vec![
                        vec![[0.0, 0.0]],
                        float_arc([0.0, 0.0], &delta2[0], n, eps, 0.0),
                    ];
                    finish(layers, delta2, float_tolerance(delta2))
                }
            }
        }
        2 => {
            let equal = delta2[0] == delta2[1];
            let p1 = arc_points(&origin, &delta2[0], n, &e, equal);
            let p3 = arc_points(&origin, &delta2[1], n, &e, false);
            match (p1, p3) {
                (Some(p1), Some(p3)) => LayeredConfig::new(
                    vec![p1?, PointSet::exact(2, vec![vec![int(0), int(0)]])?, p3?],
                    DistanceSpec::exact(delta2.to_vec())?,
                ),
                _ => {
                    let start = if equal { std::f64::consts::PI } else { 0.0 };
                    let layers = vec![
                        float_arc([0.0, 0.0], &delta2[0], n, eps, start),
                        vec![[0.0, 0.0]],
                        float_arc([0.0, 0.0], &delta2[1], n, eps, 0.0),
                    ];
                    finish(layers, delta2, float_tolerance(delta2))
                }
            }
        }
        _ => unreachable!("base cases cover k <= 2"),
    }
}

/// The split grid pair scaled to `delta2`, when `delta2` is a rational square
/// multiple of the grid's popular distance and the pair has at least `n`
/// chains.
fn split_base(delta2: &Rational, n: usize, eps: &Rational) -> Result<Option<LayeredConfig>> {
    let Some(scale) = rational_sqrt(delta2) else {
        return Ok(None);
    };
    let grid = gen_unit_rich_grid(n.max(4))?;
    // The grid's popular distance is 1, so the scaled pair realizes delta2.
    if grid.popular_d2 != int(1) {
        return Ok(None);
    }
    let rel = (eps / &scale).min(Rational::one());
    let pair = split_and_translate(&grid.points, &grid.points, &int(1), &rel, BASE_SPLIT_SEED)?;
    if (pair.preserved as usize) < n {
        return Ok(None);
    }
    let scaled = |s: &PointSet| {
        PointSet::exact(
            2,
            s.iter()
                .map(|p| {
                    p.exact_coords()
                        .unwrap()
                        .iter()
                        .map(|c| c * &scale)
                        .collect()
                })
                .collect(),
        )
    };
    Ok(Some(LayeredConfig::new(
        vec![scaled(&pair.x1)?, scaled(&pair.x2)?],
        DistanceSpec::exact(vec![delta2.clone()])?,
    )?))
}

/// `n` exact points on the circle of squared radius `r2` around `center`
/// spanning a chord of at most `eps`; `None` when the circle has no rational
/// point. With `negative` the parameters are taken below zero.
fn arc_points(
    center: &Point,
    r2: &Rational,
    n: usize,
    eps: &Rational,
    negative: bool,
) -> Option<Result<PointSet>> {
    let seed = rational_circle_seed(r2).ok()?;
    let t_max = eps / (rational_sqrt_upper(r2) * int(2));
    let zero = int(0);
    let (lo, hi) = if negative {
        (-t_max.clone(), zero.clone())
    } else {
        (zero.clone(), t_max.clone())
    };
    Some(rational_circle_points(
        center,
        r2,
        n,
        (&lo, &hi),
        Some(seed),
    ))
}

/// `n` float points on a circle of squared radius `r2` starting at angle
/// `start`, spanning a chord below `eps`.
fn float_arc(center: [f64; 2], r2: &Rational, n: usize, eps: f64, start: f64) -> Vec<[f64; 2]> {
    let r = to_f64(r2).sqrt();
    let span = 2.0 * (eps / (2.0 * r)).min(1.0).asin() * (1.0 - 1e-9);
    (0..n)
        .map(|i| {
            let (s, c) = (start + span * i as f64 / n as f64).sin_cos();
            [center[0] + r * c, center[1] + r * s]
        })
        .collect()
}

fn float_layers(config: &LayeredConfig) -> Vec<Vec<[f64; 2]>> {
    config
        .layers()
        .iter()
        .map(|l| l.iter().map(|p| [p.approx()[0], p.approx()[1]]).collect())
        .collect()
}

fn to_set(layer: &[[f64; 2]]) -> PointSet {
    PointSet::float(2, layer.iter().map(|p| p.to_vec()).collect()).expect("planar points")
}

fn finish(layers: Vec<Vec<[f64; 2]>>, delta2: &[Rational], tol: f64) -> Result<LayeredConfig> {
    let spec = DistanceSpec::new(delta2.to_vec(), Mode::Tolerant(tol))?;
    LayeredConfig::new(layers.iter().map(|l| to_set(l)).collect(), spec)
}

fn key(p: &[f64; 2]) -> [u64; 2] {
    p.map(|x| {
        if x == 0.0 {
            0.0f64.to_bits()
        } else {
            x.to_bits()
        }
    })
}

/// Appends a matched layer, a singleton and an arc of `n` points realizing
/// `delta2[0..3]`. The current last layer must have diameter at most
/// `prev_eps <= min(delta_a, delta_b) / 3`.
pub(crate) fn extend(
    layers: &mut Vec<Vec<[f64; 2]>>,
    delta2: &[Rational],
    prev_eps: f64,
    n: usize,
    eps: f64,
    tol: f64,
) -> Result<()> {
    let (da2, db2) = (to_f64(&delta2[0]), to_f64(&delta2[1]));
    let reach = da2.sqrt() + db2.sqrt() - 2.0 * prev_eps;
    let last = layers.last().expect("nonempty").clone();
    let y = last[0];
    let used: HashSet<[u64; 2]> = layers.iter().flatten().map(key).collect();
    let mode = Mode::Tolerant(tol);
    for attempt in 0..STEP_ATTEMPTS {
        let theta = 0.7 + 2.399_963_229_728_653 * attempt as f64;
        let (s, c) = theta.sin_cos();
        let x = [y[0] + reach * c, y[1] + reach * s];
        let mut matched = Vec::with_capacity(last.len());
        let mut fresh: HashSet<[u64; 2]> = HashSet::new();
        let mut ok = true;
        for z in &last {
            match circle_circle_intersection(z, da2, &x, db2)?.first() {
                Some(w) => {
                    if fresh.insert(key(w)) {
                        matched.push(*w);
                    }
                }
                None => ok = false,
            }
        }
        let arc = float_arc(x, &delta2[2], n, eps, theta);
        let new_points = || matched.iter().chain(std::iter::once(&x)).chain(&arc);
        ok &= new_points().all(|p| !used.contains(&key(p)));
        let distinct: HashSet<[u64; 2]> = new_points().map(key).collect();
        ok &= distinct.len() == matched.len() + 1 + arc.len();
        if !ok {
            continue;
        }
        let (lz, lm, lx, la) = (to_set(&last), to_set(&matched), to_set(&[x]), to_set(&arc));
        let stable = certify_separation(&lz, &lm, &delta2[0], mode).is_stable()
            && certify_separation(&lm, &lx, &delta2[1], mode).is_stable()
            && certify_separation(&lx, &la, &delta2[2], mode).is_stable();
        if stable {
            layers.push(matched);
            layers.push(vec![x]);
            layers.push(arc);
            return Ok(());
        }
    }
    Err(Error::Construction(format!(
        "no singleton placement passed the checks after {STEP_ATTEMPTS} attempts"
    )))
}

/// Output of [`gen_planar_k1mod3`].
#[derive(Clone, Debug)]
pub struct K1Mod3 {
    pub config: LayeredConfig,
    pub split: SplitPair,
    /// `n^((k-1)/3) * split.preserved`.
    pub floor: BigUint,
}

/// Chains with `k = 1 (mod 3)`: a split grid pair as the base, then
/// `(k-1)/3` inductive steps. Every distance is the grid's popular one,
/// `delta`, and the last layer has diameter at most `eps * delta`.
pub fn gen_planar_k1mod3(k: usize, n: usize, eps: f64, seed: u64) -> Result<K1Mod3> {
    if k % 3 != 1 {
        return Err(Error::Construction(format!("k = {k} is not 1 mod 3")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidTolerance(format!(
            "eps {eps} is not positive"
        )));
    }
    let grid = gen_unit_rich_grid(n.max(4))?;
    let d2 = grid.popular_d2.clone();
    let delta = to_f64(&d2).sqrt();
    // the next step needs the zoomed side within delta / 3
    let target = if k == 1 { eps } else { eps.min(1.0 / 3.0) };
    let rel = rational_below(target, 40).min(Rational::one());
    let split = split_and_translate(&grid.points, &grid.points, &d2, &rel, seed)?;
    let delta2 = vec![d2.clone(); k];
    let config = if k == 1 {
        LayeredConfig::new(
            vec![split.x1.clone(), split.x2.clone()],
            DistanceSpec::exact(delta2.clone())?,
        )?
    } else {
        let tol = float_tolerance(&delta2);
        let mut layers: Vec<Vec<[f64; 2]>> = [&split.x1, &split.x2]
            .iter()
            .map(|s| s.iter().map(|p| [p.approx()[0], p.approx()[1]]).collect())
            .collect();
        let steps = (k - 1) / 3;
        for s in 0..steps {
            let arc_eps = if s + 1 == steps { eps * delta } else { delta / 3.0 };
            extend(&mut layers, &delta2[..3], delta / 3.0, n, arc_eps, tol)?;
        }
        finish(layers, &delta2, tol)?
    };
    let floor = BigUint::from(n).pow(((k - 1) / 3) as u32) * BigUint::from(split.preserved);
    Ok(K1Mod3 {
        config,
        split,
        floor,
    })
}

/// Diameter of the last layer, squared.
pub fn last_layer_diameter2(config: &LayeredConfig) -> f64 {
    match config.layer(config.k()).diameter2() {
        Scalar::Exact(r) => to_f64(&r),
        Scalar::Float(x) => x,
    }
}

/// Convenience check used by tests and `verify`.
pub fn planar_chain_meets_floor(config: &LayeredConfig, n: usize) -> Result<bool> {
    Ok(count_chains(config)? >= planar_chain_floor(config.k(), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ratio;

    fn ones(k: usize) -> Vec<Rational> {
        vec![int(1); k]
    }

    #[test]
    fn k0_is_a_small_segment() {
        let c = gen_planar_chain(0, &[], 1, 0.1).unwrap();
        assert_eq!(count_chains(&c).unwrap(), BigUint::from(1u32));
        let c = gen_planar_chain(0, &[], 7, 0.1).unwrap();
        assert_eq!(c.mode(), Mode::Exact);
        assert!(last_layer_diameter2(&c) <= 0.01);
    }

    #[test]
    fn k2_is_exactly_n_squared() {
        let c = gen_planar_chain(2, &[int(1), int(2)], 5, 0.1).unwrap();
        assert_eq!(c.mode(), Mode::Exact);
        assert_eq!(count_chains(&c).unwrap(), BigUint::from(25u32));
        let c = gen_planar_chain(2, &ones(2), 9, 0.1).unwrap();
        assert_eq!(count_chains(&c).unwrap(), BigUint::from(81u32));
        // 3 is not a sum of two rational squares
        let c = gen_planar_chain(2, &[int(3), int(1)], 6, 0.1).unwrap();
        assert!(matches!(c.mode(), Mode::Tolerant(_)));
        assert_eq!(count_chains(&c).unwrap(), BigUint::from(36u32));
    }

    #[test]
    fn k1_fan() {
        let c = gen_planar_chain(1, &[ratio(25, 4)], 6, 0.5).unwrap();
        assert_eq!(count_chains(&c).unwrap(), BigUint::from(6u32));
        assert!(last_layer_diameter2(&c) <= 0.25);
    }

    #[test]
    fn inductive_steps_meet_the_floor() {
        for k in 3..=6 {
            let c = gen_planar_chain(k, &ones(k), 6, 0.2).unwrap();
            assert!(planar_chain_meets_floor(&c, 6).unwrap(), "k = {k}");
            assert!(c.layers_disjoint());
            assert!(last_layer_diameter2(&c) <= 0.04 + 1e-12);
        }
        let c = gen_planar_chain(5, &ones(5), 8, 0.1).unwrap();
        assert!(count_chains(&c).unwrap() >= BigUint::from(512u32));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(gen_planar_chain(2, &[int(1)], 3, 0.1).is_err());
        assert!(gen_planar_chain(1, &[int(0)], 3, 0.1).is_err());
        assert!(gen_planar_chain(1, &[int(1)], 0, 0.1).is_err());
        assert!(gen_planar_chain(1, &[int(1)], 3, 0.0).is_err());
    }

    #[test]
    fn k1mod3_floor() {
        let r = gen_planar_k1mod3(1, 16, 0.5, 1).unwrap();
        assert_eq!(
            count_chains(&r.config).unwrap(),
            BigUint::from(r.split.preserved)
        );
        let r = gen_planar_k1mod3(4, 16, 0.5, 1).unwrap();
        assert!(count_chains(&r.config).unwrap() >= r.floor);
        assert!(gen_planar_k1mod3(3, 16, 0.5, 1).is_err());
    }
}
