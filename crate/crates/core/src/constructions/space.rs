use std::collections::HashSet;

use num_bigint::BigUint;

use super::float_tolerance;
use super::grid::{gen_cube_grid, peel_min_degree, PeeledCore};
use crate::error::{Error, Result};
use crate::geometry::circle::perpendicular_basis;
use crate::geometry::{
    certify_separation, int, sample_circle_3d, sphere_sphere_intersection_circle, to_f64,
    DistanceSpec, Mode, PointSet, Rational, SphereIntersection,
};
use crate::layered::{count_incidences, LayeredConfig};

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// `n` spiral points on the cap of polar angle below `max_polar` around the
/// unit direction `axis`, on the sphere of radius `r` about `center`.
pub(crate) fn sphere_cap(
    center: [f64; 3],
    r: f64,
    axis: [f64; 3],
    max_polar: f64,
    n: usize,
) -> Vec<[f64; 3]> {
    let (u, v) = perpendicular_basis(&axis);
    let span = 1.0 - max_polar.cos();
    (0..n)
        .map(|i| {
            let cos_t = 1.0 - span * (i as f64 + 0.5) / n as f64;
            let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
            let (sp, cp) = (GOLDEN_ANGLE * i as f64).sin_cos();
            std::array::from_fn(|j| {
                center[j] + r * (cos_t * axis[j] + sin_t * (cp * u[j] + sp * v[j]))
            })
        })
        .collect()
}

fn to_set(layer: &[[f64; 3]]) -> PointSet {
    PointSet::float(3, layer.iter().map(|p| p.to_vec()).collect()).expect("spatial points")
}

/// Caps, singletons and intersection circles for an even `k`, as raw layers.
fn even_layers(k: usize, delta2: &[Rational], n: usize) -> Result<Vec<Vec<[f64; 3]>>> {
    let d2: Vec<f64> = delta2.iter().map(to_f64).collect();
    let mut singles = vec![[0.0; 3]];
    for j in 1..k / 2 {
        // singleton layers 2j-1 and 2j+1 (0-based) flank circle layer 2j
        let s = d2[2 * j - 1].max(d2[2 * j]).sqrt();
        let prev = singles[j - 1];
        singles.push([prev[0] + s, 0.0, 0.0]);
    }
    let mut layers = Vec::with_capacity(k + 1);
    layers.push(sphere_cap(
        singles[0],
        d2[0].sqrt(),
        [-1.0, 0.0, 0.0],
        1.0,
        n,
    ));
    for j in 0..k / 2 {
        layers.push(vec![singles[j]]);
        if j + 1 < k / 2 {
            let circle = match sphere_sphere_intersection_circle(
                &singles[j],
                d2[2 * j + 1],
                &singles[j + 1],
                d2[2 * j + 2],
            )? {
                SphereIntersection::Circle(c) => c,
                _ => {
                    return Err(Error::Construction(format!(
                        "spheres around layers {} and {} do not meet in a circle",
                        2 * j + 2,
                        2 * j + 4
                    )))
                }
            };
            layers.push(sample_circle_3d(&circle, n, 0.1 + j as f64));
        }
    }
    let last = singles[k / 2 - 1];
    layers.push(sphere_cap(last, d2[k - 1].sqrt(), [1.0, 0.0, 0.0], 1.0, n));
    Ok(layers)
}

fn certified(layers: Vec<Vec<[f64; 3]>>, delta2: &[Rational]) -> Result<LayeredConfig> {
    let tol = float_tolerance(delta2);
    let spec = DistanceSpec::new(delta2.to_vec(), Mode::Tolerant(tol))?;
    let config = LayeredConfig::new(layers.iter().map(|l| to_set(l)).collect(), spec)?;
    for i in 0..config.k() {
        let report = certify_separation(
            config.layer(i),
            config.layer(i + 1),
            &delta2[i],
            config.mode(),
        );
        if let Some(deviation) = report.worst {
            return Err(Error::Unstable {
                layer: i + 1,
                next: i + 2,
                deviation,
                eps: tol,
            });
        }
    }
    if !config.layers_disjoint() {
        return Err(Error::Construction(
            "layers are not pairwise disjoint".into(),
        ));
    }
    Ok(config)
}

/// Spatial configuration for even `k` in which every tuple of the product
/// is a chain: `n^(k/2+1)` chains exactly.
///
/// Singletons sit on the x axis at the even positions, the two end layers
/// are caps of the spheres around the outer singletons, and each interior
/// odd layer samples the circle where neighboring spheres meet.
pub fn gen_3d_even(k: usize, delta2: &[Rational], n: usize) -> Result<LayeredConfig> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::Construction(format!(
            "k = {k} must be even and at least 2"
        )));
    }
    if delta2.len() != k {
        return Err(Error::InvalidConfig(format!(
            "{} squared distances for k = {k}",
            delta2.len()
        )));
    }
    if n == 0 {
        return Err(Error::Construction("n must be at least 1".into()));
    }
    DistanceSpec::exact(delta2.to_vec())?;
    certified(even_layers(k, delta2, n)?, delta2)
}

/// Points on the unit sphere about the origin together with free points.
#[derive(Clone, Debug)]
pub struct SpherePair {
    pub sphere: Vec<[f64; 3]>,
    pub free: Vec<[f64; 3]>,
}

/// Source of a point set on the unit sphere with many unit distances to a
/// second set.
pub trait SphereSupplier {
    fn supply(&self, n: usize) -> Result<SpherePair>;
}

/// `floor(sqrt n)` centers on a cap of the unit sphere, each contributing
/// `floor(n / a)` points of the circle where its unit sphere meets the unit
/// sphere about the origin.
#[derive(Clone, Copy, Debug)]
pub struct CircleBouquet {
    pub phase: f64,
}

impl Default for CircleBouquet {
    fn default() -> Self {
        CircleBouquet { phase: 0.3 }
    }
}

impl SphereSupplier for CircleBouquet {
    fn supply(&self, n: usize) -> Result<SpherePair> {
        let a = ((n as f64).sqrt().floor() as usize).max(1);
        let per = (n / a).max(1);
        let centers = sphere_cap(
            [0.0; 3],
            1.0,
            [1.0, 0.0, 0.0],
            std::f64::consts::FRAC_PI_4,
            a,
        );
        let mut sphere = Vec::with_capacity(a * per);
        for (j, c) in centers.iter().enumerate() {
            match sphere_sphere_intersection_circle(&[0.0; 3], 1.0, c, 1.0)? {
                SphereIntersection::Circle(circle) => {
                    sphere.extend(sample_circle_3d(&circle, per, self.phase + 0.37 * j as f64))
                }
                _ => return Err(Error::Construction("unit spheres failed to meet".into())),
            }
        }
        Ok(SpherePair {
            sphere,
            free: centers,
        })
    }
}

/// Output of [`gen_3d_odd_sphere`].
#[derive(Clone, Debug)]
pub struct OddSphere {
    pub config: LayeredConfig,
    /// Unit incidences between the last two layers.
    pub incidences: u64,
    /// `n^((k-1)/2) * incidences`.
    pub floor: BigUint,
}

/// Spatial configuration for odd `k`: the even construction for `k - 1`
/// with unit distances, then a supplied set on the unit sphere around the
/// last singleton and its free partner set.
pub fn gen_3d_odd_sphere(k: usize, n: usize, supplier: &dyn SphereSupplier) -> Result<OddSphere> {
    if k < 3 || k % 2 == 0 {
        return Err(Error::Construction(format!(
            "k = {k} must be odd and at least 3"
        )));
    }
    if n == 0 {
        return Err(Error::Construction("n must be at least 1".into()));
    }
    let delta2 = vec![int(1); k];
    let mut layers = even_layers(k - 1, &delta2[..k - 1], n)?;
    layers.pop();
    let center = layers.last().unwrap()[0];
    let pair = supplier.supply(n)?;
    let tol = float_tolerance(&delta2);
    for p in &pair.sphere {
        let r2: f64 = p.iter().map(|x| x * x).sum();
        if (r2 - 1.0).abs() > tol {
            return Err(Error::Construction(format!(
                "supplied point {p:?} is off the unit sphere by {:e}",
                (r2 - 1.0).abs()
            )));
        }
    }
    let shift = |v: &Vec<[f64; 3]>| -> Vec<[f64; 3]> {
        v.iter()
            .map(|p| std::array::from_fn(|j| p[j] + center[j]))
            .collect()
    };
    let x = dedup(shift(&pair.sphere));
    let y = dedup(shift(&pair.free));
    if x.is_empty() || y.is_empty() {
        return Err(Error::Construction("supplier returned an empty set".into()));
    }
    layers.push(x);
    layers.push(y);
    let config = certified(layers, &delta2)?;
    let incidences =
        count_incidences(config.layer(k - 1), config.layer(k), &int(1), config.mode())?;
    let floor = BigUint::from(n).pow(((k - 1) / 2) as u32) * BigUint::from(incidences);
    Ok(OddSphere {
        config,
        incidences,
        floor,
    })
}

fn dedup(v: Vec<[f64; 3]>) -> Vec<[f64; 3]> {
    let mut seen = HashSet::new();
    v.into_iter()
        .filter(|p| seen.insert(p.map(|x| if x == 0.0 { 0 } else { x.to_bits() })))
        .collect()
}

/// Output of [`gen_3d_odd_regular`].
#[derive(Clone, Debug)]
pub struct OddRegular {
    pub config: LayeredConfig,
    pub peeled: PeeledCore,
    /// `|P| (minDeg - k)^k`, or `None` when `minDeg <= k`.
    pub floor: Option<BigUint>,
}

/// The peeled core of a cubic grid at its popular distance, repeated as all
/// `k + 1` layers.
pub fn gen_3d_odd_regular(k: usize, n: usize) -> Result<OddRegular> {
    if k < 3 || k % 2 == 0 {
        return Err(Error::Construction(format!(
            "k = {k} must be odd and at least 3"
        )));
    }
    let grid = gen_cube_grid(n)?;
    let peeled = peel_min_degree(&grid.points, &grid.popular_d2, Mode::Exact)?;
    let spec = DistanceSpec::exact(vec![grid.popular_d2.clone(); k])?;
    let config = LayeredConfig::repeated(peeled.core.clone(), spec)?;
    let floor = (peeled.min_degree > k).then(|| {
        BigUint::from(peeled.core.len()) * BigUint::from(peeled.min_degree - k).pow(k as u32)
    });
    Ok(OddRegular {
        config,
        peeled,
        floor,
    })
}
