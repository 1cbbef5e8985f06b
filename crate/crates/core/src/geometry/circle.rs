use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive};

use super::{format_rational, Point, PointSet, Rational, ScalarKind};
use crate::error::{Error, Result};

/// Largest `n = p*q` searched when looking for a rational point on a circle.
const SEED_SEARCH_LIMIT: u64 = 1 << 40;

/// Finds a rational point `(a, b)` with `a^2 + b^2 = r2`, preferring the
/// largest `a`. Returns [`Error::NoRationalPoint`] when `r2` is not a sum of
/// two rational squares (or the search bound is exceeded).
pub fn rational_circle_seed(r2: &Rational) -> Result<(Rational, Rational)> {
    if !r2.is_positive() {
        return Err(Error::InvalidDistance(format_rational(r2)));
    }
    let no_point = || Error::NoRationalPoint(format_rational(r2));
    // a^2 + b^2 = p/q  <=>  (aq)^2 + (bq)^2 = pq
    let target: BigInt = r2.numer() * r2.denom();
    let target = target
        .to_u64()
        .filter(|&t| t <= SEED_SEARCH_LIMIT)
        .ok_or_else(no_point)?;
    let q = r2.denom().clone();
    let mut x = target.sqrt();
    loop {
        let rest = target - x * x;
        let y = rest.sqrt();
        if y * y == rest {
            return Ok((
                Rational::new(BigInt::from(x), q.clone()),
                Rational::new(BigInt::from(y), q),
            ));
        }
        if x == 0 || x * x * 2 < target {
            return Err(no_point());
        }
        x -= 1;
    }
}

/// `m` rational points at exact squared distance `r2` from a planar `center`.
///
/// Point `i` is the seed rotated by the angle whose half-angle tangent is
/// `t_i = t_lo + (t_hi - t_lo) * i / m`. A short `t` range gives a short arc.
pub fn rational_circle_points(
    center: &Point,
    r2: &Rational,
    m: usize,
    t_range: (&Rational, &Rational),
    seed: Option<(Rational, Rational)>,
) -> Result<PointSet> {
    if center.dim() != 2 {
        return Err(Error::DimensionMismatch(2, center.dim()));
    }
    let c = center
        .exact_coords()
        .ok_or(Error::MixedScalarKinds)?
        .to_vec();
    let (lo, hi) = t_range;
    if m == 0 || hi < lo || (hi == lo && m > 1) {
        return Err(Error::EmptyRange(format!(
            "{m} distinct parameters in [{}, {}]",
            format_rational(lo),
            format_rational(hi)
        )));
    }
    let (a, b) = match seed {
        Some((a, b)) => {
            if &(&a * &a + &b * &b) != r2 {
                return Err(Error::NoRationalPoint(format!(
                    "seed is not on the circle of squared radius {}",
                    format_rational(r2)
                )));
            }
            (a, b)
        }
        None => rational_circle_seed(r2)?,
    };
    let one = Rational::one();
    let two = &one + &one;
    let step = (hi - lo) / Rational::from_integer(BigInt::from(m));
    let mut points = Vec::with_capacity(m);
    for i in 0..m {
        let t = lo + &step * Rational::from_integer(BigInt::from(i));
        let t2 = &t * &t;
        let den = &one + &t2;
        let cos = (&one - &t2) / &den;
        let sin = (&two * &t) / &den;
        let x = &c[0] + &a * &cos - &b * &sin;
        let y = &c[1] + &a * &sin + &b * &cos;
        points.push(Point::exact(i, vec![x, y]));
    }
    PointSet::new(2, ScalarKind::Exact, points)
}

/// Real intersection points of two planar circles, to float precision.
///
/// With two points, the first lies to the left of the direction `c1 -> c2`.
pub fn circle_circle_intersection(
    c1: &[f64],
    r1sq: f64,
    c2: &[f64],
    r2sq: f64,
) -> Result<Vec<[f64; 2]>> {
    if c1.len() != 2 || c2.len() != 2 {
        return Err(Error::DimensionMismatch(2, c1.len().max(c2.len())));
    }
    let (dx, dy) = (c2[0] - c1[0], c2[1] - c1[1]);
    let d2 = dx * dx + dy * dy;
    if d2 == 0.0 {
        return Err(Error::Concentric);
    }
    let d = d2.sqrt();
    let a = (r1sq - r2sq + d2) / (2.0 * d);
    let h2 = r1sq - a * a;
    let tol = 1e-12 * r1sq.max(r2sq).max(d2);
    let (ux, uy) = (dx / d, dy / d);
    let base = [c1[0] + a * ux, c1[1] + a * uy];
    if h2 < -tol {
        Ok(Vec::new())
    } else if h2 <= tol {
        Ok(vec![base])
    } else {
        let h = h2.sqrt();
        Ok(vec![
            [base[0] - h * uy, base[1] + h * ux],
            [base[0] + h * uy, base[1] - h * ux],
        ])
    }
}

/// A circle in space: center, unit normal and squared radius.
#[derive(Clone, Debug, PartialEq)]
pub struct Circle3 {
    pub center: [f64; 3],
    pub axis: [f64; 3],
    pub rho2: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SphereIntersection {
    Circle(Circle3),
    Tangent([f64; 3]),
    Empty,
}

/// Intersection of two spheres in space.
pub fn sphere_sphere_intersection_circle(
    c1: &[f64],
    r1sq: f64,
    c2: &[f64],
    r2sq: f64,
) -> Result<SphereIntersection> {
    if c1.len() != 3 || c2.len() != 3 {
        return Err(Error::DimensionMismatch(3, c1.len().max(c2.len())));
    }
    let diff = [c2[0] - c1[0], c2[1] - c1[1], c2[2] - c1[2]];
    let d2: f64 = diff.iter().map(|x| x * x).sum();
    if d2 == 0.0 {
        return Err(Error::Concentric);
    }
    let d = d2.sqrt();
    let axis = [diff[0] / d, diff[1] / d, diff[2] / d];
    let a = (r1sq - r2sq + d2) / (2.0 * d);
    let rho2 = r1sq - a * a;
    let center = [
        c1[0] + a * axis[0],
        c1[1] + a * axis[1],
        c1[2] + a * axis[2],
    ];
    let tol = 1e-12 * r1sq.max(r2sq).max(d2);
    Ok(if rho2 < -tol {
        SphereIntersection::Empty
    } else if rho2 <= tol {
        SphereIntersection::Tangent(center)
    } else {
        SphereIntersection::Circle(Circle3 { center, axis, rho2 })
    })
}

/// Orthonormal pair spanning the plane perpendicular to a unit `axis`.
pub(crate) fn perpendicular_basis(axis: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    // cross with the coordinate axis least aligned with `axis`
    let k = (0..3)
        .min_by(|&i, &j| axis[i].abs().total_cmp(&axis[j].abs()))
        .unwrap();
    let mut e = [0.0; 3];
    e[k] = 1.0;
    let u = normalize(cross(axis, &e));
    let v = cross(axis, &u);
    (u, v)
}

pub(crate) fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// `m` evenly spaced points on a circle in space, starting at angle `phase`.
pub fn sample_circle_3d(circle: &Circle3, m: usize, phase: f64) -> Vec<[f64; 3]> {
    let (u, v) = perpendicular_basis(&circle.axis);
    let rho = circle.rho2.sqrt();
    (0..m)
        .map(|i| {
            let th = phase + std::f64::consts::TAU * i as f64 / m as f64;
            let (s, c) = th.sin_cos();
            std::array::from_fn(|j| circle.center[j] + rho * (c * u[j] + s * v[j]))
        })
        .collect()
}
