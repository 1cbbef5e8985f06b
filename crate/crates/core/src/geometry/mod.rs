//! Exact and tolerant distance predicates and primitive point generators.
//!
//! Every distance is handled in squared form. Exact point sets carry
//! arbitrary-precision rational coordinates, so comparing a squared distance
//! against a rational `delta2` never involves a radical. Tolerant point sets
//! carry `f64` coordinates and accept a squared distance within `eps` of the
//! target.

pub(crate) mod circle;
pub(crate) mod point;

pub use circle::{
    circle_circle_intersection, rational_circle_points, rational_circle_seed, sample_circle_3d,
    sphere_sphere_intersection_circle, Circle3, SphereIntersection,
};
pub use point::{
    certify_separation, matches_distance, squared_distance, CoordKey, Coords, Point, PointSet,
    ScalarKind, SeparationReport,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Default tolerance for float configurations.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Width of the separation guard band, as a multiple of `eps`.
pub const GUARD_BAND: f64 = 100.0;

/// A squared distance or coordinate, in whichever kind the point set uses.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => to_f64(r),
            Scalar::Float(x) => *x,
        }
    }
}

/// How distances are compared.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    Exact,
    Tolerant(f64),
}

impl Mode {
    pub fn tolerant() -> Self {
        Mode::Tolerant(DEFAULT_EPS)
    }

    pub fn kind(&self) -> ScalarKind {
        match self {
            Mode::Exact => ScalarKind::Exact,
            Mode::Tolerant(_) => ScalarKind::Float,
        }
    }

    pub fn eps(&self) -> Option<f64> {
        match self {
            Mode::Exact => None,
            Mode::Tolerant(e) => Some(*e),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Tolerant(e) => write!(f, "tol:{e:e}"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    /// Accepts `exact`, `tol`, `tol:<eps>` and `tol <eps>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "exact" {
            return Ok(Mode::Exact);
        }
        let rest = s
            .strip_prefix("tol")
            .ok_or_else(|| Error::InvalidTolerance(format!("unknown mode `{s}`")))?
            .trim_start_matches([':', ' ']);
        if rest.is_empty() {
            return Ok(Mode::tolerant());
        }
        let eps: f64 = rest
            .parse()
            .map_err(|_| Error::InvalidTolerance(format!("bad tolerance `{rest}`")))?;
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidTolerance(format!("{eps} is not positive")));
        }
        Ok(Mode::Tolerant(eps))
    }
}

/// The squared distance vector together with the comparison mode.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceSpec {
    pub delta2: Vec<Rational>,
    pub mode: Mode,
}

impl DistanceSpec {
    pub fn new(delta2: Vec<Rational>, mode: Mode) -> Result<Self> {
        let spec = DistanceSpec { delta2, mode };
        spec.validate()?;
        Ok(spec)
    }

    pub fn exact(delta2: Vec<Rational>) -> Result<Self> {
        Self::new(delta2, Mode::Exact)
    }

    pub fn k(&self) -> usize {
        self.delta2.len()
    }

    pub fn validate(&self) -> Result<()> {
        for d in &self.delta2 {
            if !d.is_positive() {
                return Err(Error::InvalidDistance(format!(
                    "squared distance {} is not positive",
                    format_rational(d)
                )));
            }
        }
        if let Mode::Tolerant(eps) = self.mode {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::InvalidTolerance(format!("{eps} is not positive")));
            }
            if let Some(min) = self.delta2.iter().map(to_f64).reduce(f64::min) {
                if eps >= min / GUARD_BAND {
                    return Err(Error::InvalidTolerance(format!(
                        "eps {eps:e} must be below min(delta2)/100 = {:e}",
                        min / GUARD_BAND
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn reversed(&self) -> Self {
        DistanceSpec {
            delta2: self.delta2.iter().rev().cloned().collect(),
            mode: self.mode,
        }
    }
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a / b)
}

/// Largest rational of the form `m / 2^bits` not exceeding `x`.
pub fn rational_below(x: f64, bits: u32) -> Rational {
    let scale = (1u64 << bits) as f64;
    let m = (x * scale).floor();
    Rational::new(BigInt::from(m as i64), BigInt::from(1u64 << bits))
}

/// Exact floor of a rational.
pub fn floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Exact square root when `r` is the square of a rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// A rational `L` with `L^2 >= r` and `L^2 <= 2 r`, for positive `r`.
pub fn rational_sqrt_upper(r: &Rational) -> Rational {
    if let Some(s) = rational_sqrt(r) {
        return s;
    }
    let mut bits = 10;
    loop {
        let approx = to_f64(r).sqrt();
        let scale = BigInt::one() << bits;
        let m = BigInt::from((approx * (1u64 << bits) as f64).ceil() as i64) + 1;
        let cand = Rational::new(m, scale);
        let sq = &cand * &cand;
        if &sq >= r && sq <= r * int(2) {
            return cand;
        }
        bits += 8;
        if bits > 60 {
            // Fall back to a coarse but valid bound.
            let m = floor(&(r + int(1))) + 1;
            return Rational::from_integer(m);
        }
    }
}

/// Parses `p/q`, an integer, or a decimal literal (with optional exponent)
/// into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidConfig(format!("malformed rational `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: BigInt = format!("{whole}{frac}0").parse().map_err(|_| bad())?;
    let all = all / 10;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if shift >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, shift as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-shift) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Canonical text form: `p/q`, or `p` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
