use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use num_traits::Zero;

use super::{to_f64, Mode, Rational, Scalar, GUARD_BAND};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarKind {
    Exact,
    Float,
}

impl std::fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ScalarKind::Exact => "exact",
            ScalarKind::Float => "float",
        })
    }
}

#[derive(Clone, Debug)]
pub enum Coords {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

/// Hashable identity of a point: its exact coordinates, or the bit patterns
/// of its float coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoordKey {
    Exact(Vec<Rational>),
    Float(Vec<u64>),
}

/// A point with a stable id. Equality and hashing look at coordinates only.
#[derive(Clone, Debug)]
pub struct Point {
    pub id: usize,
    coords: Coords,
    approx: Vec<f64>,
}

impl Point {
    pub fn exact(id: usize, coords: Vec<Rational>) -> Self {
        let approx = coords.iter().map(to_f64).collect();
        Point {
            id,
            coords: Coords::Exact(coords),
            approx,
        }
    }

    pub fn float(id: usize, coords: Vec<f64>) -> Self {
        // -0.0 and 0.0 are the same location
        let coords: Vec<f64> = coords
            .into_iter()
            .map(|x| if x == 0.0 { 0.0 } else { x })
            .collect();
        Point {
            id,
            approx: coords.clone(),
            coords: Coords::Float(coords),
        }
    }

    pub fn dim(&self) -> usize {
        self.approx.len()
    }

    pub fn kind(&self) -> ScalarKind {
        match self.coords {
            Coords::Exact(_) => ScalarKind::Exact,
            Coords::Float(_) => ScalarKind::Float,
        }
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    /// `f64` view of the coordinates (exact for float points, rounded for
    /// rational ones).
    pub fn approx(&self) -> &[f64] {
        &self.approx
    }

    pub fn exact_coords(&self) -> Option<&[Rational]> {
        match &self.coords {
            Coords::Exact(c) => Some(c),
            Coords::Float(_) => None,
        }
    }

    pub fn key(&self) -> CoordKey {
        match &self.coords {
            Coords::Exact(c) => CoordKey::Exact(c.clone()),
            Coords::Float(c) => CoordKey::Float(c.iter().map(|x| x.to_bits()).collect()),
        }
    }

    pub fn to_float(&self) -> Point {
        Point::float(self.id, self.approx.clone())
    }

    pub fn with_id(mut self, id: usize) -> Point {
        self.id = id;
        self
    }

    fn norm2_approx(&self) -> f64 {
        self.approx.iter().map(|x| x * x).sum()
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        match (&self.coords, &other.coords) {
            (Coords::Exact(a), Coords::Exact(b)) => a == b,
            (Coords::Float(a), Coords::Float(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
            }
            _ => false,
        }
    }
}

impl Eq for Point {}

impl Hash for Point {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

/// Squared Euclidean distance, exact for rational points.
pub fn squared_distance(p: &Point, q: &Point) -> Result<Scalar> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    match (&p.coords, &q.coords) {
        (Coords::Exact(a), Coords::Exact(b)) => Ok(Scalar::Exact(exact_d2(a, b))),
        (Coords::Float(a), Coords::Float(b)) => Ok(Scalar::Float(float_d2(a, b))),
        _ => Err(Error::MixedScalarKinds),
    }
}

pub(crate) fn exact_d2(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += &d * &d;
    }
    acc
}

pub(crate) fn float_d2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Whether `p` and `q` realize the squared distance `d2` under `mode`.
pub fn matches_distance(p: &Point, q: &Point, d2: &Rational, mode: Mode) -> Result<bool> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    if mode == Mode::Exact && (p.kind() != ScalarKind::Exact || q.kind() != ScalarKind::Exact) {
        return Err(Error::MixedScalarKinds);
    }
    Ok(DistanceTest::new(d2, mode).test(p, q) == Outcome::Match)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Outcome {
    Match,
    Miss,
    /// Tolerant mode only: the pair is outside `eps` but inside the guard band.
    Band(f64),
}

/// A prepared predicate for one squared distance.
#[derive(Clone, Debug)]
pub(crate) struct DistanceTest {
    d2: Rational,
    d2f: f64,
    mode: Mode,
}

impl DistanceTest {
    pub fn new(d2: &Rational, mode: Mode) -> Self {
        DistanceTest {
            d2: d2.clone(),
            d2f: to_f64(d2),
            mode,
        }
    }

    /// Squared search radius that covers every pair the predicate (or the
    /// guard band) can care about.
    pub fn reach2(&self) -> f64 {
        match self.mode {
            Mode::Exact => self.d2f,
            Mode::Tolerant(eps) => self.d2f + (GUARD_BAND + 1.0) * eps,
        }
    }

    pub fn test(&self, p: &Point, q: &Point) -> Outcome {
        let fd2 = float_d2(p.approx(), q.approx());
        match self.mode {
            Mode::Tolerant(eps) => {
                let dev = (fd2 - self.d2f).abs();
                if dev <= eps {
                    Outcome::Match
                } else if dev <= GUARD_BAND * eps {
                    Outcome::Band(dev)
                } else {
                    Outcome::Miss
                }
            }
            Mode::Exact => {
                // Float filter: rounding error of the f64 view is far below
                // this margin for any finite coordinates.
                let scale = 1.0 + p.norm2_approx() + q.norm2_approx() + self.d2f;
                if (fd2 - self.d2f).abs() > 1e-6 * scale {
                    return Outcome::Miss;
                }
                match (p.exact_coords(), q.exact_coords()) {
                    (Some(a), Some(b)) if exact_d2(a, b) == self.d2 => Outcome::Match,
                    _ => Outcome::Miss,
                }
            }
        }
    }
}

/// A finite set of points sharing dimension and scalar kind.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dim: usize,
    kind: ScalarKind,
    points: Vec<Point>,
}

impl PointSet {
    pub fn empty(dim: usize, kind: ScalarKind) -> Self {
        PointSet {
            dim,
            kind,
            points: Vec::new(),
        }
    }

    pub fn new(dim: usize, kind: ScalarKind, points: Vec<Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig("dimension must be at least 1".into()));
        }
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch(dim, p.dim()));
            }
            if p.kind() != kind {
                return Err(Error::MixedScalarKinds);
            }
        }
        Ok(PointSet { dim, kind, points })
    }

    /// Exact set with ids `0..n`.
    pub fn exact(dim: usize, coords: Vec<Vec<Rational>>) -> Result<Self> {
        let points = coords
            .into_iter()
            .enumerate()
            .map(|(i, c)| Point::exact(i, c))
            .collect();
        Self::new(dim, ScalarKind::Exact, points)
    }

    /// Float set with ids `0..n`.
    pub fn float(dim: usize, coords: Vec<Vec<f64>>) -> Result<Self> {
        let points = coords
            .into_iter()
            .enumerate()
            .map(|(i, c)| Point::float(i, c))
            .collect();
        Self::new(dim, ScalarKind::Float, points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn get(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn push(&mut self, p: Point) -> Result<()> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, p.dim()));
        }
        if p.kind() != self.kind {
            return Err(Error::MixedScalarKinds);
        }
        self.points.push(p);
        Ok(())
    }

    /// Renumbers ids to `0..n` in order.
    pub fn renumbered(mut self) -> Self {
        for (i, p) in self.points.iter_mut().enumerate() {
            p.id = i;
        }
        self
    }

    pub fn to_float(&self) -> PointSet {
        PointSet {
            dim: self.dim,
            kind: ScalarKind::Float,
            points: self.points.iter().map(Point::to_float).collect(),
        }
    }

    /// The points at the given positions, ids preserved.
    pub fn subset(&self, indices: &[usize]) -> PointSet {
        PointSet {
            dim: self.dim,
            kind: self.kind,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    pub fn ids_unique(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.len());
        self.points.iter().all(|p| seen.insert(p.id))
    }

    /// No two points share coordinates.
    pub fn is_distinct(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.len());
        self.points.iter().all(|p| seen.insert(p.key()))
    }

    pub fn is_disjoint_from(&self, other: &PointSet) -> bool {
        let keys: HashSet<CoordKey> = self.points.iter().map(Point::key).collect();
        other.points.iter().all(|p| !keys.contains(&p.key()))
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.iter().any(|q| q == p)
    }

    /// Squared diameter (0 for sets with fewer than two points).
    pub fn diameter2(&self) -> Scalar {
        match self.kind {
            ScalarKind::Exact => {
                let mut best = Rational::zero();
                for (i, p) in self.points.iter().enumerate() {
                    for q in &self.points[i + 1..] {
                        let d = exact_d2(p.exact_coords().unwrap(), q.exact_coords().unwrap());
                        if d > best {
                            best = d;
                        }
                    }
                }
                Scalar::Exact(best)
            }
            ScalarKind::Float => {
                let mut best = 0.0f64;
                for (i, p) in self.points.iter().enumerate() {
                    for q in &self.points[i + 1..] {
                        best = best.max(float_d2(p.approx(), q.approx()));
                    }
                }
                Scalar::Float(best)
            }
        }
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Result of a tolerant-mode separation check.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparationReport {
    pub pairs_in_band: usize,
    /// Largest deviation `|d2 - delta2|` found inside `(eps, 100 eps]`.
    pub worst: Option<f64>,
}

impl SeparationReport {
    pub fn is_stable(&self) -> bool {
        self.pairs_in_band == 0
    }
}

/// Flags any pair of `a x b` whose squared distance misses `d2` by more than
/// `eps` but no more than `100 eps`. Such a set could change its count under
/// a different evaluation order. Exact mode is always stable.
pub fn certify_separation(
    a: &PointSet,
    b: &PointSet,
    d2: &Rational,
    mode: Mode,
) -> SeparationReport {
    let mut report = SeparationReport {
        pairs_in_band: 0,
        worst: None,
    };
    if mode == Mode::Exact {
        return report;
    }
    let test = DistanceTest::new(d2, mode);
    for p in a {
        for q in b {
            if let Outcome::Band(dev) = test.test(p, q) {
                report.pairs_in_band += 1;
                report.worst = Some(report.worst.map_or(dev, |w: f64| w.max(dev)));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{int, ratio};

    fn ep(c: &[(i64, i64)]) -> Point {
        Point::exact(0, c.iter().map(|&(p, q)| ratio(p, q)).collect())
    }

    #[test]
    fn squared_distance_examples() {
        let o = ep(&[(0, 1), (0, 1)]);
        assert_eq!(squared_distance(&o, &o).unwrap(), Scalar::Exact(int(0)));
        let p = ep(&[(3, 5), (4, 5)]);
        assert_eq!(squared_distance(&o, &p).unwrap(), Scalar::Exact(int(1)));
        let a = ep(&[(1, 2), (1, 2), (0, 1), (0, 1)]);
        let b = ep(&[(0, 1), (0, 1), (1, 2), (1, 2)]);
        assert_eq!(squared_distance(&a, &b).unwrap(), Scalar::Exact(int(1)));
        assert!(matches!(
            squared_distance(&o, &a),
            Err(Error::DimensionMismatch(2, 4))
        ));
    }

    #[test]
    fn matches_distance_examples() {
        let o = ep(&[(0, 1), (0, 1)]);
        assert!(matches_distance(&o, &ep(&[(3, 5), (4, 5)]), &int(1), Mode::Exact).unwrap());
        assert!(!matches_distance(&o, &ep(&[(1, 1), (1, 1)]), &int(1), Mode::Exact).unwrap());
        let fo = Point::float(0, vec![0.0, 0.0]);
        let fp = Point::float(1, vec![0.6, 0.8]);
        // |0.36 + 0.64 - 1| evaluated in f64
        let dev = (0.6f64 * 0.6 + 0.8 * 0.8 - 1.0).abs();
        assert!(dev <= 1e-9);
        assert!(matches_distance(&fo, &fp, &int(1), Mode::Tolerant(1e-9)).unwrap());
        assert!(matches!(
            matches_distance(&fo, &fp, &int(1), Mode::Exact),
            Err(Error::MixedScalarKinds)
        ));
    }

    #[test]
    fn identity_is_coordinate_equality() {
        let a = Point::exact(1, vec![ratio(1, 2), int(0)]);
        let b = Point::exact(7, vec![ratio(2, 4), int(0)]);
        assert_eq!(a, b);
        let f = Point::float(0, vec![-0.0, 1.0]);
        let g = Point::float(1, vec![0.0, 1.0]);
        assert_eq!(f, g);
        let h = Point::float(1, vec![1e-300, 1.0]);
        assert_ne!(f, h);
    }

    #[test]
    fn band_detection() {
        let a = PointSet::float(1, vec![vec![0.0]]).unwrap();
        let b = PointSet::float(1, vec![vec![1.0 + 2e-9], vec![1.0 + 1e-12], vec![1.5]]).unwrap();
        let rep = certify_separation(&a, &b, &int(1), Mode::Tolerant(1e-9));
        assert_eq!(rep.pairs_in_band, 1);
        assert!(!rep.is_stable());
        let rep = certify_separation(&a, &b, &int(1), Mode::Exact);
        assert!(rep.is_stable());
    }

    #[test]
    fn set_validation() {
        let p = Point::exact(0, vec![int(0), int(0)]);
        let q = Point::float(1, vec![0.0, 0.0]);
        assert!(matches!(
            PointSet::new(2, ScalarKind::Exact, vec![p, q]),
            Err(Error::MixedScalarKinds)
        ));
        let s = PointSet::exact(2, vec![vec![int(0), int(0)], vec![int(3), int(4)]]).unwrap();
        assert_eq!(s.diameter2(), Scalar::Exact(int(25)));
        assert!(s.is_distinct() && s.ids_unique());
    }
}
