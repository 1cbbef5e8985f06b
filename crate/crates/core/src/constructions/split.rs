use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{
    format_rational, int, rational_sqrt_upper, Point, PointSet, Rational, Scalar,
};
use crate::geometry::{Mode, ScalarKind};
use crate::layered::{neighbor_lists, Strategy};

/// Grid offsets tried before giving up on finding a good cut.
const MAX_TRIALS: usize = 4096;
const MIN_TRIALS: usize = 64;

/// A bipartite pair after cutting, stacking and zooming.
#[derive(Clone, Debug)]
pub struct SplitPair {
    pub x1: PointSet,
    /// The zoomed side: diameter at most `eps * delta`.
    pub x2: PointSet,
    /// Ordered incidences between the input sets.
    pub original: u64,
    /// Incidences left uncut by the chosen grid.
    pub uncut: u64,
    /// Incidences between the returned sets.
    pub preserved: u64,
    /// Number of small squares, `ceil(22 / eps)^2`.
    pub squares: u64,
    pub eps: Rational,
}

impl SplitPair {
    /// The guaranteed floor `original / (2 squares)`.
    pub fn floor(&self) -> Rational {
        Rational::new(BigInt::from(self.original), BigInt::from(2 * self.squares))
    }

    pub fn meets_floor(&self) -> bool {
        self.preserved as u128 * 2 * self.squares as u128 >= self.original as u128
    }
}

/// Cuts the plane by a coarse grid whose offset keeps at least half of the
/// `d2`-incidences between `x1` and `x2`, stacks every grid square onto one,
/// and keeps the `x2` points of the best small square of side
/// `eps * L / 2` (with `delta <= L <= sqrt(2) delta`). All of `x1` is kept.
pub fn split_and_translate(
    x1: &PointSet,
    x2: &PointSet,
    d2: &Rational,
    eps: &Rational,
    seed: u64,
) -> Result<SplitPair> {
    for s in [x1, x2] {
        if s.dim() != 2 {
            return Err(Error::DimensionMismatch(2, s.dim()));
        }
        if s.kind() != ScalarKind::Exact {
            return Err(Error::MixedScalarKinds);
        }
    }
    if !eps.is_positive() || eps > &Rational::one() {
        return Err(Error::InvalidTolerance(format!(
            "split eps {} must lie in (0, 1]",
            format_rational(eps)
        )));
    }
    let (lists, _) = neighbor_lists(x1, x2, d2, Mode::Exact, Strategy::Grid)?;
    let edges: Vec<(usize, usize)> = lists
        .iter()
        .enumerate()
        .flat_map(|(i, l)| l.iter().map(move |&j| (i, j as usize)))
        .collect();
    let original = edges.len() as u64;
    if original == 0 {
        return Err(Error::NoEdges);
    }

    let l = rational_sqrt_upper(d2);
    let spacing = &l * int(10);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = Rational::from_integer(BigInt::one() << 32);
    let mut best: Option<(u64, Vec<Rational>, Vec<[i64; 2]>, Vec<[i64; 2]>)> = None;
    let mut accepted = 0;
    for _ in 0..MAX_TRIALS {
        let eta: Vec<Rational> = (0..2)
            .map(|_| &spacing * Rational::from_integer(BigInt::from(rng.gen::<u32>())) / &scale)
            .collect();
        let (Some(c1), Some(c2)) = (cells(x1, &eta, &spacing), cells(x2, &eta, &spacing)) else {
            continue;
        };
        accepted += 1;
        let cut = edges.iter().filter(|&&(i, j)| c1[i] != c2[j]).count() as u64;
        if best.as_ref().is_none_or(|b| cut < b.0) {
            best = Some((cut, eta, c1, c2));
        }
        let (cut, ..) = best.as_ref().unwrap();
        if accepted >= MIN_TRIALS && 2 * (original - cut) >= original {
            break;
        }
    }
    let Some((cut, eta, c1, c2)) = best else {
        return Err(Error::Construction("every grid offset hit a vertex".into()));
    };
    let uncut = original - cut;
    if 2 * uncut < original {
        return Err(Error::Construction(format!(
            "best grid offset keeps only {uncut} of {original} incidences"
        )));
    }

    // per-cell shifts in [0, L/2)^2, redrawn until no two points collide
    let offset_scale = Rational::from_integer(BigInt::one() << 33);
    let all_cells: HashSet<[i64; 2]> = c1.iter().chain(&c2).copied().collect();
    let mut all_cells: Vec<[i64; 2]> = all_cells.into_iter().collect();
    all_cells.sort_unstable();
    let (t1, t2) = (0..100)
        .find_map(|_| {
            let shift: BTreeMap<[i64; 2], [Rational; 2]> = all_cells
                .iter()
                .map(|&c| {
                    let o = [(); 2].map(|_| {
                        &l * Rational::from_integer(BigInt::from(rng.gen::<u32>())) / &offset_scale
                    });
                    (c, o)
                })
                .collect();
            let t1 = translate(x1, &c1, &eta, &spacing, &shift);
            let t2 = translate(x2, &c2, &eta, &spacing, &shift);
            (t1.is_distinct() && t2.is_distinct()).then_some((t1, t2))
        })
        .ok_or_else(|| {
            Error::Construction("could not stack grid squares without collisions".into())
        })?;

    let side = eps * &l / int(2);
    let per_side = (int(22) / eps).ceil().to_integer();
    let squares = (&per_side * &per_side)
        .to_u64()
        .ok_or_else(|| Error::Construction("too many small squares".into()))?;
    let (back, _) = neighbor_lists(&t2, &t1, d2, Mode::Exact, Strategy::Grid)?;
    let mut weight: BTreeMap<(BigInt, BigInt), (u64, Vec<usize>)> = BTreeMap::new();
    for (j, p) in t2.iter().enumerate() {
        let c = p.exact_coords().unwrap();
        let key = (
            (&c[0] / &side).floor().to_integer(),
            (&c[1] / &side).floor().to_integer(),
        );
        let entry = weight.entry(key).or_default();
        entry.0 += back[j].len() as u64;
        entry.1.push(j);
    }
    let (preserved, keep) =
        weight
            .into_values()
            .fold((0, Vec::new()), |acc, w| if w.0 > acc.0 { w } else { acc });
    let x2_out = t2.subset(&keep);
    if let Scalar::Exact(diam2) = x2_out.diameter2() {
        if diam2 > eps * eps * d2 {
            return Err(Error::Construction(
                "zoomed side exceeds the diameter bound".into(),
            ));
        }
    }
    Ok(SplitPair {
        x1: t1,
        x2: x2_out,
        original,
        uncut,
        preserved,
        squares,
        eps: eps.clone(),
    })
}

/// Grid cell of every point, or `None` when some coordinate lies on a line.
fn cells(set: &PointSet, eta: &[Rational], spacing: &Rational) -> Option<Vec<[i64; 2]>> {
    set.iter()
        .map(|p| {
            let c = p.exact_coords().unwrap();
            let mut out = [0i64; 2];
            for a in 0..2 {
                let u = (&c[a] - &eta[a]) / spacing;
                if u.is_integer() {
                    return None;
                }
                out[a] = u.numer().div_floor(u.denom()).to_i64()?;
            }
            Some(out)
        })
        .collect()
}

fn translate(
    set: &PointSet,
    cells: &[[i64; 2]],
    eta: &[Rational],
    spacing: &Rational,
    shift: &BTreeMap<[i64; 2], [Rational; 2]>,
) -> PointSet {
    let points = set
        .iter()
        .zip(cells)
        .map(|(p, cell)| {
            let c = p.exact_coords().unwrap();
            let o = &shift[cell];
            let coords = (0..2)
                .map(|a| &c[a] - &eta[a] - spacing * int(cell[a]) + &o[a])
                .collect();
            Point::exact(p.id, coords)
        })
        .collect();
    PointSet::new(2, ScalarKind::Exact, points).expect("same shape as the input")
}
