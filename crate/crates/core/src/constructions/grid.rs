use std::collections::BTreeMap;

use num_integer::Roots;

use crate::error::{Error, Result};
use crate::geometry::point::exact_d2;
use crate::geometry::{int, Mode, PointSet, Rational};
use crate::layered::neighbor_lists;
use crate::layered::Strategy;

/// Integer grid points with their most frequent squared distance.
#[derive(Clone, Debug)]
pub struct RichGrid {
    pub points: PointSet,
    pub popular_d2: Rational,
    /// Unordered pairs at `popular_d2`.
    pub pairs: u64,
}

/// The `s x s` planar grid (`s = ceil(sqrt(m))`) truncated to its first `m`
/// points in row-major order.
pub fn gen_unit_rich_grid(m: usize) -> Result<RichGrid> {
    if m < 4 {
        return Err(Error::Construction(format!(
            "grid needs at least 4 points, got {m}"
        )));
    }
    let s = ceil_root(m, 2);
    let coords = (0..m)
        .map(|i| vec![int((i / s) as i64), int((i % s) as i64)])
        .collect();
    with_popular(PointSet::exact(2, coords)?)
}

/// The cubic grid of side `ceil(cbrt(m))` truncated to `m` points.
pub fn gen_cube_grid(m: usize) -> Result<RichGrid> {
    if m < 2 {
        return Err(Error::Construction(format!(
            "grid needs at least 2 points, got {m}"
        )));
    }
    let s = ceil_root(m, 3);
    let coords = (0..m)
        .map(|i| {
            vec![
                int((i / (s * s)) as i64),
                int((i / s % s) as i64),
                int((i % s) as i64),
            ]
        })
        .collect();
    with_popular(PointSet::exact(3, coords)?)
}

fn ceil_root(m: usize, k: u32) -> usize {
    let r = m.nth_root(k);
    if r.pow(k) < m {
        r + 1
    } else {
        r
    }
}

fn with_popular(points: PointSet) -> Result<RichGrid> {
    let (popular_d2, pairs) = popular_distance(&points)?;
    Ok(RichGrid {
        points,
        popular_d2,
        pairs,
    })
}

/// Most frequent squared distance among unordered pairs of an exact set,
/// ties broken toward the smaller value.
pub fn popular_distance(set: &PointSet) -> Result<(Rational, u64)> {
    let mut hist: BTreeMap<Rational, u64> = BTreeMap::new();
    let pts = set.points();
    for (i, p) in pts.iter().enumerate() {
        let a = p.exact_coords().ok_or(Error::MixedScalarKinds)?;
        for q in &pts[i + 1..] {
            let b = q.exact_coords().ok_or(Error::MixedScalarKinds)?;
            *hist.entry(exact_d2(a, b)).or_default() += 1;
        }
    }
    let mut best: Option<(&Rational, u64)> = None;
    for (d, &c) in &hist {
        if d > &Rational::default() && best.is_none_or(|(_, bc)| c > bc) {
            best = Some((d, c));
        }
    }
    best.map(|(d, c)| (d.clone(), c)).ok_or(Error::NoEdges)
}

/// Outcome of [`peel_min_degree`].
#[derive(Clone, Debug)]
pub struct PeeledCore {
    pub core: PointSet,
    /// Edge count of the input distance graph.
    pub initial_edges: u64,
    pub original_size: usize,
    pub min_degree: usize,
}

impl PeeledCore {
    /// Whether `min_degree >= initial_edges / (2 original_size)`.
    pub fn meets_threshold(&self) -> bool {
        self.min_degree as u128 * 2 * self.original_size as u128 >= self.initial_edges as u128
    }
}

/// Repeatedly deletes points whose degree in the `d2`-distance graph falls
/// below `E0 / (2N)`, with `E0` and `N` taken from the input.
pub fn peel_min_degree(set: &PointSet, d2: &Rational, mode: Mode) -> Result<PeeledCore> {
    let (lists, _) = neighbor_lists(set, set, d2, mode, Strategy::Grid)?;
    let n = set.len();
    let mut degree: Vec<usize> = lists.iter().map(Vec::len).collect();
    let e0 = degree.iter().sum::<usize>() as u64 / 2;
    if e0 == 0 {
        return Err(Error::NoEdges);
    }
    let below = |d: usize| (d as u128) * 2 * (n as u128) < e0 as u128;
    let mut alive = vec![true; n];
    let mut stack: Vec<usize> = (0..n).filter(|&i| below(degree[i])).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &w in &lists[v] {
            let w = w as usize;
            if alive[w] {
                degree[w] -= 1;
                if below(degree[w]) {
                    stack.push(w);
                }
            }
        }
    }
    let keep: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    let min_degree = keep.iter().map(|&i| degree[i]).min().unwrap_or(0);
    Ok(PeeledCore {
        core: set.subset(&keep),
        initial_edges: e0,
        original_size: n,
        min_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ratio;

    #[test]
    fn small_grids() {
        let g = gen_unit_rich_grid(4).unwrap();
        assert_eq!((g.popular_d2.clone(), g.pairs), (int(1), 4));
        let g = gen_unit_rich_grid(9).unwrap();
        assert_eq!((g.popular_d2.clone(), g.pairs), (int(1), 12));
        let g = gen_unit_rich_grid(7).unwrap();
        assert_eq!(g.points.len(), 7);
        assert!(g.pairs >= 6);
        assert!(gen_unit_rich_grid(3).is_err());
    }

    #[test]
    fn peel_examples() {
        // equilateral triangle needs irrational coordinates; use a star instead
        let star = PointSet::exact(
            2,
            vec![
                vec![int(0), int(0)],
                vec![int(1), int(0)],
                vec![int(-1), int(0)],
                vec![int(0), int(1)],
                vec![int(0), int(-1)],
                vec![ratio(3, 5), ratio(4, 5)],
            ],
        )
        .unwrap();
        let p = peel_min_degree(&star, &int(1), Mode::Exact).unwrap();
        assert_eq!(p.core.len(), 6);
        assert_eq!(p.initial_edges, 5);
        assert!(p.meets_threshold());

        let g = gen_unit_rich_grid(400).unwrap();
        let p = peel_min_degree(&g.points, &g.popular_d2, Mode::Exact).unwrap();
        assert!(!p.core.is_empty() && p.meets_threshold());

        let lonely = PointSet::exact(2, vec![vec![int(0), int(0)], vec![int(5), int(0)]]).unwrap();
        assert!(matches!(
            peel_min_degree(&lonely, &int(1), Mode::Exact),
            Err(Error::NoEdges)
        ));
    }
}
