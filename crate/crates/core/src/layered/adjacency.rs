use std::collections::HashMap;

use super::LayeredConfig;
use crate::error::{Error, Result};
use crate::geometry::point::{DistanceTest, Outcome};
use crate::geometry::{Mode, PointSet, Rational};

/// Grid hashing is skipped above this dimension (3^d cells per query).
const MAX_GRID_DIM: usize = 6;

/// How candidate pairs are enumerated. Both produce identical adjacency.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Every pair of `P_i x P_{i+1}`.
    Brute,
    /// Uniform grid with cell side just above the search radius; each query
    /// scans its 3^d neighboring cells.
    #[default]
    Grid,
}

/// For each consecutive layer pair, the sorted neighbor list of every point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteAdjacency {
    pub lists: Vec<Vec<Vec<u32>>>,
    /// Layer sizes `|P_1|, ..., |P_{k+1}|`.
    pub sizes: Vec<usize>,
}

impl BipartiteAdjacency {
    pub fn k(&self) -> usize {
        self.lists.len()
    }

    /// Total number of adjacent pairs between layers `i` and `i + 1`.
    pub fn edge_count(&self, i: usize) -> u64 {
        self.lists[i].iter().map(|l| l.len() as u64).sum()
    }

    pub fn total_edges(&self) -> u64 {
        (0..self.k()).map(|i| self.edge_count(i)).sum()
    }
}

/// Neighbor lists from `a` into `b` at squared distance `d2`, plus the
/// largest deviation seen inside the tolerant guard band (if any).
pub fn neighbor_lists(
    a: &PointSet,
    b: &PointSet,
    d2: &Rational,
    mode: Mode,
    strategy: Strategy,
) -> Result<(Vec<Vec<u32>>, Option<f64>)> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let test = DistanceTest::new(d2, mode);
    let mut band: Option<f64> = None;
    let mut note = |o: Outcome| match o {
        Outcome::Match => true,
        Outcome::Miss => false,
        Outcome::Band(dev) => {
            band = Some(band.map_or(dev, |w| w.max(dev)));
            false
        }
    };
    let use_grid = strategy == Strategy::Grid && a.dim() <= MAX_GRID_DIM && !b.is_empty();
    let lists = if use_grid {
        let side = test.reach2().sqrt() * (1.0 + 1e-6);
        let cells = bucket(b, side);
        let offsets = neighborhood(a.dim());
        let mut key = vec![0i64; a.dim()];
        a.iter()
            .map(|p| {
                let home = cell_of(p.approx(), side);
                let mut out = Vec::new();
                for off in &offsets {
                    for (slot, (h, o)) in key.iter_mut().zip(home.iter().zip(off)) {
                        *slot = h.saturating_add(*o);
                    }
                    if let Some(members) = cells.get(key.as_slice()) {
                        for &j in members {
                            if note(test.test(p, b.get(j as usize))) {
                                out.push(j);
                            }
                        }
                    }
                }
                out.sort_unstable();
                out
            })
            .collect()
    } else {
        a.iter()
            .map(|p| {
                b.iter()
                    .enumerate()
                    .filter_map(|(j, q)| note(test.test(p, q)).then_some(j as u32))
                    .collect()
            })
            .collect()
    };
    Ok((lists, band))
}

fn cell_of(x: &[f64], side: f64) -> Vec<i64> {
    x.iter().map(|v| (v / side).floor() as i64).collect()
}

fn bucket(b: &PointSet, side: f64) -> HashMap<Vec<i64>, Vec<u32>> {
    let mut cells: HashMap<Vec<i64>, Vec<u32>> = HashMap::new();
    for (j, q) in b.iter().enumerate() {
        cells
            .entry(cell_of(q.approx(), side))
            .or_default()
            .push(j as u32);
    }
    cells
}

fn neighborhood(dim: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(dim)];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-1..=1).map(move |o| {
                    let mut w = v.clone();
                    w.push(o);
                    w
                })
            })
            .collect();
    }
    out
}

/// Materializes the distance relation between consecutive layers using the
/// default (grid) strategy.
pub fn build_adjacency(config: &LayeredConfig) -> Result<BipartiteAdjacency> {
    build_adjacency_with(config, Strategy::Grid)
}

/// Materializes the distance relation between consecutive layers. In
/// tolerant mode a pair inside the guard band fails with [`Error::Unstable`].
pub fn build_adjacency_with(
    config: &LayeredConfig,
    strategy: Strategy,
) -> Result<BipartiteAdjacency> {
    let mut lists = Vec::with_capacity(config.k());
    for i in 0..config.k() {
        let (l, band) = neighbor_lists(
            config.layer(i),
            config.layer(i + 1),
            &config.delta2()[i],
            config.mode(),
            strategy,
        )?;
        if let (Some(deviation), Mode::Tolerant(eps)) = (band, config.mode()) {
            return Err(Error::Unstable {
                layer: i + 1,
                next: i + 2,
                deviation,
                eps,
            });
        }
        lists.push(l);
    }
    let sizes = config.layers().iter().map(PointSet::len).collect();
    Ok(BipartiteAdjacency { lists, sizes })
}

/// Ordered pairs `(p, q)` in `p_set x q_set` at squared distance `d2`.
pub fn count_incidences(
    p_set: &PointSet,
    q_set: &PointSet,
    d2: &Rational,
    mode: Mode,
) -> Result<u64> {
    let (lists, _) = neighbor_lists(p_set, q_set, d2, mode, Strategy::Grid)?;
    Ok(lists.iter().map(|l| l.len() as u64).sum())
}
