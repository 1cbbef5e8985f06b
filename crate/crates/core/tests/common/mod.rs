//! Brute-force oracles and random inputs shared by the integration tests.
//!
//! The oracles work on raw integer coordinates and never touch the
//! library's adjacency code, so agreement is evidence rather than tautology.

#![allow(dead_code)]

use std::collections::HashSet;

use chain_census::geometry::{int, DistanceSpec, PointSet};
use chain_census::layered::LayeredConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Layers of integer points together with integer squared distances.
#[derive(Clone, Debug)]
pub struct RawConfig {
    pub layers: Vec<Vec<Vec<i64>>>,
    pub delta2: Vec<i64>,
}

impl RawConfig {
    pub fn to_config(&self) -> LayeredConfig {
        let dim = self.layers.iter().flatten().next().map_or(2, Vec::len);
        let layers = self
            .layers
            .iter()
            .map(|l| PointSet::exact(dim, l.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect()).unwrap())
            .collect();
        let spec = DistanceSpec::exact(self.delta2.iter().map(|&d| int(d)).collect()).unwrap();
        LayeredConfig::new(layers, spec).unwrap()
    }

    fn tuples(&self, mut f: impl FnMut(&[usize])) {
        let sizes: Vec<usize> = self.layers.iter().map(Vec::len).collect();
        if sizes.iter().any(|&s| s == 0) {
            return;
        }
        let mut idx = vec![0; sizes.len()];
        loop {
            f(&idx);
            let mut i = 0;
            loop {
                if i == idx.len() {
                    return;
                }
                idx[i] += 1;
                if idx[i] < sizes[i] {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    fn is_walk(&self, t: &[usize]) -> bool {
        (0..self.delta2.len()).all(|i| d2(&self.layers[i][t[i]], &self.layers[i + 1][t[i + 1]]) == self.delta2[i])
    }

    fn distinct(&self, t: &[usize]) -> bool {
        let pts: HashSet<&Vec<i64>> = t.iter().enumerate().map(|(i, &j)| &self.layers[i][j]).collect();
        pts.len() == t.len()
    }

    /// Every tuple of positions forming a chain.
    pub fn chains(&self) -> HashSet<Vec<usize>> {
        let mut out = HashSet::new();
        self.tuples(|t| {
            if self.is_walk(t) && self.distinct(t) {
                out.insert(t.to_vec());
            }
        });
        out
    }

    pub fn walk_count(&self) -> u64 {
        let mut n = 0;
        self.tuples(|t| n += self.is_walk(t) as u64);
        n
    }
}

pub fn d2(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Incidences between two raw sets, by scanning all pairs.
pub fn raw_incidences(a: &[Vec<i64>], b: &[Vec<i64>], delta2: i64) -> u64 {
    a.iter()
        .flat_map(|p| b.iter().map(move |q| d2(p, q)))
        .filter(|&d| d == delta2)
        .count() as u64
}

/// Random configuration on a small planar lattice so that distances repeat
/// and layers share points.
pub fn random_raw(rng: &mut ChaCha8Rng, max_k: usize, max_per_layer: usize) -> RawConfig {
    let k = rng.gen_range(0..=max_k);
    let side = rng.gen_range(2..=4);
    let layers = (0..=k)
        .map(|_| {
            let m = rng.gen_range(1..=max_per_layer);
            let mut seen = HashSet::new();
            (0..m)
                .map(|_| vec![rng.gen_range(0..side), rng.gen_range(0..side)])
                .filter(|p| seen.insert(p.clone()))
                .collect()
        })
        .collect();
    let delta2 = (0..k).map(|_| [1, 1, 2, 4, 5][rng.gen_range(0..5)]).collect();
    RawConfig { layers, delta2 }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `m` distinct random points in `[0, side)^2`.
pub fn random_points(rng: &mut ChaCha8Rng, m: usize, side: i64) -> Vec<Vec<i64>> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let p = vec![rng.gen_range(0..side), rng.gen_range(0..side)];
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    out
}

pub fn exact_set(points: &[Vec<i64>]) -> PointSet {
    let dim = points.first().map_or(2, Vec::len);
    PointSet::exact(dim, points.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect()).unwrap()
}
