use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{build_adjacency, BipartiteAdjacency, Identity, LayeredConfig};
use crate::error::Result;

/// Tuples `(p_1, ..., p_{k+1})`, `p_i` in `P_i`, whose consecutive distances
/// match. Repetition allowed.
pub fn count_walks(config: &LayeredConfig) -> Result<BigUint> {
    let adj = build_adjacency(config)?;
    Ok(count_walks_adj(&adj))
}

/// Layer-by-layer dynamic program over per-point partial counts.
pub fn count_walks_adj(adj: &BipartiteAdjacency) -> BigUint {
    let mut cur = vec![BigUint::one(); adj.sizes[0]];
    for (layer, lists) in adj.lists.iter().enumerate() {
        let mut next = vec![BigUint::zero(); adj.sizes[layer + 1]];
        for (i, l) in lists.iter().enumerate() {
            if cur[i].is_zero() {
                continue;
            }
            for &j in l {
                next[j as usize] += &cur[i];
            }
        }
        cur = next;
    }
    cur.into_iter().sum()
}

/// Chains: walks whose `k + 1` points are pairwise distinct.
pub fn count_chains(config: &LayeredConfig) -> Result<BigUint> {
    let adj = build_adjacency(config)?;
    let ids = Identity::of_layers(config.layers());
    Ok(count_chains_adj(&adj, &ids.ids))
}

/// Backtracking chain count over a prebuilt adjacency; roots (first-layer
/// points) are processed in parallel on the current rayon pool.
pub fn count_chains_adj(adj: &BipartiteAdjacency, ids: &[Vec<u32>]) -> BigUint {
    (0..ids[0].len())
        .into_par_iter()
        .map(|r| BigUint::from(chains_from_root(adj, ids, r)))
        .reduce(BigUint::zero, |a, b| a + b)
}

/// The same count with roots split into `parts` contiguous blocks summed
/// independently.
pub fn count_chains_partitioned(
    adj: &BipartiteAdjacency,
    ids: &[Vec<u32>],
    parts: usize,
) -> BigUint {
    let n = ids[0].len();
    let parts = parts.max(1);
    let block = n.div_ceil(parts).max(1);
    (0..n)
        .step_by(block)
        .map(|start| {
            (start..(start + block).min(n))
                .map(|r| BigUint::from(chains_from_root(adj, ids, r)))
                .sum::<BigUint>()
        })
        .sum()
}

fn chains_from_root(adj: &BipartiteAdjacency, ids: &[Vec<u32>], root: usize) -> u128 {
    let mut chosen = Vec::with_capacity(adj.k() + 1);
    chosen.push(ids[0][root]);
    extend(adj, ids, 0, root as u32, &mut chosen)
}

fn extend(
    adj: &BipartiteAdjacency,
    ids: &[Vec<u32>],
    layer: usize,
    at: u32,
    chosen: &mut Vec<u32>,
) -> u128 {
    let k = adj.k();
    if layer == k {
        return 1;
    }
    let next_ids = &ids[layer + 1];
    let nbrs = &adj.lists[layer][at as usize];
    if layer + 1 == k {
        return nbrs
            .iter()
            .filter(|&&j| !chosen.contains(&next_ids[j as usize]))
            .count() as u128;
    }
    let mut total = 0u128;
    for &j in nbrs {
        let id = next_ids[j as usize];
        if chosen.contains(&id) {
            continue;
        }
        chosen.push(id);
        total += extend(adj, ids, layer + 1, j, chosen);
        chosen.pop();
    }
    total
}

/// Calls `f` with the layer-local indices of every chain, in lexicographic
/// order.
pub fn for_each_chain(config: &LayeredConfig, mut f: impl FnMut(&[usize])) -> Result<()> {
    let adj = build_adjacency(config)?;
    let ids = Identity::of_layers(config.layers()).ids;
    let mut path = Vec::with_capacity(config.k() + 1);
    let mut chosen = Vec::with_capacity(config.k() + 1);
    for r in 0..ids[0].len() {
        path.push(r);
        chosen.push(ids[0][r]);
        visit(&adj, &ids, &mut path, &mut chosen, &mut f);
        path.pop();
        chosen.pop();
    }
    Ok(())
}

fn visit(
    adj: &BipartiteAdjacency,
    ids: &[Vec<u32>],
    path: &mut Vec<usize>,
    chosen: &mut Vec<u32>,
    f: &mut impl FnMut(&[usize]),
) {
    let layer = path.len() - 1;
    if layer == adj.k() {
        f(path);
        return;
    }
    for &j in &adj.lists[layer][path[layer]] {
        let id = ids[layer + 1][j as usize];
        if chosen.contains(&id) {
            continue;
        }
        path.push(j as usize);
        chosen.push(id);
        visit(adj, ids, path, chosen, f);
        path.pop();
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{int, DistanceSpec, PointSet};

    fn line(xs: &[i64]) -> PointSet {
        PointSet::exact(1, xs.iter().map(|&x| vec![int(x)]).collect()).unwrap()
    }

    #[test]
    fn k0_counts_points() {
        let c = LayeredConfig::new(
            vec![line(&[0, 1, 2, 3, 4])],
            DistanceSpec::exact(vec![]).unwrap(),
        )
        .unwrap();
        assert_eq!(count_walks(&c).unwrap(), BigUint::from(5u32));
        assert_eq!(count_chains(&c).unwrap(), BigUint::from(5u32));
    }

    #[test]
    fn walks_versus_chains_on_a_line() {
        // points 0..4 on a line, unit steps, same set repeated
        let spec = DistanceSpec::exact(vec![int(1); 2]).unwrap();
        let c = LayeredConfig::repeated(line(&[0, 1, 2, 3]), spec).unwrap();
        // walks of length 2 on the path graph P4: sum of deg^2 = 1+4+4+1
        assert_eq!(count_walks(&c).unwrap(), BigUint::from(10u32));
        // distinct: 0-1-2, 1-2-3, and reverses
        assert_eq!(count_chains(&c).unwrap(), BigUint::from(4u32));
        let mut seen = Vec::new();
        for_each_chain(&c, |p| seen.push(p.to_vec())).unwrap();
        assert_eq!(
            seen,
            vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 1, 0], vec![3, 2, 1]]
        );
    }

    #[test]
    fn partitioning_does_not_change_the_count() {
        let spec = DistanceSpec::exact(vec![int(1); 3]).unwrap();
        let c = LayeredConfig::repeated(line(&[0, 1, 2, 3, 4, 5, 6]), spec).unwrap();
        let adj = build_adjacency(&c).unwrap();
        let ids = Identity::of_layers(c.layers()).ids;
        let whole = count_chains_adj(&adj, &ids);
        for parts in 1..9 {
            assert_eq!(count_chains_partitioned(&adj, &ids, parts), whole);
        }
    }
}
