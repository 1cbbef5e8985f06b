use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use super::adjacency::{neighbor_lists, Strategy};
use super::Identity;
use crate::error::{Error, Result};
use crate::geometry::{Mode, PointSet, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct TreeEdge {
    pub a: usize,
    pub b: usize,
    pub d2: Rational,
}

/// A tree on vertices `0..vertex_count` whose edges carry squared distances.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledTree {
    vertex_count: usize,
    edges: Vec<TreeEdge>,
}

impl LabeledTree {
    pub fn new(vertex_count: usize, edges: Vec<TreeEdge>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidTree(
                "a tree needs at least one vertex".into(),
            ));
        }
        if edges.len() + 1 != vertex_count {
            return Err(Error::InvalidTree(format!(
                "{} edges on {vertex_count} vertices",
                edges.len()
            )));
        }
        let mut parent: Vec<usize> = (0..vertex_count).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &edges {
            if e.a >= vertex_count || e.b >= vertex_count {
                return Err(Error::InvalidTree(format!(
                    "edge ({}, {}) out of range",
                    e.a, e.b
                )));
            }
            if !e.d2.is_positive() {
                return Err(Error::InvalidTree("edge labels must be positive".into()));
            }
            let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
            if ra == rb {
                return Err(Error::InvalidTree(format!(
                    "edge ({}, {}) closes a cycle",
                    e.a, e.b
                )));
            }
            parent[ra] = rb;
        }
        Ok(LabeledTree {
            vertex_count,
            edges,
        })
    }

    /// Path `0 - 1 - ... - k` with the given labels.
    pub fn path(delta2: &[Rational]) -> Result<Self> {
        let edges = delta2
            .iter()
            .enumerate()
            .map(|(i, d)| TreeEdge {
                a: i,
                b: i + 1,
                d2: d.clone(),
            })
            .collect();
        Self::new(delta2.len() + 1, edges)
    }

    /// Star with center `0` and leaves `1..=l`.
    pub fn star(delta2: &[Rational]) -> Result<Self> {
        let edges = delta2
            .iter()
            .enumerate()
            .map(|(i, d)| TreeEdge {
                a: 0,
                b: i + 1,
                d2: d.clone(),
            })
            .collect();
        Self::new(delta2.len() + 1, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.a == v || e.b == v).count()
    }

    /// Breadth-first order from vertex 0, with each non-root vertex's parent
    /// and connecting label.
    fn rooted(&self) -> Vec<(usize, Option<(usize, Rational)>)> {
        let mut nbrs: Vec<Vec<(usize, &Rational)>> = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            nbrs[e.a].push((e.b, &e.d2));
            nbrs[e.b].push((e.a, &e.d2));
        }
        let mut seen = vec![false; self.vertex_count];
        let mut order = vec![(0, None)];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &(w, d) in &nbrs[v] {
                if !seen[w] {
                    seen[w] = true;
                    order.push((w, Some((v, d.clone()))));
                    queue.push_back(w);
                }
            }
        }
        order
    }
}

struct Plan {
    /// vertex per position in root-first order
    vertex: Vec<usize>,
    /// position of the parent, for non-root positions
    parent_pos: Vec<usize>,
    /// neighbor lists from the parent's layer into this vertex's layer
    lists: Vec<Vec<Vec<u32>>>,
}

fn plan(layers: &[PointSet], tree: &LabeledTree, mode: Mode) -> Result<Plan> {
    if layers.len() != tree.vertex_count() {
        return Err(Error::InvalidTree(format!(
            "{} layers for {} tree vertices",
            layers.len(),
            tree.vertex_count()
        )));
    }
    let order = tree.rooted();
    let mut pos_of = vec![0; tree.vertex_count()];
    for (i, (v, _)) in order.iter().enumerate() {
        pos_of[*v] = i;
    }
    let mut vertex = Vec::with_capacity(order.len());
    let mut parent_pos = Vec::with_capacity(order.len());
    let mut lists = Vec::with_capacity(order.len());
    for (v, link) in order {
        vertex.push(v);
        match link {
            None => {
                parent_pos.push(usize::MAX);
                lists.push(Vec::new());
            }
            Some((p, d2)) => {
                let (l, band) = neighbor_lists(&layers[p], &layers[v], &d2, mode, Strategy::Grid)?;
                if let (Some(deviation), Mode::Tolerant(eps)) = (band, mode) {
                    return Err(Error::Unstable {
                        layer: p + 1,
                        next: v + 1,
                        deviation,
                        eps,
                    });
                }
                parent_pos.push(pos_of[p]);
                lists.push(l);
            }
        }
    }
    Ok(Plan {
        vertex,
        parent_pos,
        lists,
    })
}

/// Tuples of distinct points, one from each vertex's layer, realizing every
/// edge label of `tree`.
pub fn count_tree_embeddings(
    layers: &[PointSet],
    tree: &LabeledTree,
    mode: Mode,
) -> Result<BigUint> {
    let plan = plan(layers, tree, mode)?;
    let ids = Identity::of_layers(layers).ids;
    let root_layer = plan.vertex[0];
    let mut total = BigUint::zero();
    let mut assigned = vec![0u32; plan.vertex.len()];
    let mut chosen = Vec::with_capacity(plan.vertex.len());
    for r in 0..layers[root_layer].len() {
        assigned[0] = r as u32;
        chosen.push(ids[root_layer][r]);
        total += BigUint::from(place(&plan, &ids, 1, &mut assigned, &mut chosen));
        chosen.pop();
    }
    Ok(total)
}

/// Single-set variant: every vertex draws from `set`.
pub fn count_tree_embeddings_single(
    set: &PointSet,
    tree: &LabeledTree,
    mode: Mode,
) -> Result<BigUint> {
    let layers = vec![set.clone(); tree.vertex_count()];
    count_tree_embeddings(&layers, tree, mode)
}

fn place(
    plan: &Plan,
    ids: &[Vec<u32>],
    pos: usize,
    assigned: &mut [u32],
    chosen: &mut Vec<u32>,
) -> u128 {
    if pos == plan.vertex.len() {
        return 1;
    }
    let layer_ids = &ids[plan.vertex[pos]];
    let cands = &plan.lists[pos][assigned[plan.parent_pos[pos]] as usize];
    if pos + 1 == plan.vertex.len() {
        return cands
            .iter()
            .filter(|&&j| !chosen.contains(&layer_ids[j as usize]))
            .count() as u128;
    }
    let mut total = 0u128;
    for &j in cands {
        let id = layer_ids[j as usize];
        if chosen.contains(&id) {
            continue;
        }
        assigned[pos] = j;
        chosen.push(id);
        total += place(plan, ids, pos + 1, assigned, chosen);
        chosen.pop();
    }
    total
}

/// Like [`count_tree_embeddings`] but without the distinctness requirement,
/// by a bottom-up dynamic program.
pub fn count_tree_homomorphisms(
    layers: &[PointSet],
    tree: &LabeledTree,
    mode: Mode,
) -> Result<BigUint> {
    let plan = plan(layers, tree, mode)?;
    let n = plan.vertex.len();
    let mut weight: Vec<Vec<BigUint>> = plan
        .vertex
        .iter()
        .map(|&v| vec![BigUint::one(); layers[v].len()])
        .collect();
    for pos in (1..n).rev() {
        let parent = plan.parent_pos[pos];
        let child = std::mem::take(&mut weight[pos]);
        for (i, w) in weight[parent].iter_mut().enumerate() {
            let s: BigUint = plan.lists[pos][i].iter().map(|&j| &child[j as usize]).sum();
            *w *= s;
        }
    }
    Ok(weight[0].iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{int, DistanceSpec};
    use crate::layered::{count_chains, count_incidences, count_walks, LayeredConfig};

    fn line(xs: &[i64]) -> PointSet {
        PointSet::exact(1, xs.iter().map(|&x| vec![int(x)]).collect()).unwrap()
    }

    #[test]
    fn rejects_non_trees() {
        let e = |a, b| TreeEdge { a, b, d2: int(1) };
        assert!(LabeledTree::new(3, vec![e(0, 1)]).is_err());
        assert!(LabeledTree::new(3, vec![e(0, 1), e(1, 0)]).is_err());
        assert!(LabeledTree::new(4, vec![e(0, 1), e(1, 2), e(2, 0)]).is_err());
        assert!(LabeledTree::new(
            2,
            vec![TreeEdge {
                a: 0,
                b: 1,
                d2: int(0)
            }]
        )
        .is_err());
        assert!(LabeledTree::new(3, vec![e(0, 1), e(1, 2)]).is_ok());
    }

    #[test]
    fn path_tree_equals_chain_count() {
        let set = line(&[0, 1, 2, 3, 5, 6]);
        let d = vec![int(1), int(1), int(4)];
        let tree = LabeledTree::path(&d).unwrap();
        let config = LayeredConfig::repeated(set.clone(), DistanceSpec::exact(d).unwrap()).unwrap();
        assert_eq!(
            count_tree_embeddings_single(&set, &tree, Mode::Exact).unwrap(),
            count_chains(&config).unwrap()
        );
        let layers = vec![set; 4];
        assert_eq!(
            count_tree_homomorphisms(&layers, &tree, Mode::Exact).unwrap(),
            count_walks(&config).unwrap()
        );
    }

    #[test]
    fn single_edge_equals_incidences() {
        let a = line(&[0, 1, 2, 7]);
        let b = line(&[1, 3, 8, 9]);
        let tree = LabeledTree::path(&[int(1)]).unwrap();
        let n = count_tree_embeddings(&[a.clone(), b.clone()], &tree, Mode::Exact).unwrap();
        assert_eq!(
            n,
            BigUint::from(count_incidences(&a, &b, &int(1), Mode::Exact).unwrap())
        );
    }

    #[test]
    fn star_with_shared_leaves_needs_distinct_points() {
        // center 0, both leaves at distance 1: {-1, 1} -> 2 ordered embeddings
        let set = line(&[-1, 0, 1]);
        let tree = LabeledTree::star(&[int(1), int(1)]).unwrap();
        assert_eq!(
            count_tree_embeddings_single(&set, &tree, Mode::Exact).unwrap(),
            BigUint::from(2u32)
        );
        // homomorphisms also allow leaf repetition and other centers
        let layers = vec![set; 3];
        // center 0: 2*2, center -1: 1*1, center 1: 1*1
        assert_eq!(
            count_tree_homomorphisms(&layers, &tree, Mode::Exact).unwrap(),
            BigUint::from(6u32)
        );
    }
}
