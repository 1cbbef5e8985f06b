//! Richness classes, the filtering operator `D` and the stable covering.
//!
//! Thresholds are compared as integers: with `eps = p/q` and `alpha = i eps`,
//! `n^alpha <= deg` becomes `n^(i p) <= deg^q`.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::geometry::{format_rational, to_f64, Mode, PointSet, Rational};
use crate::layered::{count_incidences, neighbor_lists, LayeredConfig, Strategy};

/// Default cap on explored nodes of the sequence tree.
pub const DEFAULT_NODE_LIMIT: usize = 200_000;

/// Number of points of `reference` at squared distance `d2` from each point
/// of `target`.
pub fn degrees(
    target: &PointSet,
    reference: &PointSet,
    d2: &Rational,
    mode: Mode,
) -> Result<Vec<usize>> {
    let (lists, _) = neighbor_lists(target, reference, d2, mode, Strategy::Grid)?;
    Ok(lists.iter().map(Vec::len).collect())
}

/// Positions of the points of `target` with at least `r` points of
/// `reference` at squared distance `d2`.
pub fn rich_points(
    target: &PointSet,
    reference: &PointSet,
    d2: &Rational,
    r: usize,
    mode: Mode,
) -> Result<Vec<usize>> {
    Ok(degrees(target, reference, d2, mode)?
        .into_iter()
        .enumerate()
        .filter_map(|(i, d)| (d >= r.max(1)).then_some(i))
        .collect())
}

/// Points whose richness lies in `[lo, hi)`; `hi = None` means unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RichnessClass {
    pub level: u32,
    pub lo: u64,
    pub hi: Option<u64>,
    pub points: Vec<usize>,
}

impl RichnessClass {
    /// `log_n(lo)`, the exponent form of the lower bound.
    pub fn alpha(&self, n: usize) -> f64 {
        if n <= 1 {
            return 0.0;
        }
        (self.lo as f64).ln() / (n as f64).ln()
    }
}

/// Dyadic classes `[2^i, 2^(i+1))` of the positive-degree points of
/// `target`, nonempty ones only, by increasing `i`.
pub fn dyadic_partition(
    target: &PointSet,
    reference: &PointSet,
    d2: &Rational,
    mode: Mode,
) -> Result<Vec<RichnessClass>> {
    let deg = degrees(target, reference, d2, mode)?;
    let mut classes: Vec<RichnessClass> = Vec::new();
    for (i, &d) in deg.iter().enumerate() {
        if d == 0 {
            continue;
        }
        let level = (usize::BITS - 1 - d.leading_zeros()) as usize;
        if classes.len() <= level {
            classes.extend((classes.len()..=level).map(|l| RichnessClass {
                level: l as u32,
                lo: 1 << l,
                hi: Some(1 << (l + 1)),
                points: Vec::new(),
            }));
        }
        classes[level].points.push(i);
    }
    classes.retain(|c| !c.points.is_empty());
    Ok(classes)
}

/// Exponent grid `{0, eps, 2 eps, ...}` with its integer thresholds.
#[derive(Clone, Debug)]
struct Grid {
    p: u32,
    q: u32,
    levels: u32,
    /// `thresholds[i] = ceil(n^(i eps))`.
    thresholds: Vec<BigUint>,
}

impl Grid {
    fn new(eps: &Rational, n: usize) -> Result<Self> {
        if !eps.is_positive() || eps > &Rational::one() {
            return Err(Error::InvalidTolerance(format!(
                "eps {} must lie in (0, 1]",
                format_rational(eps)
            )));
        }
        let (p, q) = match (eps.numer().to_u32(), eps.denom().to_u32()) {
            (Some(p), Some(q)) if q <= 64 => (p, q),
            _ => {
                return Err(Error::InvalidTolerance(format!(
                    "eps {} needs a denominator of at most 64",
                    format_rational(eps)
                )))
            }
        };
        let levels = q / p;
        let n = BigUint::from(n.max(1));
        let thresholds = (0..=levels + 1)
            .map(|i| {
                let target = n.pow(i * p);
                let r = target.nth_root(q);
                if r.pow(q) < target {
                    r + 1u32
                } else {
                    r
                }
            })
            .collect();
        Ok(Grid {
            p,
            q,
            levels,
            thresholds,
        })
    }

    /// The class index of a positive degree: `n^(i eps) <= deg < n^((i+1) eps)`,
    /// with the top index unbounded above.
    fn level_of(&self, deg: usize) -> Option<u32> {
        if deg == 0 {
            return None;
        }
        let d = BigUint::from(deg);
        (0..=self.levels)
            .rev()
            .find(|&i| self.thresholds[i as usize] <= d)
            .filter(|&i| i == self.levels || d < self.thresholds[i as usize + 1])
    }

    fn alpha(&self, i: u32) -> Rational {
        Rational::new((i * self.p).into(), self.q.into())
    }
}

/// Neighbor lists in both directions for every consecutive layer pair.
struct Links {
    fwd: Vec<Vec<Vec<u32>>>,
    bwd: Vec<Vec<Vec<u32>>>,
    sizes: Vec<usize>,
}

impl Links {
    fn of(config: &LayeredConfig) -> Result<Self> {
        let mut fwd = Vec::new();
        let mut bwd = Vec::new();
        for i in 0..config.k() {
            let (a, b) = (config.layer(i), config.layer(i + 1));
            let d2 = &config.delta2()[i];
            fwd.push(neighbor_lists(a, b, d2, config.mode(), Strategy::Grid)?.0);
            bwd.push(neighbor_lists(b, a, d2, config.mode(), Strategy::Grid)?.0);
        }
        Ok(Links {
            fwd,
            bwd,
            sizes: config.layers().iter().map(PointSet::len).collect(),
        })
    }

    /// Neighbors of point `x` of layer `layer` inside layer `other` (adjacent).
    fn nbrs(&self, layer: usize, x: usize, other: usize) -> &[u32] {
        if other == layer + 1 {
            &self.fwd[layer][x]
        } else {
            &self.bwd[other][x]
        }
    }
}

/// Product set as per-layer sorted index lists.
type Sets = Vec<Vec<usize>>;

/// All outcomes of one application of `D` over the exponent grid: the
/// nonempty products with their `alpha` indices.
fn apply_all(links: &Links, grid: &Grid, parity: u8, sets: &Sets) -> Vec<(Vec<u32>, Sets)> {
    let k1 = sets.len();
    let order: Vec<usize> = if parity == 1 {
        (0..k1).collect()
    } else {
        (0..k1).rev().collect()
    };
    let mut out = Vec::new();
    let mut alpha = vec![0u32; k1];
    let mut current: Vec<Option<Vec<usize>>> = vec![None; k1];
    current[order[0]] = Some(sets[order[0]].clone());
    if sets[order[0]].is_empty() {
        return out;
    }
    expand(
        links,
        grid,
        &order,
        1,
        sets,
        &mut alpha,
        &mut current,
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn expand(
    links: &Links,
    grid: &Grid,
    order: &[usize],
    step: usize,
    sets: &Sets,
    alpha: &mut Vec<u32>,
    current: &mut Vec<Option<Vec<usize>>>,
    out: &mut Vec<(Vec<u32>, Sets)>,
) {
    if step == order.len() {
        let product = current.iter().map(|s| s.clone().unwrap()).collect();
        out.push((alpha.clone(), product));
        return;
    }
    let (layer, prev) = (order[step], order[step - 1]);
    let mut inside = vec![false; links.sizes[prev]];
    for &x in current[prev].as_ref().unwrap() {
        inside[x] = true;
    }
    let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); grid.levels as usize + 1];
    for &x in &sets[layer] {
        let deg = links
            .nbrs(layer, x, prev)
            .iter()
            .filter(|&&y| inside[y as usize])
            .count();
        if let Some(i) = grid.level_of(deg) {
            by_level[i as usize].push(x);
        }
    }
    for (i, members) in by_level.into_iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        alpha[layer] = i as u32;
        current[layer] = Some(members);
        expand(links, grid, order, step + 1, sets, alpha, current, out);
    }
    alpha[layer] = 0;
    current[layer] = None;
}

/// One application of `D` with parity `j`: left to right for `j = 1`,
/// right to left for `j = 0`. Each filtered layer keeps the points whose
/// richness toward the already filtered neighbor layer lies in
/// `[n^alpha_i, n^(alpha_i + eps))`, `n` being the largest layer size. The
/// coordinate of `alpha` for the unfiltered end layer is ignored.
pub fn operator_d(
    parity: u8,
    config: &LayeredConfig,
    alpha: &[Rational],
    eps: &Rational,
) -> Result<LayeredConfig> {
    if alpha.len() != config.k() + 1 {
        return Err(Error::InvalidConfig(format!(
            "alpha has {} entries for {} layers",
            alpha.len(),
            config.k() + 1
        )));
    }
    let grid = Grid::new(eps, config.max_layer_size())?;
    let mut index = Vec::with_capacity(alpha.len());
    for a in alpha {
        let i = a / eps;
        if a.is_negative() || !i.is_integer() || i.to_integer() > grid.levels.into() {
            return Err(Error::InvalidConfig(format!(
                "alpha entry {} is not a multiple of eps in [0, 1]",
                format_rational(a)
            )));
        }
        index.push(i.to_integer().to_u32().unwrap());
    }
    let links = Links::of(config)?;
    let full: Sets = links.sizes.iter().map(|&s| (0..s).collect()).collect();
    let skip = if parity == 1 { 0 } else { config.k() };
    let hit = apply_all(&links, &grid, parity, &full)
        .into_iter()
        .find(|(a, _)| {
            a.iter()
                .enumerate()
                .all(|(i, &v)| i == skip || v == index[i])
        });
    let sets = hit.map_or_else(|| vec![Vec::new(); config.k() + 1], |(_, s)| s);
    Ok(config.restricted(&sets))
}

/// A member of the stable covering.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionSequence {
    /// The exponent vectors `gamma^1, gamma^2, ...`.
    pub gamma: Vec<Vec<Rational>>,
    pub stable_at_last: bool,
    /// Product size after each step; entry 0 is the full product.
    pub class_sizes: Vec<BigUint>,
    /// Final class, as per-layer positions.
    pub class: Vec<Vec<usize>>,
}

impl DecompositionSequence {
    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    /// Whether the tuple of layer positions lies in the final class.
    pub fn contains(&self, tuple: &[usize]) -> bool {
        tuple
            .iter()
            .zip(&self.class)
            .all(|(x, set)| set.binary_search(x).is_ok())
    }
}

/// The sequences of the covering and how much of the tree was explored.
#[derive(Clone, Debug)]
pub struct Covering {
    pub sequences: Vec<DecompositionSequence>,
    pub nodes: usize,
    /// `n`, the largest layer size.
    pub n: usize,
    pub eps: Rational,
}

impl Covering {
    /// `(k + 1) / eps + 1`.
    pub fn length_bound(&self, k: usize) -> Rational {
        Rational::from_integer((k as i64 + 1).into()) / &self.eps + Rational::one()
    }
}

fn product_size(sets: &Sets) -> BigUint {
    sets.iter()
        .fold(BigUint::one(), |acc, s| acc * BigUint::from(s.len()))
}

/// Sequences that are stable at their last step, unstable at every earlier
/// step, and end in a nonempty class. A step is stable when the product
/// shrinks by a factor of at most `n^eps`.
///
/// The tree is explored breadth first; children of equal `(parity, class)`
/// nodes are computed once. Exploring more than `limit` nodes fails with
/// [`Error::LimitExceeded`].
pub fn stable_covering(config: &LayeredConfig, eps: &Rational, limit: usize) -> Result<Covering> {
    let n = config.max_layer_size();
    let grid = Grid::new(eps, n)?;
    let links = Links::of(config)?;
    let full: Sets = links.sizes.iter().map(|&s| (0..s).collect()).collect();
    let n_pow_p = BigUint::from(n.max(1)).pow(grid.p);
    let stable = |old: &BigUint, new: &BigUint| new.pow(grid.q) * &n_pow_p >= old.pow(grid.q);

    struct Node {
        gamma: Vec<Vec<u32>>,
        sizes: Vec<BigUint>,
        sets: Sets,
    }
    let mut memo: HashMap<(u8, Sets), Vec<(Vec<u32>, Sets)>> = HashMap::new();
    let mut queue = VecDeque::from([Node {
        gamma: Vec::new(),
        sizes: vec![product_size(&full)],
        sets: full,
    }]);
    let mut found = Vec::new();
    let mut nodes = 0;
    while let Some(node) = queue.pop_front() {
        nodes += 1;
        if nodes > limit {
            return Err(Error::LimitExceeded(limit));
        }
        let parity = ((node.gamma.len() + 1) % 2) as u8;
        let children = memo
            .entry((parity, node.sets.clone()))
            .or_insert_with(|| apply_all(&links, &grid, parity, &node.sets))
            .clone();
        let old = node.sizes.last().unwrap();
        for (alpha, sets) in children {
            let size = product_size(&sets);
            let is_stable = stable(old, &size);
            let mut gamma = node.gamma.clone();
            gamma.push(alpha);
            let mut sizes = node.sizes.clone();
            sizes.push(size);
            if is_stable {
                found.push(DecompositionSequence {
                    gamma: gamma
                        .iter()
                        .map(|a| a.iter().map(|&i| grid.alpha(i)).collect())
                        .collect(),
                    stable_at_last: true,
                    class_sizes: sizes,
                    class: sets,
                });
            } else {
                queue.push_back(Node { gamma, sizes, sets });
            }
        }
    }
    found.sort_by(|a, b| a.gamma.cmp(&b.gamma));
    Ok(Covering {
        sequences: found,
        nodes,
        n,
        eps: eps.clone(),
    })
}

/// One realized richness value in [`check_richness_bound`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RichnessRow {
    pub r: usize,
    pub rich: usize,
    pub rich_incidences: u64,
}

#[derive(Clone, Debug)]
pub struct RichnessReport {
    pub rows: Vec<RichnessRow>,
    pub total_incidences: u64,
    /// Largest `r |S_r| / I(P, S_r)` over the rows.
    pub tightest: f64,
    pub holds: bool,
}

/// For every realized richness `r` of `q` toward `p`, checks
/// `r |S_r| <= I(p, S_r) <= I(p, q)` where `S_r` holds the `r`-rich points.
pub fn check_richness_bound(
    p: &PointSet,
    q: &PointSet,
    d2: &Rational,
    mode: Mode,
) -> Result<RichnessReport> {
    let deg = degrees(q, p, d2, mode)?;
    let mut values: Vec<usize> = deg.iter().copied().filter(|&d| d > 0).collect();
    values.sort_unstable();
    values.dedup();
    let total = count_incidences(p, q, d2, mode)?;
    let mut rows = Vec::with_capacity(values.len());
    let mut holds = true;
    let mut tightest = 0.0f64;
    for r in values {
        let idx = rich_points(q, p, d2, r, mode)?;
        let rich_incidences = count_incidences(p, &q.subset(&idx), d2, mode)?;
        let lhs = r as u64 * idx.len() as u64;
        holds &= lhs <= rich_incidences && rich_incidences <= total;
        if rich_incidences > 0 {
            tightest = tightest.max(lhs as f64 / rich_incidences as f64);
        }
        rows.push(RichnessRow {
            r,
            rich: idx.len(),
            rich_incidences,
        });
    }
    Ok(RichnessReport {
        rows,
        total_incidences: total,
        tightest,
        holds,
    })
}

/// Presentation helper: `gamma` entries as decimals.
pub fn gamma_to_f64(gamma: &[Vec<Rational>]) -> Vec<Vec<f64>> {
    gamma
        .iter()
        .map(|g| g.iter().map(to_f64).collect())
        .collect()
}
