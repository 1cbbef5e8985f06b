mod common;

use std::collections::HashSet;

use chain_census::constructions::{
    alternating_chain_count, gen_3d_even, gen_orthogonal_circles, gen_planar_chain, gen_star,
    gen_unit_rich_grid, split_and_translate,
};
use chain_census::geometry::{format_rational, int, parse_rational, ratio, Mode, Rational};
use chain_census::harness::{format_points, parse_points};
use chain_census::layered::{
    build_adjacency, count_chains, count_incidences, count_tree_embeddings, count_tree_homomorphisms,
    count_walks, for_each_chain, LabeledTree, TreeEdge,
};
use chain_census::richness::{dyadic_partition, operator_d, rich_points, stable_covering, DEFAULT_NODE_LIMIT};
use num_bigint::BigUint;
use proptest::prelude::*;

use common::{d2, exact_set, raw_incidences, RawConfig};

fn raw_config(max_k: usize, max_per_layer: usize) -> impl Strategy<Value = RawConfig> {
    (0..=max_k).prop_flat_map(move |k| {
        let layer = prop::collection::hash_set((0i64..4, 0i64..4), 1..=max_per_layer)
            .prop_map(|s| s.into_iter().map(|(x, y)| vec![x, y]).collect::<Vec<_>>());
        (
            prop::collection::vec(layer, k + 1),
            prop::collection::vec(prop::sample::select(vec![1i64, 2, 4, 5]), k),
        )
            .prop_map(|(mut layers, delta2)| {
                for l in &mut layers {
                    l.sort();
                }
                RawConfig { layers, delta2 }
            })
    })
}

fn point_set(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::hash_set((-6i64..6, -6i64..6), 1..=max)
        .prop_map(|s| s.into_iter().map(|(x, y)| vec![x, y]).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn counts_match_enumeration(raw in raw_config(4, 5)) {
        let c = raw.to_config();
        prop_assert_eq!(count_chains(&c).unwrap(), BigUint::from(raw.chains().len()));
        prop_assert_eq!(count_walks(&c).unwrap(), BigUint::from(raw.walk_count()));
    }

    #[test]
    fn chains_never_exceed_walks(raw in raw_config(4, 6)) {
        let c = raw.to_config();
        prop_assert!(count_chains(&c).unwrap() <= count_walks(&c).unwrap());
    }

    #[test]
    fn reversal_preserves_counts(raw in raw_config(4, 6)) {
        let c = raw.to_config();
        let r = c.reversed();
        prop_assert_eq!(count_chains(&c).unwrap(), count_chains(&r).unwrap());
        prop_assert_eq!(count_walks(&c).unwrap(), count_walks(&r).unwrap());
    }

    #[test]
    fn listed_chains_are_the_chains(raw in raw_config(3, 5)) {
        let c = raw.to_config();
        let mut listed = HashSet::new();
        for_each_chain(&c, |t| { listed.insert(t.to_vec()); }).unwrap();
        prop_assert_eq!(listed, raw.chains());
    }

    #[test]
    fn tolerant_mode_agrees_on_lattices(raw in raw_config(3, 5)) {
        let c = raw.to_config();
        let t = c.to_tolerant(1e-9).unwrap();
        prop_assert_eq!(count_chains(&c).unwrap(), count_chains(&t).unwrap());
        prop_assert_eq!(count_walks(&c).unwrap(), count_walks(&t).unwrap());
    }

    #[test]
    fn incidences_match_pair_scan(a in point_set(20), b in point_set(20), delta2 in 1i64..30) {
        let n = count_incidences(&exact_set(&a), &exact_set(&b), &int(delta2), Mode::Exact).unwrap();
        prop_assert_eq!(n, raw_incidences(&a, &b, delta2));
    }

    #[test]
    fn path_trees_are_chains(raw in raw_config(3, 5)) {
        let c = raw.to_config();
        let tree = LabeledTree::path(c.delta2()).unwrap();
        prop_assert_eq!(count_tree_embeddings(c.layers(), &tree, Mode::Exact).unwrap(), count_chains(&c).unwrap());
        prop_assert_eq!(count_tree_homomorphisms(c.layers(), &tree, Mode::Exact).unwrap(), count_walks(&c).unwrap());
    }

    #[test]
    fn rich_points_are_monotone_and_exact(t in point_set(25), r in point_set(25), delta2 in prop::sample::select(vec![1i64, 2, 5, 10, 25])) {
        let (ts, rs) = (exact_set(&t), exact_set(&r));
        let deg: Vec<usize> = t.iter().map(|p| r.iter().filter(|q| d2(p, q) == delta2).count()).collect();
        let mut prev: Option<Vec<usize>> = None;
        for rr in 1..=6 {
            let got = rich_points(&ts, &rs, &int(delta2), rr, Mode::Exact).unwrap();
            let want: Vec<usize> = (0..t.len()).filter(|&i| deg[i] >= rr).collect();
            prop_assert_eq!(&got, &want);
            if let Some(p) = &prev {
                prop_assert!(got.iter().all(|i| p.contains(i)));
            }
            prev = Some(got);
        }
    }

    #[test]
    fn dyadic_classes_partition_positive_degrees(t in point_set(30), r in point_set(30), delta2 in prop::sample::select(vec![1i64, 5, 25])) {
        let (ts, rs) = (exact_set(&t), exact_set(&r));
        let deg: Vec<usize> = t.iter().map(|p| r.iter().filter(|q| d2(p, q) == delta2).count()).collect();
        let classes = dyadic_partition(&ts, &rs, &int(delta2), Mode::Exact).unwrap();
        let mut seen = HashSet::new();
        for c in &classes {
            for &i in &c.points {
                prop_assert!(seen.insert(i));
                prop_assert!(deg[i] as u64 >= c.lo && (deg[i] as u64) < c.hi.unwrap());
            }
        }
        prop_assert_eq!(seen.len(), deg.iter().filter(|&&d| d > 0).count());
        let max = deg.iter().copied().max().unwrap_or(0);
        if max > 0 {
            prop_assert!(classes.len() <= (usize::BITS - max.leading_zeros()) as usize);
        }
    }

    #[test]
    fn operator_d_shrinks_layers(raw in raw_config(3, 5), parity in 0u8..2, picks in prop::collection::vec(0usize..3, 4)) {
        let c = raw.to_config();
        let eps = ratio(1, 2);
        let alpha: Vec<Rational> = picks.iter().take(c.k() + 1).map(|&i| ratio(i as i64, 2)).collect();
        let out = operator_d(parity, &c, &alpha, &eps).unwrap();
        for (o, l) in out.layers().iter().zip(c.layers()) {
            let inside: HashSet<_> = l.iter().map(|p| p.key()).collect();
            prop_assert!(o.iter().all(|p| inside.contains(&p.key())));
        }
    }

    #[test]
    fn covering_reproduces_chain_set(raw in raw_config(3, 5)) {
        let c = raw.to_config();
        let cov = stable_covering(&c, &ratio(1, 2), DEFAULT_NODE_LIMIT).unwrap();
        let bound = cov.length_bound(c.k());
        let mut union = HashSet::new();
        for s in &cov.sequences {
            prop_assert!(s.stable_at_last);
            prop_assert!(Rational::from_integer(s.len().into()) <= bound);
            prop_assert!(s.class.iter().all(|l| !l.is_empty()));
            prop_assert!(s.class_sizes.windows(2).all(|w| w[1] <= w[0]));
            for_each_chain(&c.restricted(&s.class), |t| {
                union.insert(t.iter().zip(&s.class).map(|(&i, l)| l[i]).collect::<Vec<_>>());
            }).unwrap();
        }
        prop_assert_eq!(union, raw.chains());
    }

    #[test]
    fn rationals_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let r = ratio(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn point_files_round_trip(pts in point_set(12), den in 1i64..50) {
        let set = chain_census::geometry::PointSet::exact(
            2,
            pts.iter().map(|p| p.iter().map(|&x| ratio(x, den)).collect()).collect(),
        ).unwrap();
        let text = format_points(&set);
        let back = parse_points(&text, std::path::Path::new("mem")).unwrap();
        prop_assert_eq!(format_points(&back), text);
    }

    #[test]
    fn adjacency_partitioning_is_invariant(raw in raw_config(4, 6), parts in 1usize..5) {
        let c = raw.to_config();
        let adj = build_adjacency(&c).unwrap();
        let whole = count_chains(&c).unwrap();
        // ids: coordinate identity across layers
        let mut map = std::collections::HashMap::new();
        let ids: Vec<Vec<u32>> = raw.layers.iter().map(|l| l.iter().map(|p| {
            let next = map.len() as u32;
            *map.entry(p.clone()).or_insert(next)
        }).collect()).collect();
        prop_assert_eq!(chain_census::layered::count_chains_partitioned(&adj, &ids, parts), whole);
    }
}

#[test]
fn closed_forms_at_several_sizes() {
    for n in [1, 2, 7, 30] {
        let c = gen_planar_chain(2, &[int(1), int(1)], n, 0.5).unwrap();
        assert_eq!(count_chains(&c).unwrap(), BigUint::from(n * n));
        let c = gen_3d_even(2, &[int(1), ratio(9, 4)], n).unwrap();
        assert_eq!(count_chains(&c).unwrap(), BigUint::from(n * n));
    }
    for (n, k) in [(4, 1), (6, 2), (10, 4), (8, 5)] {
        let c = gen_orthogonal_circles(4, k, n).unwrap();
        assert_eq!(count_chains(&c).unwrap(), alternating_chain_count(n / 2, n / 2, k), "n={n} k={k}");
    }
    let s = gen_star(4, 12).unwrap();
    assert_eq!(count_tree_embeddings(&s.layers, &s.tree, s.mode).unwrap(), BigUint::from(81u32));
}

#[test]
fn tree_embeddings_match_enumeration() {
    // a spider with legs of length 1 and 2 on a small lattice
    let pts: Vec<Vec<i64>> = (0..4).flat_map(|x| (0..3).map(move |y| vec![x, y])).collect();
    let set = exact_set(&pts);
    let edges = vec![
        TreeEdge { a: 0, b: 1, d2: int(1) },
        TreeEdge { a: 0, b: 2, d2: int(2) },
        TreeEdge { a: 2, b: 3, d2: int(1) },
    ];
    let tree = LabeledTree::new(4, edges).unwrap();
    let layers = vec![set; 4];
    let (mut emb, mut hom) = (0u64, 0u64);
    let m = pts.len();
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    if d2(&pts[a], &pts[b]) == 1 && d2(&pts[a], &pts[c]) == 2 && d2(&pts[c], &pts[d]) == 1 {
                        hom += 1;
                        let t: HashSet<usize> = [a, b, c, d].into();
                        emb += (t.len() == 4) as u64;
                    }
                }
            }
        }
    }
    assert_eq!(count_tree_embeddings(&layers, &tree, Mode::Exact).unwrap(), BigUint::from(emb));
    assert_eq!(count_tree_homomorphisms(&layers, &tree, Mode::Exact).unwrap(), BigUint::from(hom));
}

#[test]
fn split_floor_holds_across_seeds_and_eps() {
    let grid = gen_unit_rich_grid(144).unwrap();
    for (seed, eps) in [(0, int(1)), (1, ratio(1, 2)), (2, ratio(1, 3))] {
        let s = split_and_translate(&grid.points, &grid.points, &grid.popular_d2, &eps, seed).unwrap();
        assert!(s.meets_floor(), "seed {seed} eps {}", format_rational(&eps));
        assert!(2 * s.uncut >= s.original);
    }
}
