//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

mod common;

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use chain_census::constructions::{
    gen_3d_even, gen_orthogonal_circles, gen_planar_chain, gen_planar_k1mod3, gen_unit_rich_grid,
    peel_min_degree, split_and_translate,
};
use chain_census::geometry::{certify_separation, int, ratio, Mode, Rational, Scalar};
use chain_census::harness::{run_experiment, ConstructionId, ExperimentConfig};
use chain_census::layered::{count_chains, count_walks, for_each_chain};
use chain_census::richness::{check_richness_bound, stable_covering, DEFAULT_NODE_LIMIT};
use num_bigint::BigUint;

use common::{exact_set, random_points, random_raw, rng};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn planar_k2() -> Outcome {
    let c = gen_planar_chain(2, &[int(1), int(1)], 100, 0.5).map_err(|e| e.to_string())?;
    let chains = count_chains(&c).map_err(|e| e.to_string())?;
    check(chains == BigUint::from(10_000u32), format!("{chains} chains, expected 10000"))
}

fn even_3d() -> Outcome {
    let c = gen_3d_even(4, &vec![int(1); 4], 50).map_err(|e| e.to_string())?;
    let tolerant = matches!(c.mode(), Mode::Tolerant(_));
    let stable = (0..4).all(|i| certify_separation(c.layer(i), c.layer(i + 1), &c.delta2()[i], c.mode()).is_stable());
    let chains = count_chains(&c).map_err(|e| e.to_string())?;
    check(
        tolerant && stable && chains == BigUint::from(125_000u32),
        format!("{chains} chains, expected 125000; tolerant {tolerant}, certificate {stable}"),
    )
}

fn orthogonal() -> Outcome {
    let c = gen_orthogonal_circles(4, 3, 20).map_err(|e| e.to_string())?;
    let chains = count_chains(&c).map_err(|e| e.to_string())?;
    // independent enumeration over all 4-tuples in exact arithmetic
    let pts: Vec<Vec<Rational>> = c.layer(0).iter().map(|p| p.exact_coords().unwrap().to_vec()).collect();
    let d2 = |a: &[Rational], b: &[Rational]| -> Rational { a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum() };
    let one = int(1);
    let m = pts.len();
    let unit: Vec<Vec<bool>> = pts.iter().map(|a| pts.iter().map(|b| d2(a, b) == one).collect()).collect();
    let mut brute = 0u64;
    for a in 0..m {
        for b in 0..m {
            for c2 in 0..m {
                for d in 0..m {
                    let t = [a, b, c2, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| t[i] != t[j]));
                    if distinct && (0..3).all(|i| unit[t[i]][t[i + 1]]) {
                        brute += 1;
                    }
                }
            }
        }
    }
    check(
        chains == BigUint::from(16_200u32) && brute == 16_200,
        format!("{chains} chains, brute force {brute}, expected 16200"),
    )
}

fn planar_fits() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for k in [3, 5] {
        let rep = run_experiment(&ExperimentConfig::new(ConstructionId::Planar, k, vec![16, 32, 64, 128]))
            .map_err(|e| e.to_string())?;
        let slope = rep.fit.as_ref().map_or(f64::NAN, |f| f.slope);
        ok &= rep.verdict() == Some(true);
        detail.push(format!("k={k} slope {slope:.4} vs {}", (k + 1) / 3 + 1));
    }
    check(ok, detail.join(", "))
}

fn k1mod3() -> Outcome {
    let c = gen_planar_k1mod3(4, 64, 0.5, 1).map_err(|e| e.to_string())?;
    let chains = count_chains(&c.config).map_err(|e| e.to_string())?;
    let floor = BigUint::from(64u32) * BigUint::from(c.split.preserved);
    check(
        chains >= floor,
        format!("{chains} chains >= 64 * {} preserved = {floor}", c.split.preserved),
    )
}

fn split() -> Outcome {
    let grid = gen_unit_rich_grid(400).map_err(|e| e.to_string())?;
    let s = split_and_translate(&grid.points, &grid.points, &int(1), &int(1), 7).map_err(|e| e.to_string())?;
    let diam_ok = match s.x2.diameter2() {
        Scalar::Exact(d) => d <= int(1),
        Scalar::Float(_) => false,
    };
    let floor_ok = s.preserved * 968 >= s.original;
    check(
        diam_ok && floor_ok,
        format!(
            "diam <= 1: {diam_ok}; preserved {} vs E/968 = {}/968",
            s.preserved, s.original
        ),
    )
}

fn richness_identity() -> Outcome {
    let mut r = rng(2024);
    let mut rows = 0;
    for trial in 0..20 {
        let p = exact_set(&random_points(&mut r, 200, 40));
        let q = exact_set(&random_points(&mut r, 200, 40));
        let d2 = int([25, 65, 85, 125][trial % 4]);
        let rep = check_richness_bound(&p, &q, &d2, Mode::Exact).map_err(|e| e.to_string())?;
        if !rep.holds {
            return Err(format!("trial {trial} violates the bound"));
        }
        rows += rep.rows.len();
    }
    Ok(format!("20 pairs, {rows} realized richness values"))
}

fn covering() -> Outcome {
    let mut r = rng(77);
    let eps = ratio(1, 2);
    let mut seqs = 0;
    for trial in 0..10 {
        let raw = random_raw(&mut r, 3, 5);
        let config = raw.to_config();
        let cov = stable_covering(&config, &eps, DEFAULT_NODE_LIMIT).map_err(|e| e.to_string())?;
        let bound = cov.length_bound(config.k());
        if let Some(s) = cov.sequences.iter().find(|s| Rational::from_integer(s.len().into()) > bound) {
            return Err(format!("trial {trial}: sequence of length {} exceeds the bound", s.len()));
        }
        let mut union = HashSet::new();
        for s in &cov.sequences {
            for_each_chain(&config.restricted(&s.class), |t| {
                union.insert(t.iter().zip(&s.class).map(|(&i, c)| c[i]).collect::<Vec<_>>());
            })
            .map_err(|e| e.to_string())?;
        }
        if union != raw.chains() {
            return Err(format!("trial {trial}: class chains differ from the chains"));
        }
        seqs += cov.sequences.len();
    }
    Ok(format!("10 configs, {seqs} sequences"))
}

fn oracle() -> Outcome {
    let mut r = rng(9);
    for trial in 0..50 {
        let raw = random_raw(&mut r, 4, 6);
        let config = raw.to_config();
        let chains = count_chains(&config).map_err(|e| e.to_string())?;
        let walks = count_walks(&config).map_err(|e| e.to_string())?;
        let (bc, bw) = (raw.chains().len() as u64, raw.walk_count());
        if chains != BigUint::from(bc) || walks != BigUint::from(bw) {
            return Err(format!("trial {trial}: chains {chains}/{bc}, walks {walks}/{bw}"));
        }
    }
    Ok("50 configs agree".into())
}

fn peel() -> Outcome {
    let grid = gen_unit_rich_grid(400).map_err(|e| e.to_string())?;
    let p = peel_min_degree(&grid.points, &grid.popular_d2, Mode::Exact).map_err(|e| e.to_string())?;
    check(
        !p.core.is_empty() && p.meets_threshold(),
        format!(
            "core {} points, min degree {} vs E0/(2N) = {}/{}",
            p.core.len(),
            p.min_degree,
            p.initial_edges,
            2 * p.original_size
        ),
    )
}

fn determinism() -> Outcome {
    let mut cfg = ExperimentConfig::new(ConstructionId::PlanarK1Mod3, 4, vec![16, 25, 36]);
    cfg.seed = 5;
    let a = run_experiment(&cfg).map_err(|e| e.to_string())?.csv();
    let b = run_experiment(&cfg).map_err(|e| e.to_string())?.csv();
    check(a == b, format!("{} CSV bytes, identical: {}", a.len(), a == b))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 11] = [
        ("planar k=2 n=100 closed form", 5, planar_k2),
        ("3d even k=4 n=50 closed form", 10, even_3d),
        ("orthogonal circles k=3 n=20 vs brute force", 5, orthogonal),
        ("planar exponent fits k=3,5", 60, planar_fits),
        ("k=4 split-base floor", 30, k1mod3),
        ("split of the 400-point grid", 10, split),
        ("richness identity", 10, richness_identity),
        ("stable covering", 30, covering),
        ("walk and chain oracle", 60, oracle),
        ("min-degree peeling", 5, peel),
        ("CSV determinism", 60, determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*budget);
        let (ok, detail) = match outcome {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        failed += !ok as usize;
        println!(
            "{} {:>2} {name}: {detail} [{:.2}s of {budget}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            took.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
