use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::constructions::{
    alternating_chain_count, gen_3d_even, gen_3d_odd_regular, gen_3d_odd_sphere,
    gen_orthogonal_circles, gen_planar_chain, gen_planar_k1mod3, gen_star, gen_t_l3,
    planar_chain_floor, CircleBouquet, SplitPair, TreeConstruction, Variant,
};
use crate::error::{Error, Result};
use crate::geometry::{format_rational, int, ratio, to_f64, Rational};
use crate::layered::{
    build_adjacency, count_chains, count_incidences, count_tree_embeddings,
    count_tree_homomorphisms, count_walks_adj, LayeredConfig,
};

/// Generators the harness can sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstructionId {
    Planar,
    PlanarK1Mod3,
    Even3d,
    OddSphere3d,
    OddRegular3d,
    Orthogonal,
    Star,
    Tl3Joints,
    Tl3Center,
}

impl ConstructionId {
    pub const ALL: [ConstructionId; 9] = [
        ConstructionId::Planar,
        ConstructionId::PlanarK1Mod3,
        ConstructionId::Even3d,
        ConstructionId::OddSphere3d,
        ConstructionId::OddRegular3d,
        ConstructionId::Orthogonal,
        ConstructionId::Star,
        ConstructionId::Tl3Joints,
        ConstructionId::Tl3Center,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstructionId::Planar => "planar",
            ConstructionId::PlanarK1Mod3 => "planar-k1mod3",
            ConstructionId::Even3d => "3d-even",
            ConstructionId::OddSphere3d => "3d-odd-sphere",
            ConstructionId::OddRegular3d => "3d-odd-regular",
            ConstructionId::Orthogonal => "orthogonal",
            ConstructionId::Star => "star",
            ConstructionId::Tl3Joints => "tl3-joints",
            ConstructionId::Tl3Center => "tl3-center",
        }
    }

    /// Exponent of `n` the count is expected to grow with, treating the
    /// planar grid's incidence count as `n^(1+o(1))` and the cubic grid's as
    /// `n^(4/3+o(1))`.
    pub fn theory_exponent(self, k: usize) -> Rational {
        let k = k as i64;
        match self {
            ConstructionId::Planar => int((k + 1) / 3 + 1),
            ConstructionId::PlanarK1Mod3 => ratio(k - 1, 3) + int(1),
            ConstructionId::Even3d => int(k / 2 + 1),
            ConstructionId::OddSphere3d => int((k - 1) / 2 + 1),
            ConstructionId::OddRegular3d => int(1) + ratio(k, 3),
            ConstructionId::Orthogonal => int(k + 1),
            ConstructionId::Star | ConstructionId::Tl3Center => int(k),
            ConstructionId::Tl3Joints => int(k + 1),
        }
    }
}

impl std::fmt::Display for ConstructionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ConstructionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConstructionId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = ConstructionId::ALL.iter().map(|c| c.name()).collect();
                Error::Construction(format!(
                    "unknown construction `{s}` (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// Parameters shared by every generator. For tree constructions `k` is the
/// number of arms `l`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenParams {
    pub id: ConstructionId,
    pub k: usize,
    pub n: usize,
    pub seed: u64,
    /// Diameter bound for the last layer of planar generators.
    pub eps: f64,
}

#[derive(Clone, Debug)]
pub enum Shape {
    Chain(LayeredConfig),
    Tree(TreeConstruction),
}

/// A generated instance with the counts it promises.
#[derive(Clone, Debug)]
pub struct Built {
    pub shape: Shape,
    /// Guaranteed lower bound.
    pub floor: Option<BigUint>,
    /// Exact count, where the construction pins it down.
    pub exact: Option<BigUint>,
    pub split: Option<SplitPair>,
}

pub fn build(p: &GenParams) -> Result<Built> {
    let ones = vec![int(1); p.k];
    let chain = |config, floor, exact| Built {
        shape: Shape::Chain(config),
        floor,
        exact,
        split: None,
    };
    Ok(match p.id {
        ConstructionId::Planar => {
            let floor = planar_chain_floor(p.k, p.n);
            let exact = (p.k == 0 || p.k == 2).then(|| floor.clone());
            chain(
                gen_planar_chain(p.k, &ones, p.n, p.eps)?,
                Some(floor),
                exact,
            )
        }
        ConstructionId::PlanarK1Mod3 => {
            let c = gen_planar_k1mod3(p.k, p.n, p.eps, p.seed)?;
            Built {
                shape: Shape::Chain(c.config),
                floor: Some(c.floor),
                exact: None,
                split: Some(c.split),
            }
        }
        ConstructionId::Even3d => {
            let exact = BigUint::from(p.n).pow((p.k / 2 + 1) as u32);
            chain(
                gen_3d_even(p.k, &ones, p.n)?,
                Some(exact.clone()),
                Some(exact),
            )
        }
        ConstructionId::OddSphere3d => {
            let c = gen_3d_odd_sphere(p.k, p.n, &CircleBouquet::default())?;
            chain(c.config, Some(c.floor), None)
        }
        ConstructionId::OddRegular3d => {
            let c = gen_3d_odd_regular(p.k, p.n)?;
            chain(c.config, c.floor, None)
        }
        ConstructionId::Orthogonal => {
            let exact = alternating_chain_count(p.n / 2, p.n / 2, p.k);
            chain(
                gen_orthogonal_circles(4, p.k, p.n)?,
                Some(exact.clone()),
                Some(exact),
            )
        }
        ConstructionId::Star => {
            let c = gen_star(p.k, p.n)?;
            let floor = c.floor.clone();
            Built {
                shape: Shape::Tree(c),
                floor: Some(floor.clone()),
                exact: Some(floor),
                split: None,
            }
        }
        ConstructionId::Tl3Joints | ConstructionId::Tl3Center => {
            let variant = if p.id == ConstructionId::Tl3Joints {
                Variant::JointsFixed
            } else {
                Variant::CenterFixed
            };
            let t = gen_t_l3(p.k, p.n, variant, p.seed)?;
            let floor = t.construction.floor.clone();
            Built {
                shape: Shape::Tree(t.construction),
                floor: Some(floor),
                exact: None,
                split: t.split,
            }
        }
    })
}

/// Chains (or tree embeddings), walks (or homomorphisms) and the total
/// number of incidences along the chain or tree edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counts {
    pub chains: BigUint,
    pub walks: BigUint,
    pub incidences: u64,
}

pub fn count_built(built: &Built) -> Result<Counts> {
    match &built.shape {
        Shape::Chain(config) => {
            let adj = build_adjacency(config)?;
            Ok(Counts {
                chains: count_chains(config)?,
                walks: count_walks_adj(&adj),
                incidences: adj.total_edges(),
            })
        }
        Shape::Tree(t) => {
            let mut incidences = 0;
            for e in t.tree.edges() {
                incidences += count_incidences(&t.layers[e.a], &t.layers[e.b], &e.d2, t.mode)?;
            }
            Ok(Counts {
                chains: count_tree_embeddings(&t.layers, &t.tree, t.mode)?,
                walks: count_tree_homomorphisms(&t.layers, &t.tree, t.mode)?,
                incidences,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Least squares line through `(ln n, ln count)`. Rows with a zero count
/// are skipped; fewer than 3 usable rows is an error.
pub fn fit_exponent(rows: &[(usize, BigUint)]) -> Result<Fit> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|(n, c)| *n > 0 && !c.is_zero())
        .map(|(n, c)| ((*n as f64).ln(), ln_big(c)))
        .collect();
    if pts.len() < 3 {
        return Err(Error::TooFewRows(pts.len()));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::EmptyRange("all rows share one n".into()));
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Ok(Fit {
        slope,
        intercept: my - slope * mx,
        r2,
    })
}

/// Natural log of a big integer, accurate well past the `f64` range.
fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 900;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub id: ConstructionId,
    pub k: usize,
    pub ns: Vec<usize>,
    pub seed: u64,
    pub eps: f64,
    /// Largest accepted `|slope - theory|`.
    pub slope_tolerance: f64,
    /// Record wall time; otherwise the CSV column reads `NA`.
    pub timings: bool,
}

impl ExperimentConfig {
    pub fn new(id: ConstructionId, k: usize, ns: Vec<usize>) -> Self {
        ExperimentConfig {
            id,
            k,
            ns,
            seed: 0,
            eps: 0.5,
            slope_tolerance: 0.2,
            timings: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentRow {
    pub n: usize,
    pub counts: Counts,
    pub seconds: Option<f64>,
    /// Whether the count reaches the construction's guaranteed floor.
    pub meets_floor: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub id: ConstructionId,
    pub k: usize,
    pub rows: Vec<ExperimentRow>,
    /// `(n, message)` for every failed generator call.
    pub failures: Vec<(usize, String)>,
    pub fit: Option<Fit>,
    /// Why the fit is missing, when it is.
    pub fit_notice: Option<String>,
    pub theory: Rational,
    pub slope_tolerance: f64,
}

impl ExperimentReport {
    /// `Some(true)` when the fitted slope is within tolerance of the theory.
    pub fn verdict(&self) -> Option<bool> {
        self.fit
            .as_ref()
            .map(|f| (f.slope - to_f64(&self.theory)).abs() <= self.slope_tolerance)
    }

    pub fn passed(&self) -> bool {
        self.verdict() == Some(true) && self.rows.iter().all(|r| r.meets_floor != Some(false))
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("construction,k,n,chains,walks,incidences,seconds\n");
        for r in &self.rows {
            let secs = r
                .seconds
                .map_or_else(|| "NA".to_string(), |s| format!("{s:.6}"));
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                self.id, self.k, r.n, r.counts.chains, r.counts.walks, r.counts.incidences, secs
            )
            .unwrap();
        }
        out
    }

    /// Human-readable summary with one verdict line.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for (n, msg) in &self.failures {
            writeln!(out, "n={n}: generator failed: {msg}").unwrap();
        }
        let theory = format_rational(&self.theory);
        match (&self.fit, &self.fit_notice) {
            (Some(f), _) => {
                let verdict = if self.passed() { "PASS" } else { "FAIL" };
                writeln!(
                    out,
                    "{verdict} {} k={}: slope {:.4} (intercept {:.4}, r2 {:.6}) vs theory {theory} +- {}",
                    self.id, self.k, f.slope, f.intercept, f.r2, self.slope_tolerance
                )
                .unwrap();
            }
            (None, notice) => {
                writeln!(
                    out,
                    "fit skipped for {} k={}: {}",
                    self.id,
                    self.k,
                    notice.as_deref().unwrap_or("no rows")
                )
                .unwrap();
            }
        }
        out
    }

    /// Log-log scatter of the counts with the fitted line, as standalone SVG.
    pub fn svg(&self) -> String {
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|r| !r.counts.chains.is_zero())
            .map(|r| ((r.n as f64).ln(), ln_big(&r.counts.chains)))
            .collect();
        let (w, h, pad) = (480.0, 360.0, 40.0);
        let mut out = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
             <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
        );
        if pts.is_empty() {
            out.push_str("</svg>\n");
            return out;
        }
        let span = |f: fn(&(f64, f64)) -> f64| {
            let lo = pts.iter().map(f).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
            if hi > lo {
                (lo, hi)
            } else {
                (lo - 1.0, hi + 1.0)
            }
        };
        let (x0, x1) = span(|p| p.0);
        let (y0, y1) = span(|p| p.1);
        let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
        let sy = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);
        writeln!(
            out,
            "<text x=\"{pad}\" y=\"20\" font-family=\"sans-serif\" font-size=\"12\">{} k={}: ln chains vs ln n</text>",
            self.id, self.k
        )
        .unwrap();
        if let Some(f) = &self.fit {
            writeln!(
                out,
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"gray\"/>",
                sx(x0),
                sy(f.intercept + f.slope * x0),
                sx(x1),
                sy(f.intercept + f.slope * x1)
            )
            .unwrap();
        }
        for (x, y) in &pts {
            writeln!(
                out,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"black\"/>",
                sx(*x),
                sy(*y)
            )
            .unwrap();
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Generates and counts every `n` (in parallel on the current rayon pool),
/// then fits the exponent. Rows come out sorted by `n`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut ns = cfg.ns.clone();
    ns.sort_unstable();
    ns.dedup();
    if ns.is_empty() {
        return Err(Error::EmptyRange("no values of n".into()));
    }
    let results: Vec<(usize, Result<ExperimentRow>)> = ns
        .par_iter()
        .map(|&n| {
            let params = GenParams {
                id: cfg.id,
                k: cfg.k,
                n,
                seed: cfg.seed,
                eps: cfg.eps,
            };
            let row = (|| {
                let start = Instant::now();
                let built = build(&params)?;
                let counts = count_built(&built)?;
                let seconds = cfg.timings.then(|| start.elapsed().as_secs_f64());
                let meets_floor = built.floor.as_ref().map(|f| &counts.chains >= f);
                Ok(ExperimentRow {
                    n,
                    counts,
                    seconds,
                    meets_floor,
                })
            })();
            (n, row)
        })
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (n, r) in results {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => {
                log::warn!("{} k={} n={n}: {e}", cfg.id, cfg.k);
                failures.push((n, e.to_string()));
            }
        }
    }
    let data: Vec<(usize, BigUint)> = rows
        .iter()
        .map(|r| (r.n, r.counts.chains.clone()))
        .collect();
    let (fit, fit_notice) = match fit_exponent(&data) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(ExperimentReport {
        id: cfg.id,
        k: cfg.k,
        rows,
        failures,
        fit,
        fit_notice,
        theory: cfg.id.theory_exponent(cfg.k),
        slope_tolerance: cfg.slope_tolerance,
    })
}
