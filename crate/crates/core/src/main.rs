use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use chain_census::constructions::{gen_cube_grid, gen_unit_rich_grid};
use chain_census::geometry::{format_rational, parse_rational, to_f64, Mode, PointSet, Rational};
use chain_census::harness::{
    build, read_manifest, read_points, read_tree, run_experiment, verify, verify_covering,
    write_manifest, write_points, write_tree, ConstructionId, ExperimentConfig, GenParams, Shape,
    Target,
};
use chain_census::layered::{
    build_adjacency, count_chains, count_incidences, count_tree_embeddings,
    count_tree_homomorphisms, count_walks_adj, LayeredConfig,
};
use chain_census::richness::{dyadic_partition, rich_points, stable_covering, DEFAULT_NODE_LIMIT};
use chain_census::{Error, Result};

/// Count and construct distance-labeled chains and trees in point sets.
#[derive(Parser)]
#[command(name = "chain-census", version)]
struct Cli {
    /// Seed for randomized steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Diameter bound for planar generators, or the exponent step for
    /// richness commands (decimal or p/q).
    #[arg(long, global = true)]
    eps: Option<String>,
    /// Distance comparison: `exact` or `tol:<eps>`.
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; affects wall time only.
    #[arg(long, global = true, env = "CHAIN_CENSUS_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a construction as a manifest plus point files (`--out` names
    /// the manifest), or a grid as a single point file.
    Generate {
        /// A construction id, `grid` or `cube`.
        what: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Count chains and walks of a manifest.
    Count { manifest: PathBuf },
    /// Count embeddings and homomorphisms of a tree file.
    CountTree {
        tree: PathBuf,
        #[command(flatten)]
        layers: TreeLayers,
    },
    /// Count pairs of `p` x `q` at squared distance `d2`.
    Incidences {
        p: PathBuf,
        q: PathBuf,
        #[arg(long)]
        d2: String,
    },
    /// List the points of `target` that are `r`-rich toward `reference`, or
    /// their dyadic classes.
    Rich {
        target: PathBuf,
        reference: PathBuf,
        #[arg(long)]
        d2: String,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long)]
        dyadic: bool,
    },
    /// Enumerate the stable filtering sequences of a manifest.
    Decompose {
        manifest: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        limit: usize,
    },
    /// Sweep a construction over several `n` and fit the growth exponent.
    Experiment {
        construction: ConstructionId,
        #[arg(long)]
        k: usize,
        /// Comma-separated sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Largest accepted distance between fitted and expected slope.
        #[arg(long, default_value_t = 0.2)]
        tolerance: f64,
        /// Fill the `seconds` column.
        #[arg(long)]
        timings: bool,
        /// Also write a log-log scatter as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check a claim against a construction, a split or a manifest.
    Verify {
        /// closed-form, floor, covering or richness.
        claim: String,
        #[command(flatten)]
        target: VerifyTarget,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TreeLayers {
    /// One layer per tree vertex.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// A single set used for every vertex.
    #[arg(long)]
    points: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyTarget {
    #[arg(long, conflicts_with_all = ["manifest", "split"])]
    construction: Option<ConstructionId>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, conflicts_with = "split")]
    manifest: Option<PathBuf>,
    /// Split the grid with this many points against itself.
    #[arg(long)]
    split: Option<usize>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            log::warn!("could not size the thread pool: {e}");
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn mode(cli: &Cli) -> Result<Option<Mode>> {
    cli.mode.as_deref().map(str::parse).transpose()
}

fn eps_f64(cli: &Cli, default: f64) -> Result<f64> {
    Ok(cli
        .eps
        .as_deref()
        .map(parse_rational)
        .transpose()?
        .map_or(default, |r| to_f64(&r)))
}

fn eps_rational(cli: &Cli) -> Result<Rational> {
    cli.eps
        .as_deref()
        .map_or_else(|| parse_rational("1/2"), parse_rational)
}

/// Mode for point-file commands: the flag, else whatever the set's kind needs.
fn compare_mode(cli: &Cli, set: &PointSet) -> Result<Mode> {
    Ok(mode(cli)?.unwrap_or(match set.kind() {
        chain_census::geometry::ScalarKind::Exact => Mode::Exact,
        chain_census::geometry::ScalarKind::Float => Mode::tolerant(),
    }))
}

fn load_config(cli: &Cli, path: &Path) -> Result<LayeredConfig> {
    let config = read_manifest(path)?;
    match mode(cli)? {
        Some(Mode::Tolerant(eps)) if config.mode() != Mode::Tolerant(eps) => {
            config.to_tolerant(eps)
        }
        _ => Ok(config),
    }
}

fn out_path(cli: &Cli) -> Result<&Path> {
    cli.out
        .as_deref()
        .ok_or_else(|| Error::InvalidConfig("this command needs --out".into()))
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.cmd {
        Cmd::Generate { what, k, n } => {
            match what.as_str() {
                "grid" | "cube" => {
                    let g = if what == "grid" {
                        gen_unit_rich_grid(*n)?
                    } else {
                        gen_cube_grid(*n)?
                    };
                    log::info!(
                        "popular squared distance {} with {} pairs",
                        format_rational(&g.popular_d2),
                        g.pairs
                    );
                    match &cli.out {
                        Some(p) => write_points(p, &g.points)?,
                        None => emit(cli, &chain_census::harness::format_points(&g.points))?,
                    }
                    eprintln!("delta2 {}", format_rational(&g.popular_d2));
                }
                id => {
                    let params = GenParams {
                        id: id.parse()?,
                        k: *k,
                        n: *n,
                        seed: cli.seed,
                        eps: eps_f64(cli, 0.5)?,
                    };
                    let built = build(&params)?;
                    let path = out_path(cli)?;
                    let config = match &built.shape {
                        Shape::Chain(c) => c.clone(),
                        Shape::Tree(t) => {
                            write_tree(&path.with_extension("tree"), &t.tree)?;
                            t.as_config()?
                        }
                    };
                    write_manifest(path, &config)?;
                    eprintln!("{}", config.summary());
                    if let Some(f) = &built.floor {
                        eprintln!("guaranteed count {f}");
                    }
                }
            }
            Ok(true)
        }
        Cmd::Count { manifest } => {
            let config = load_config(cli, manifest)?;
            let adj = build_adjacency(&config)?;
            let chains = count_chains(&config)?;
            let text = format!(
                "chains {chains}\nwalks {}\nincidences {}\n",
                count_walks_adj(&adj),
                adj.total_edges()
            );
            emit(cli, &text)?;
            Ok(true)
        }
        Cmd::CountTree { tree, layers } => {
            let tree = read_tree(tree)?;
            let (sets, mode) = match (&layers.manifest, &layers.points) {
                (Some(m), _) => {
                    let c = load_config(cli, m)?;
                    let mode = c.mode();
                    (c.into_layers(), mode)
                }
                (None, Some(p)) => {
                    let set = read_points(p)?;
                    let mode = compare_mode(cli, &set)?;
                    (vec![set; tree.vertex_count()], mode)
                }
                (None, None) => unreachable!("clap requires one source"),
            };
            let text = format!(
                "embeddings {}\nhomomorphisms {}\n",
                count_tree_embeddings(&sets, &tree, mode)?,
                count_tree_homomorphisms(&sets, &tree, mode)?
            );
            emit(cli, &text)?;
            Ok(true)
        }
        Cmd::Incidences { p, q, d2 } => {
            let (p, q) = (read_points(p)?, read_points(q)?);
            let i = count_incidences(&p, &q, &parse_rational(d2)?, compare_mode(cli, &p)?)?;
            emit(cli, &format!("{i}\n"))?;
            Ok(true)
        }
        Cmd::Rich {
            target,
            reference,
            d2,
            r,
            dyadic,
        } => {
            let (t, reference) = (read_points(target)?, read_points(reference)?);
            let (d2, mode) = (parse_rational(d2)?, compare_mode(cli, &t)?);
            let mut text = String::new();
            if *dyadic {
                for c in dyadic_partition(&t, &reference, &d2, mode)? {
                    let pts: Vec<String> = c.points.iter().map(|i| (i + 1).to_string()).collect();
                    let hi = c.hi.map_or_else(|| "inf".to_string(), |h| h.to_string());
                    text.push_str(&format!(
                        "class {} [{}, {hi}) {}\n",
                        c.level,
                        c.lo,
                        pts.join(" ")
                    ));
                }
            } else {
                for i in rich_points(&t, &reference, &d2, *r, mode)? {
                    text.push_str(&format!("{}\n", i + 1));
                }
            }
            emit(cli, &text)?;
            Ok(true)
        }
        Cmd::Decompose { manifest, limit } => {
            let config = load_config(cli, manifest)?;
            let eps = eps_rational(cli)?;
            let cov = stable_covering(&config, &eps, *limit)?;
            let mut text = format!(
                "n {} eps {} sequences {} nodes {}\n",
                cov.n,
                format_rational(&eps),
                cov.sequences.len(),
                cov.nodes
            );
            for s in &cov.sequences {
                let gamma: Vec<String> = s
                    .gamma
                    .iter()
                    .map(|g| g.iter().map(format_rational).collect::<Vec<_>>().join(","))
                    .collect();
                let sizes: Vec<String> = s.class_sizes.iter().map(BigUint::to_string).collect();
                let class: Vec<String> = s.class.iter().map(|c| c.len().to_string()).collect();
                text.push_str(&format!(
                    "gamma ({}) sizes {} class [{}]\n",
                    gamma.join(") ("),
                    sizes.join(" "),
                    class.join(",")
                ));
            }
            emit(cli, &text)?;
            Ok(true)
        }
        Cmd::Experiment {
            construction,
            k,
            n,
            tolerance,
            timings,
            svg,
        } => {
            let mut cfg = ExperimentConfig::new(*construction, *k, n.clone());
            cfg.seed = cli.seed;
            cfg.eps = eps_f64(cli, 0.5)?;
            cfg.slope_tolerance = *tolerance;
            cfg.timings = *timings;
            let report = run_experiment(&cfg)?;
            emit(cli, &report.csv())?;
            if let Some(path) = svg {
                fs::write(path, report.svg())?;
            }
            eprint!("{}", report.summary());
            Ok(report.fit.is_none() || report.passed())
        }
        Cmd::Verify { claim, target } => {
            let claim = claim.parse()?;
            let report = if let Some(id) = target.construction {
                let n = target
                    .n
                    .ok_or_else(|| Error::InvalidConfig("--construction needs --n".into()))?;
                let t = Target::Generator(GenParams {
                    id,
                    k: target.k,
                    n,
                    seed: cli.seed,
                    eps: eps_f64(cli, 0.5)?,
                });
                verify(&t, claim)?
            } else if let Some(n) = target.split {
                let eps = cli
                    .eps
                    .as_deref()
                    .map_or_else(|| parse_rational("1"), parse_rational)?;
                verify(
                    &Target::Split {
                        n,
                        eps,
                        seed: cli.seed,
                    },
                    claim,
                )?
            } else if let Some(m) = &target.manifest {
                let config = load_config(cli, m)?;
                if claim == chain_census::harness::Claim::Covering {
                    verify_covering(&config, &eps_rational(cli)?)?
                } else {
                    verify(&Target::Config(config), claim)?
                }
            } else {
                return Err(Error::InvalidConfig(
                    "give --construction, --split or --manifest".into(),
                ));
            };
            emit(cli, &report.to_string())?;
            Ok(report.pass)
        }
    }
}
