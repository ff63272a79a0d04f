use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use explore_core::harness::{render_svg, run_algorithm, run_experiment, scaling_check, AlgorithmId, AlgorithmSpec, CoverageConfig, Driver, ExperimentConfig, SEED_ENV};
use explore_core::terrains::{generate, Family};
use explore_core::{Point, Terrain};

#[derive(Parser)]
#[command(name = "explore", version, about = "Terrain exploration simulator")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    Grid,
    Comb,
    Empty,
    Cfat,
}

#[derive(clap::Args, Clone)]
struct FamilyArgs {
    #[arg(long)]
    family: FamilyName,
    #[arg(long, default_value_t = 16)]
    k: usize,
    #[arg(long = "D", default_value_t = 10.0)]
    d: f64,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    #[arg(long, default_value_t = 5)]
    m: usize,
    #[arg(long, default_value_t = 2.0)]
    depth: f64,
    #[arg(long, default_value_t = 0.1)]
    width: f64,
    #[arg(long, default_value_t = 2.0)]
    side: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3.0)]
    c: f64,
    #[arg(long, default_value_t = 8)]
    n: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a batch described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Generate a terrain JSON and its `.meta.json` sidecar.
    Gen {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one algorithm on one terrain file.
    One {
        #[arg(long)]
        terrain: PathBuf,
        #[arg(long)]
        algo: String,
        #[arg(long = "F")]
        f: Option<f64>,
        #[arg(long = "A")]
        area: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        delta: Option<f64>,
        /// Start point as `x,y`; defaults to the sidecar's start.
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        no_coverage: bool,
    },
    /// Fit a log-log slope of length against a family parameter.
    Scale {
        #[command(flatten)]
        fam: FamilyArgs,
        /// Comma-separated values of the driven parameter (k, m, side or n).
        #[arg(long, value_delimiter = ',')]
        ladder: Vec<f64>,
        #[arg(long)]
        algo: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn env_seed() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => Ok(Some(v.trim().parse().with_context(|| format!("{SEED_ENV}={v} is not an integer"))?)),
        Err(_) => Ok(None),
    }
}

fn family(a: &FamilyArgs, driven: Option<f64>) -> Result<Family> {
    let int = |x: f64| -> Result<usize> {
        if x < 0.0 || x.fract() != 0.0 {
            bail!("ladder value {x} is not a non-negative integer");
        }
        Ok(x as usize)
    };
    Ok(match a.family {
        FamilyName::Grid => Family::GridObstacles { k: driven.map(int).transpose()?.unwrap_or(a.k), d: a.d, eps: a.eps },
        FamilyName::Comb => Family::Comb { m: driven.map(int).transpose()?.unwrap_or(a.m), depth: a.depth, width: a.width },
        FamilyName::Empty => Family::EmptySquare { side: driven.unwrap_or(a.side) },
        FamilyName::Cfat => Family::CfatRandom { seed: env_seed()?.unwrap_or(a.seed), c: a.c, n: driven.map(int).transpose()?.unwrap_or(a.n) },
    })
}

fn algorithm(algo: &str) -> Result<AlgorithmSpec> {
    Ok(AlgorithmSpec::new(AlgorithmId::parse(algo)?))
}

fn sidecar_path(terrain: &Path) -> PathBuf {
    terrain.with_extension("meta.json")
}

fn parse_point(s: &str) -> Result<Point> {
    let (x, y) = s.split_once(',').ok_or_else(|| anyhow!("start must be `x,y`, got {s:?}"))?;
    Ok(Point::new(x.trim().parse()?, y.trim().parse()?))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn cmd_run(config: &Path) -> Result<bool> {
    let mut cfg = ExperimentConfig::load(config)?;
    cfg.apply_seed_env()?;
    let base = config.parent().unwrap_or(Path::new("."));
    let batch = run_experiment(&cfg, base)?;
    for r in &batch.runs {
        match &r.report {
            Ok(rep) => {
                let failed: Vec<&str> = rep.verdicts.iter().filter(|v| v.failed()).map(|v| v.name.as_str()).collect();
                let status = if failed.is_empty() { "ok".to_string() } else { format!("FAILED {}", failed.join(",")) };
                println!("{:<24} total={:.4} {status}", r.name, rep.total_length);
            }
            Err(e) => println!("{:<24} ERROR {e}", r.name),
        }
    }
    println!("csv: {}", batch.csv_path.display());
    Ok(batch.success)
}

fn cmd_gen(fam: &FamilyArgs, out: &Path) -> Result<bool> {
    let g = generate(&family(fam, None)?)?;
    g.terrain.save(out)?;
    let mut side = serde_json::to_value(g.sidecar())?;
    side["start"] = serde_json::to_value(g.start)?;
    write(&sidecar_path(out), &serde_json::to_string_pretty(&side)?)?;
    let m = g.terrain.metrics();
    println!("P={:.6} A={:.6} D={:.6} k={}", m.perimeter, m.area, m.diameter, m.k);
    Ok(true)
}

fn sidecar_start(terrain: &Path) -> Result<Point> {
    let path = sidecar_path(terrain);
    let text = std::fs::read_to_string(&path).with_context(|| format!("no --start given and no sidecar at {}", path.display()))?;
    let v: serde_json::Value = serde_json::from_str(&text)?;
    let start = v.get("start").ok_or_else(|| anyhow!("sidecar {} has no start", path.display()))?;
    Ok(serde_json::from_value(start.clone())?)
}

fn cmd_one(
    terrain_path: &Path,
    spec: AlgorithmSpec,
    start: Option<&str>,
    report: &Path,
    svg: Option<&Path>,
    coverage: bool,
) -> Result<bool> {
    let terrain = Terrain::load(terrain_path)?;
    let start = match start {
        Some(s) => parse_point(s)?,
        None => sidecar_start(terrain_path)?,
    };
    let cov = CoverageConfig { enabled: coverage, ..CoverageConfig::default() };
    let out = run_algorithm(&terrain, start, &spec, &cov)?;
    write(report, &serde_json::to_string_pretty(&out.report)?)?;
    if let Some(svg) = svg {
        render_svg(&terrain, &out.trajectory, svg)?;
    }
    println!("total={:.6}", out.report.total_length);
    for v in &out.report.verdicts {
        let tag = if !v.applicable { "n/a" } else if v.pass { "pass" } else { "FAIL" };
        println!("  {:<20} {:>14.6} <= {:<14.6} {tag}", v.name, v.lhs, v.rhs);
    }
    if let Some(c) = &out.report.coverage {
        println!("  coverage {:.6} ({}/{})", c.fraction, c.explored, c.sampled);
    }
    Ok(out.report.all_pass())
}

fn cmd_scale(fam: &FamilyArgs, ladder: &[f64], algo: &str, out: Option<&Path>) -> Result<bool> {
    let families = ladder.iter().map(|&x| family(fam, Some(x))).collect::<Result<Vec<_>>>()?;
    let driver = match fam.family {
        FamilyName::Grid | FamilyName::Cfat => Driver::K,
        FamilyName::Comb => Driver::Perimeter,
        FamilyName::Empty => Driver::Area,
    };
    let summary = scaling_check(&families, driver, &algorithm(algo)?)?;
    let json = serde_json::to_string_pretty(&summary)?;
    match out {
        Some(p) => write(p, &json)?,
        None => println!("{json}"),
    }
    eprintln!("slope={:.4} residual={:.4}", summary.slope, summary.residual);
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Run { config } => cmd_run(config),
        Cmd::Gen { fam, out } => cmd_gen(fam, out),
        Cmd::One { terrain, algo, f, area, k, delta, start, report, svg, no_coverage } => algorithm(algo).and_then(|mut spec| {
            spec.f = *f;
            spec.area = *area;
            spec.k = *k;
            spec.delta = *delta;
            cmd_one(terrain, spec, start.as_deref(), report, svg.as_deref(), !no_coverage)
        }),
        Cmd::Scale { fam, ladder, algo, out } => cmd_scale(fam, ladder, algo, out.as_deref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
