//! Batch runner: a JSON config of runs in, per-run reports, an aggregate CSV
//! and optional SVGs out.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{run_algorithm, AlgorithmSpec, CoverageConfig, ExplorationReport};
use super::svg::render_svg;
use super::HarnessError;
use crate::terrains::{generate, Family};
use crate::trajectory::SectionKind;
use crate::{Point, Terrain};

/// Environment variable replacing the config's base seed.
pub const SEED_ENV: &str = "EXPLORE_SEED";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TerrainSource {
    File { path: PathBuf },
    Generated(Family),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub terrain: TerrainSource,
    /// Defaults to the generator's start point; required for file terrains.
    #[serde(default)]
    pub start: Option<Point>,
    pub algorithm: AlgorithmSpec,
    #[serde(default)]
    pub svg: bool,
    #[serde(default)]
    pub coverage: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Added to the seed of every random family; replaced by `EXPLORE_SEED` when set.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_csv")]
    pub csv: String,
    #[serde(default)]
    pub coverage: CoverageConfig,
    /// When true, failed verdicts do not make the batch fail.
    #[serde(default)]
    pub warn_only: bool,
    pub runs: Vec<RunConfig>,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_csv() -> String {
    "runs.csv".to_string()
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(path.display().to_string(), e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| HarnessError::Json(e.to_string()))
    }

    /// Applies `EXPLORE_SEED` if it is set to an integer.
    pub fn apply_seed_env(&mut self) -> Result<(), HarnessError> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.seed = v.trim().parse().map_err(|_| HarnessError::BadSeed(v))?;
        }
        Ok(())
    }
}

/// One CSV row; everything but wall time, so reruns give identical files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub name: String,
    pub family: String,
    pub params: String,
    #[serde(rename = "P")]
    pub perimeter: f64,
    #[serde(rename = "A")]
    pub area: f64,
    #[serde(rename = "D")]
    pub diameter: f64,
    pub k: usize,
    pub algorithm: String,
    #[serde(rename = "F")]
    pub f: Option<f64>,
    pub total: f64,
    pub initial_walk: f64,
    pub recognition: f64,
    pub exploration: f64,
    pub approach: f64,
    pub approach_return: f64,
    pub cell_tour: f64,
    pub stage_return: f64,
    pub stages: usize,
    pub coverage: Option<f64>,
    pub failed_verdicts: String,
    pub pass: bool,
    pub error: String,
}

/// Result of one configured run.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub name: String,
    pub family: String,
    pub params: String,
    pub report: Result<ExplorationReport, String>,
}

#[derive(Clone, Debug)]
pub struct BatchResult {
    pub runs: Vec<RunResult>,
    pub csv_path: PathBuf,
    /// No run errored and, unless warn-only, no verdict failed.
    pub success: bool,
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn terrain_for(run: &RunConfig, seed: u64, base: &Path) -> Result<(Terrain, Point, String, String), HarnessError> {
    match &run.terrain {
        TerrainSource::File { path } => {
            let path = resolve(base, path);
            let t = Terrain::load(&path)?;
            let start = run.start.ok_or_else(|| HarnessError::MissingStart(path.display().to_string()))?;
            Ok((t, start, "file".to_string(), path.display().to_string()))
        }
        TerrainSource::Generated(fam) => {
            let fam = match fam.clone() {
                Family::CfatRandom { seed: s, c, n } => Family::CfatRandom { seed: s.wrapping_add(seed), c, n },
                other => other,
            };
            let g = generate(&fam)?;
            let params = serde_json::to_string(&fam).map_err(|e| HarnessError::Json(e.to_string()))?;
            Ok((g.terrain, run.start.unwrap_or(g.start), fam.name().to_string(), params))
        }
    }
}

fn row(r: &RunResult) -> CsvRow {
    let mut row = CsvRow {
        name: r.name.clone(),
        family: r.family.clone(),
        params: r.params.clone(),
        perimeter: 0.0,
        area: 0.0,
        diameter: 0.0,
        k: 0,
        algorithm: String::new(),
        f: None,
        total: 0.0,
        initial_walk: 0.0,
        recognition: 0.0,
        exploration: 0.0,
        approach: 0.0,
        approach_return: 0.0,
        cell_tour: 0.0,
        stage_return: 0.0,
        stages: 0,
        coverage: None,
        failed_verdicts: String::new(),
        pass: false,
        error: String::new(),
    };
    match &r.report {
        Err(e) => row.error = e.clone(),
        Ok(rep) => {
            row.perimeter = rep.metrics.perimeter;
            row.area = rep.metrics.area;
            row.diameter = rep.metrics.diameter;
            row.k = rep.metrics.k;
            row.algorithm = rep.algorithm.id.name().to_string();
            row.f = rep.final_f.or(rep.algorithm.f);
            row.total = rep.total_length;
            row.initial_walk = rep.section(SectionKind::InitialWalk);
            row.recognition = rep.section(SectionKind::Recognition);
            row.exploration = rep.section(SectionKind::Exploration);
            row.approach = rep.section(SectionKind::Approach);
            row.approach_return = rep.section(SectionKind::ApproachReturn);
            row.cell_tour = rep.section(SectionKind::CellTour);
            row.stage_return = rep.section(SectionKind::StageReturn);
            row.stages = rep.stages.len();
            row.coverage = rep.coverage.as_ref().map(|c| c.fraction);
            row.failed_verdicts = rep.verdicts.iter().filter(|v| v.failed()).map(|v| v.name.as_str()).collect::<Vec<_>>().join(";");
            row.pass = rep.all_pass();
        }
    }
    row
}

/// Runs every configured run (in parallel, results kept in config order) and
/// writes `<output_dir>/<name>.json`, optional `<name>.svg`, and the CSV.
/// Relative paths are resolved against `base`.
pub fn run_experiment(config: &ExperimentConfig, base: &Path) -> Result<BatchResult, HarnessError> {
    let out_dir = resolve(base, &config.output_dir);
    std::fs::create_dir_all(&out_dir).map_err(|e| HarnessError::Io(out_dir.display().to_string(), e.to_string()))?;

    let runs: Vec<RunResult> = config
        .runs
        .par_iter()
        .enumerate()
        .map(|(i, run)| {
            let name = run.name.clone().unwrap_or_else(|| format!("run{:03}-{}", i, run.algorithm.id.name()));
            let prepared = terrain_for(run, config.seed, base);
            let (family, params) = match &prepared {
                Ok((_, _, f, p)) => (f.clone(), p.clone()),
                Err(_) => (String::new(), String::new()),
            };
            let report = prepared.and_then(|(terrain, start, _, _)| {
                let mut cov = config.coverage;
                if let Some(on) = run.coverage {
                    cov.enabled = on;
                }
                let out = run_algorithm(&terrain, start, &run.algorithm, &cov)?;
                let json = serde_json::to_string_pretty(&out.report).map_err(|e| HarnessError::Json(e.to_string()))?;
                let path = out_dir.join(format!("{name}.json"));
                std::fs::write(&path, json).map_err(|e| HarnessError::Io(path.display().to_string(), e.to_string()))?;
                if run.svg {
                    render_svg(&terrain, &out.trajectory, &out_dir.join(format!("{name}.svg")))?;
                }
                Ok(out.report)
            });
            RunResult { name, family, params, report: report.map_err(|e| e.to_string()) }
        })
        .collect();

    let csv_path = out_dir.join(&config.csv);
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| HarnessError::Csv(e.to_string()))?;
    for r in &runs {
        w.serialize(row(r)).map_err(|e| HarnessError::Csv(e.to_string()))?;
    }
    w.flush().map_err(|e| HarnessError::Io(csv_path.display().to_string(), e.to_string()))?;

    let success = runs.iter().all(|r| match &r.report {
        Ok(rep) => config.warn_only || rep.all_pass(),
        Err(_) => false,
    });
    Ok(BatchResult { runs, csv_path, success })
}

/// Reads the CSV written by [`run_experiment`].
pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>, HarnessError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| HarnessError::Csv(e.to_string()))?;
    r.deserialize().map(|row| row.map_err(|e| HarnessError::Csv(e.to_string()))).collect()
}
