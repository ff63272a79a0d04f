//! Running one algorithm on one terrain and summarizing it as a report with
//! bound verdicts.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::coverage::{coverage_oracle, CoverageResult};
use super::HarnessError;
use crate::explore::limited::{lim_exp_trav, CellStat, MAX_TILE_SIDE};
use crate::explore::staged::{let_a, let_k, let_unknown, ProbeRecord, StageRecord, StagedRun, StopReason};
use crate::explore::unlimited::explore_unlimited;
use crate::explore::{ApproachEvent, ExploreConfig};
use crate::trajectory::{SectionKind, Trajectory};
use crate::{Point, Terrain};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmId {
    Exptrav,
    Let,
    LetA,
    LetK,
    LetAuto,
}

impl AlgorithmId {
    pub fn name(self) -> &'static str {
        match self {
            AlgorithmId::Exptrav => "exptrav",
            AlgorithmId::Let => "let",
            AlgorithmId::LetA => "let-a",
            AlgorithmId::LetK => "let-k",
            AlgorithmId::LetAuto => "let-auto",
        }
    }

    pub fn parse(s: &str) -> Result<Self, HarnessError> {
        match s {
            "exptrav" => Ok(AlgorithmId::Exptrav),
            "let" => Ok(AlgorithmId::Let),
            "let-a" => Ok(AlgorithmId::LetA),
            "let-k" => Ok(AlgorithmId::LetK),
            "let-auto" => Ok(AlgorithmId::LetAuto),
            other => Err(HarnessError::UnknownAlgorithm(other.to_string())),
        }
    }

    /// Vision range used by the coverage oracle; `None` is unlimited.
    pub fn range(self) -> Option<f64> {
        match self {
            AlgorithmId::Exptrav => None,
            _ => Some(1.0),
        }
    }
}

/// Algorithm and its parameters. Missing knowledge (`A` for let-a, `k` for
/// let-k) is taken from the terrain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSpec {
    pub id: AlgorithmId,
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    pub f: Option<f64>,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub area: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

impl AlgorithmSpec {
    pub fn new(id: AlgorithmId) -> Self {
        Self { id, f: None, area: None, k: None, delta: None }
    }
}

/// Coverage oracle settings; `h = None` means `min(0.05, F/4)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageConfig {
    pub enabled: bool,
    pub h: Option<f64>,
    pub clearance: f64,
}

impl Default for CoverageConfig {
    fn default() -> Self {
        Self { enabled: true, h: None, clearance: 0.01 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
    /// False when the bound is outside its stated regime (small `P` or `A`);
    /// such verdicts are recorded but never fail a run.
    pub applicable: bool,
}

impl Verdict {
    fn le(name: &str, lhs: f64, rhs: f64, applicable: bool) -> Self {
        Self { name: name.to_string(), lhs, rhs, pass: lhs <= rhs, applicable }
    }

    /// Failed and applicable.
    pub fn failed(&self) -> bool {
        self.applicable && !self.pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TerrainMetrics {
    #[serde(rename = "P")]
    pub perimeter: f64,
    #[serde(rename = "A")]
    pub area: f64,
    #[serde(rename = "D")]
    pub diameter: f64,
    pub k: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadtreeSummary {
    pub non_terminal: usize,
    pub terminal: usize,
    pub diameter_sum: f64,
    pub root_diameter: f64,
    pub bijective: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub visited: usize,
    pub holes: usize,
    pub lemma_violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplorationReport {
    pub metrics: TerrainMetrics,
    pub algorithm: AlgorithmSpec,
    pub start: Point,
    /// Detection step (unlimited runs) or the default divisor rule (limited runs).
    pub delta: Option<f64>,
    pub sections: BTreeMap<String, f64>,
    pub total_length: f64,
    /// Length produced by the boundary traversal itself, without the initial walk.
    pub exptrav_length: f64,
    pub exp_trav_calls: usize,
    pub stages: Vec<StageRecord>,
    pub probes: Vec<ProbeRecord>,
    pub approaches: Vec<ApproachEvent>,
    pub quadtree: Option<QuadtreeSummary>,
    pub cells: CellSummary,
    /// Tile side and `sum sqrt(k_T)` of the completing limited-vision run.
    #[serde(rename = "final_F")]
    pub final_f: Option<f64>,
    pub final_sqrt_k_sum: Option<f64>,
    /// Length of the completing limited-vision run.
    pub final_length: Option<f64>,
    pub verdicts: Vec<Verdict>,
    pub coverage: Option<CoverageResult>,
    pub wall_time_ms: f64,
}

impl ExplorationReport {
    pub fn all_pass(&self) -> bool {
        !self.verdicts.iter().any(Verdict::failed) && self.coverage.as_ref().map_or(true, |c| c.fraction >= 1.0)
    }

    pub fn section(&self, kind: SectionKind) -> f64 {
        self.sections.get(kind.name()).copied().unwrap_or(0.0)
    }
}

/// A finished run: the report and the trajectory it summarizes.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: ExplorationReport,
    pub trajectory: Trajectory,
}

fn sections_of(t: &Trajectory) -> BTreeMap<String, f64> {
    t.totals_by_kind().into_iter().map(|(k, v)| (k.name().to_string(), v)).collect()
}

fn cell_summary(cells: &[CellStat]) -> CellSummary {
    CellSummary { visited: cells.len(), holes: cells.iter().map(|c| c.holes).sum(), lemma_violations: cells.iter().filter(|c| !c.lemma_ok).count() }
}

/// Runs `spec` on `terrain` from `start`, evaluates the bounds and, if enabled,
/// the coverage oracle.
pub fn run_algorithm(terrain: &Terrain, start: Point, spec: &AlgorithmSpec, coverage: &CoverageConfig) -> Result<RunOutput, HarnessError> {
    let m = terrain.metrics();
    let metrics = TerrainMetrics { perimeter: m.perimeter, area: m.area, diameter: m.diameter, k: m.k };
    let cfg = ExploreConfig { delta: spec.delta, ..ExploreConfig::default() };
    let mut spec = *spec;
    let clock = Instant::now();

    let mut report = ExplorationReport {
        metrics,
        algorithm: spec,
        start,
        delta: spec.delta,
        sections: BTreeMap::new(),
        total_length: 0.0,
        exptrav_length: 0.0,
        exp_trav_calls: 0,
        stages: Vec::new(),
        probes: Vec::new(),
        approaches: Vec::new(),
        quadtree: None,
        cells: CellSummary::default(),
        final_f: None,
        final_sqrt_k_sum: None,
        final_length: None,
        verdicts: Vec::new(),
        coverage: None,
        wall_time_ms: 0.0,
    };

    let trajectory = match spec.id {
        AlgorithmId::Exptrav => {
            let run = explore_unlimited(terrain, start, &cfg)?;
            let qt = &run.quadtree;
            report.delta = Some(run.delta);
            report.quadtree = Some(QuadtreeSummary {
                non_terminal: qt.non_terminal_count(),
                terminal: qt.terminal_count(),
                diameter_sum: qt.diameter_sum(),
                root_diameter: qt.root_square().diameter(),
                bijective: qt.assignment_is_bijective(),
            });
            report.approaches = run.approaches;
            report.exp_trav_calls = run.exp_trav_calls;
            run.trajectory
        }
        AlgorithmId::Let => {
            let f = spec.f.unwrap_or(MAX_TILE_SIDE);
            spec.f = Some(f);
            let run = lim_exp_trav(terrain, start, f, &cfg)?;
            report.approaches = run.approaches;
            report.exp_trav_calls = run.exp_trav_calls;
            report.cells = cell_summary(&run.cells);
            report.final_f = Some(f);
            report.final_sqrt_k_sum = Some(run.sqrt_k_sum);
            report.final_length = Some(run.trajectory.total_length);
            run.trajectory
        }
        AlgorithmId::LetA | AlgorithmId::LetK | AlgorithmId::LetAuto => {
            let run: StagedRun = match spec.id {
                AlgorithmId::LetA => {
                    let a = spec.area.unwrap_or(m.area);
                    spec.area = Some(a);
                    let_a(terrain, start, a, &cfg)?
                }
                AlgorithmId::LetK => {
                    let k = spec.k.unwrap_or(m.k);
                    spec.k = Some(k);
                    let_k(terrain, start, k, &cfg)?
                }
                _ => let_unknown(terrain, start, &cfg)?,
            };
            report.approaches = run.approaches;
            report.exp_trav_calls = run.exp_trav_calls;
            report.cells = cell_summary(&run.cells);
            report.final_f = Some(run.final_side);
            report.final_sqrt_k_sum = Some(run.final_sqrt_k_sum);
            report.final_length = run.stages.last().map(|s| s.length);
            report.stages = run.stages;
            report.probes = run.probes;
            run.trajectory
        }
    };
    report.algorithm = spec;
    report.sections = sections_of(&trajectory);
    report.total_length = trajectory.total_length;
    report.exptrav_length = trajectory.total_length - report.section(SectionKind::InitialWalk);
    report.verdicts = verify_bounds(&report);
    if coverage.enabled {
        let h = coverage.h.unwrap_or_else(|| report.final_f.map_or(0.05, |f| (f / 4.0).min(0.05)));
        report.coverage = Some(coverage_oracle(terrain, &trajectory, spec.id.range(), h, coverage.clearance));
    }
    report.wall_time_ms = clock.elapsed().as_secs_f64() * 1e3;
    Ok(RunOutput { report, trajectory })
}

/// `27P + 24A/F + 12 sqrt(2) F sum sqrt(k_T)`.
pub fn limited_bound(perimeter: f64, area: f64, f: f64, sqrt_k_sum: f64) -> f64 {
    27.0 * perimeter + 24.0 * area / f + 12.0 * SQRT_2 * f * sqrt_k_sum
}

/// `5P + 12 D sqrt(k)`.
pub fn unlimited_bound(perimeter: f64, diameter: f64, k: usize) -> f64 {
    5.0 * perimeter + 12.0 * diameter * (k as f64).sqrt()
}

/// Evaluates every bound applicable to the report's algorithm from the stored
/// quantities alone.
pub fn verify_bounds(r: &ExplorationReport) -> Vec<Verdict> {
    let m = &r.metrics;
    let mut out = Vec::new();
    let violations = r.approaches.iter().filter(|a| a.length > a.limit).count() as f64;
    out.push(Verdict::le("approach_discipline", violations, 0.0, true));
    match r.algorithm.id {
        AlgorithmId::Exptrav => {
            out.push(Verdict::le("unlimited_total", r.total_length, unlimited_bound(m.perimeter, m.diameter, m.k), m.perimeter >= 4.0));
            if let Some(q) = &r.quadtree {
                let expected = (m.k + 1) as f64;
                let n = q.non_terminal as f64;
                out.push(Verdict { name: "quadtree_bijection".into(), lhs: n, rhs: expected, pass: n == expected && q.bijective, applicable: true });
                out.push(Verdict::le("sigma_bound", q.diameter_sum, 2.0 * q.root_diameter * n.sqrt(), true));
            }
        }
        AlgorithmId::Let | AlgorithmId::LetA | AlgorithmId::LetK | AlgorithmId::LetAuto => {
            if let (Some(f), Some(s), Some(len)) = (r.final_f, r.final_sqrt_k_sum, r.final_length) {
                let applicable = m.perimeter >= 4.0 && m.area >= 1.0;
                out.push(Verdict::le("limited_total", len, limited_bound(m.perimeter, m.area, f, s), applicable));
            }
            out.push(Verdict::le("cell_lemma", r.cells.lemma_violations as f64, 0.0, true));
            let condition_stopped = |i: usize| r.stages[i].stop_reason == StopReason::StoppingCondition;
            let pairs = r.stages.windows(2).enumerate().filter(|(i, _)| condition_stopped(*i)).map(|(_, w)| (w[0].f, w[1].f));
            match r.algorithm.id {
                AlgorithmId::LetA => {
                    let worst = pairs.map(|(a, b)| b / a).fold(0.0, f64::max);
                    out.push(Verdict::le("let_a_halving", worst, 0.5 + 1e-12, true));
                }
                AlgorithmId::LetK => {
                    let worst = pairs.map(|(a, b)| (2.0 * a).min(MAX_TILE_SIDE) - b).fold(0.0, f64::max);
                    out.push(Verdict::le("let_k_growth", worst, 1e-12, true));
                }
                _ => {}
            }
        }
    }
    out
}
