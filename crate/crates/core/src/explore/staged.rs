//! Staged drivers rerunning the limited-vision algorithm with varying tile
//! sides: [`let_a`] (area known), [`let_k`] (obstacle count known) and
//! [`let_unknown`] (nothing known; doubling guesses for both, interleaved).

use serde::{Deserialize, Serialize};

use super::limited::{lim_exp_trav_monitored, CellStat, MAX_TILE_SIDE};
use super::{ApproachEvent, Counters, ExploreConfig, ExploreError};
use crate::trajectory::{SectionKind, Trajectory};
use crate::{Point, Terrain};

/// Stages per ladder before giving up.
pub const MAX_STAGES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    StoppingCondition,
    Complete,
    ProbeAbort,
}

/// Counters and length of one stage.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub i: usize,
    #[serde(rename = "F_i")]
    pub f: f64,
    #[serde(rename = "A_i")]
    pub area: f64,
    #[serde(rename = "P_i")]
    pub perimeter: f64,
    pub k_i: usize,
    /// Length of the stage's exploration, excluding the walk back to the start.
    #[serde(rename = "D_i")]
    pub length: f64,
    pub return_length: f64,
    pub stop_reason: StopReason,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ladder {
    Obstacles,
    Area,
}

/// One probe of [`let_unknown`]: a full staged run with a guessed parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub ladder: Ladder,
    pub guess: f64,
    pub stages: usize,
    pub length: f64,
    pub completed: bool,
}

/// Outcome of a staged driver.
#[derive(Clone, Debug, Default)]
pub struct StagedRun {
    pub trajectory: Trajectory,
    pub stages: Vec<StageRecord>,
    pub probes: Vec<ProbeRecord>,
    pub approaches: Vec<ApproachEvent>,
    /// Cells visited by every stage, in order.
    pub cells: Vec<CellStat>,
    pub exp_trav_calls: usize,
    /// Tile side and `sum sqrt(k_T)` of the final, completing stage.
    pub final_side: f64,
    pub final_sqrt_k_sum: f64,
}

#[derive(Clone, Copy, Debug)]
enum Knowledge {
    Area(f64),
    Obstacles(usize),
}

#[derive(Clone, Copy, Debug)]
enum Abort {
    AreaAbove(f64),
    ObstaclesAbove(usize),
}

impl Abort {
    fn fires(self, c: &Counters) -> bool {
        match self {
            Abort::AreaAbove(a) => c.area > a,
            Abort::ObstaclesAbove(k) => c.approached > k,
        }
    }
}

/// Area-known stopping condition: `k* F >= 2A/F` and `k* F >= P* + 1`.
pub fn let_a_stop(c: &Counters, f: f64, area: f64) -> bool {
    let kf = c.approached as f64 * f;
    kf >= 2.0 * area / f && kf >= c.perimeter + 1.0
}

/// Count-known stopping condition: `A*/F >= 2kF`, `A*/F >= P* + 1` and `F < sqrt(2)/2`.
pub fn let_k_stop(c: &Counters, f: f64, k: usize) -> bool {
    let af = c.area / f;
    af >= 2.0 * k as f64 * f && af >= c.perimeter + 1.0 && f < MAX_TILE_SIDE - 1e-12
}

/// Runs stages until one completes. Returns false when `abort` fired.
fn ladder(terrain: &Terrain, s: Point, knowledge: Knowledge, abort: Option<Abort>, cfg: &ExploreConfig, out: &mut StagedRun) -> Result<bool, ExploreError> {
    let mut f = match knowledge {
        Knowledge::Area(_) => MAX_TILE_SIDE,
        Knowledge::Obstacles(k) => {
            let f = 1.0 / (k as f64 + std::f64::consts::SQRT_2);
            if f > MAX_TILE_SIDE - 1e-12 {
                MAX_TILE_SIDE
            } else {
                f
            }
        }
    };
    for _ in 0..MAX_STAGES {
        let mut reason = None;
        let run = {
            let mut monitor = |c: &Counters| {
                if abort.is_some_and(|a| a.fires(c)) {
                    reason = Some(StopReason::ProbeAbort);
                    return true;
                }
                let stop = match knowledge {
                    Knowledge::Area(a) => let_a_stop(c, f, a),
                    Knowledge::Obstacles(k) => let_k_stop(c, f, k),
                };
                if stop {
                    reason = Some(StopReason::StoppingCondition);
                }
                stop
            };
            lim_exp_trav_monitored(terrain, s, f, cfg, &mut monitor)?
        };
        let stop_reason = if run.completed { StopReason::Complete } else { reason.unwrap_or(StopReason::StoppingCondition) };
        let length = run.trajectory.total_length;
        let back = if run.completed { None } else { run.trajectory.reversed_path(SectionKind::StageReturn) };
        let return_length = back.as_ref().map_or(0.0, |b| b.length);
        out.stages.push(StageRecord {
            i: out.stages.len() + 1,
            f,
            area: run.counters.area,
            perimeter: run.counters.perimeter,
            k_i: run.counters.approached,
            length,
            return_length,
            stop_reason,
        });
        out.approaches.extend(run.approaches);
        out.cells.extend(run.cells);
        out.exp_trav_calls += run.exp_trav_calls;
        out.trajectory.append(run.trajectory);
        if let Some(b) = back {
            out.trajectory.push(b);
        }
        match stop_reason {
            StopReason::Complete => {
                out.final_side = f;
                out.final_sqrt_k_sum = run.sqrt_k_sum;
                return Ok(true);
            }
            StopReason::ProbeAbort => return Ok(false),
            StopReason::StoppingCondition => {}
        }
        f = match knowledge {
            Knowledge::Area(a) => a / (run.counters.approached as f64 * f),
            Knowledge::Obstacles(k) => (run.counters.area / (k as f64 * f)).min(MAX_TILE_SIDE),
        };
    }
    Err(ExploreError::NoConvergence(MAX_STAGES))
}

/// Staged exploration knowing the terrain area.
pub fn let_a(terrain: &Terrain, s: Point, area: f64, cfg: &ExploreConfig) -> Result<StagedRun, ExploreError> {
    if !(area > 0.0 && area.is_finite()) {
        return Err(ExploreError::InvalidKnowledge(area));
    }
    let mut out = StagedRun::default();
    ladder(terrain, s, Knowledge::Area(area), None, cfg, &mut out)?;
    Ok(out)
}

/// Staged exploration knowing the number of obstacles.
pub fn let_k(terrain: &Terrain, s: Point, k: usize, cfg: &ExploreConfig) -> Result<StagedRun, ExploreError> {
    let mut out = StagedRun::default();
    ladder(terrain, s, Knowledge::Obstacles(k), None, cfg, &mut out)?;
    Ok(out)
}

/// Exploration without knowledge: alternates a count probe (guess 1, 2, 4, ...,
/// aborted once more obstacles than the guess are approached in a stage) and an
/// area probe (guess 1, 2, 4, ..., aborted once the explored area exceeds the
/// guess), until a probe completes.
pub fn let_unknown(terrain: &Terrain, s: Point, cfg: &ExploreConfig) -> Result<StagedRun, ExploreError> {
    let mut out = StagedRun::default();
    for step in 0..MAX_STAGES {
        let guess = 1usize << step;
        for ladder_kind in [Ladder::Obstacles, Ladder::Area] {
            let (knowledge, abort) = match ladder_kind {
                Ladder::Obstacles => (Knowledge::Obstacles(guess), Abort::ObstaclesAbove(guess)),
                Ladder::Area => (Knowledge::Area(guess as f64), Abort::AreaAbove(guess as f64)),
            };
            let before_len = out.trajectory.total_length;
            let before_stages = out.stages.len();
            let completed = ladder(terrain, s, knowledge, Some(abort), cfg, &mut out)?;
            out.probes.push(ProbeRecord {
                ladder: ladder_kind,
                guess: guess as f64,
                stages: out.stages.len() - before_stages,
                length: out.trajectory.total_length - before_len,
                completed,
            });
            if completed {
                return Ok(out);
            }
        }
    }
    Err(ExploreError::NoConvergence(MAX_STAGES))
}
