//! Experiment harness: coverage oracle, bound verdicts, reports, scaling fits,
//! batch runs and SVG output.

mod batch;
mod coverage;
mod report;
mod scaling;
mod svg;

pub use batch::{read_csv, run_experiment, BatchResult, CsvRow, ExperimentConfig, RunConfig, RunResult, TerrainSource, SEED_ENV};
pub use coverage::{coverage_oracle, CoverageResult};
pub use report::{
    limited_bound, run_algorithm, unlimited_bound, verify_bounds, AlgorithmId, AlgorithmSpec, CellSummary, CoverageConfig, ExplorationReport,
    QuadtreeSummary, RunOutput, TerrainMetrics, Verdict,
};
pub use scaling::{loglog_fit, scaling_check, Driver, ScalingSummary};
pub use svg::{render_svg, section_color, svg_string};

use crate::explore::ExploreError;
use crate::geom::GeomError;
use crate::terrains::GenError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Explore(#[from] ExploreError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("{0}: {1}")]
    Io(String, String),
    #[error("json: {0}")]
    Json(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),
    #[error("need at least 3 ladder points, got {0}")]
    TooFewPoints(usize),
    #[error("terrain {0} needs an explicit start point")]
    MissingStart(String),
    #[error("{} is not an integer seed: {0:?}", SEED_ENV)]
    BadSeed(String),
}
