//! Exploration algorithms.
//!
//! * [`unlimited`]: boundary-following with quadtree-gated approaches, for a robot
//!   that sees everything along unobstructed sight lines.
//! * [`limited`]: range-1 vision; the terrain is tiled, each tile intersected with
//!   the terrain gives cells, and cells are visited depth-first, each explored with
//!   the unlimited-vision procedure.
//! * [`staged`]: drivers that rerun the limited algorithm with a sequence of tile
//!   sides, using knowledge of the area or the obstacle count, or neither.

mod exptrav;
pub mod limited;
pub mod staged;
pub mod unlimited;

use serde::{Deserialize, Serialize};

use crate::geom::GeomError;
use crate::quadtree::QuadtreeError;
use crate::Point;

pub use exptrav::ApproachEvent;

/// Live counters maintained while exploring.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Counters {
    /// Sum of the areas of cells whose in-cell exploration has finished (`A*`).
    pub area: f64,
    /// Terrain boundary length traversed in recognition mode (`P*`).
    pub perimeter: f64,
    /// Obstacles approached so far (`k*`).
    pub approached: usize,
}

/// Knobs shared by all algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExploreConfig {
    /// Fixed detection step along boundaries. When `None` the step is
    /// `min(scale, perimeter) / delta_divisor` per explored domain, where the scale
    /// is the terrain diameter (unlimited) or the tile side (limited).
    pub delta: Option<f64>,
    pub delta_divisor: f64,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        Self { delta: None, delta_divisor: 1000.0 }
    }
}

impl ExploreConfig {
    pub(crate) fn step(&self, scale: f64, perimeter: f64) -> f64 {
        self.delta.unwrap_or_else(|| scale.min(perimeter) / self.delta_divisor)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExploreError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Quadtree(#[from] QuadtreeError),
    #[error("start point ({}, {}) is not strictly inside the terrain", .0.x, .0.y)]
    StartNotInterior(Point),
    #[error("start point ({}, {}) is outside the terrain", .0.x, .0.y)]
    StartOutside(Point),
    #[error("tile side {0} outside (0, sqrt(2)/2]")]
    InvalidTileSide(f64),
    #[error("known parameter must be positive/non-negative, got {0}")]
    InvalidKnowledge(f64),
    #[error("initial walk ray left the terrain without hitting a boundary")]
    RayMissed,
    #[error("no cell of the tiling contains the start point")]
    NoStartCell,
    #[error("staged driver did not terminate within {0} stages")]
    NoConvergence(usize),
}
