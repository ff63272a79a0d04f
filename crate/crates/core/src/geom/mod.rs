//! Geometry kernel: points, simple polygons, regions with holes, terrains,
//! half-open squares and clipping of a terrain against a square tile.
//!
//! All predicates use a single absolute tolerance, [`Scalar::geom_eps`]. Terrain
//! generators keep features at least `1e-3` apart so the tolerance never decides
//! an outcome on its own.

mod clip;
mod point;
mod polygon;
mod square;
mod terrain;

pub use clip::{clip_region_to_tile, clip_to_tile, CellRegion};
pub use point::{orient, segment_distance, segment_hits, segments_touch, Point2};
pub use polygon::{is_left, polyline_length, BBox, EdgeKind, Polygon, Region, Ring};
pub use square::{Quadrant, Square};
pub use terrain::{Metrics, Terrain, TerrainFile, Vision};

#[allow(unused_imports)]
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeomError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon has a non-finite coordinate")]
    NonFinite,
    #[error("polygon repeats vertex {0}")]
    RepeatedVertex(usize),
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("polygon is not simple")]
    SelfIntersecting,
    #[error("obstacle {0}: {1}")]
    Obstacle(usize, Box<GeomError>),
    #[error("obstacle {0} is not strictly inside the outer polygon")]
    ObstacleOutside(usize),
    #[error("obstacles {0} and {1} intersect")]
    ObstaclesOverlap(usize, usize),
    #[error("point ({x}, {y}) is outside the terrain")]
    PointOutside { x: f64, y: f64 },
    #[error("arc length {value} outside [0, {perimeter}]")]
    ArcOutOfRange { value: f64, perimeter: f64 },
    #[error("terrain parse error: {0}")]
    Parse(String),
    #[error("{0}: {1}")]
    Io(String, String),
}
