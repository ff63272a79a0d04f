//! Exploration of polygonal terrains with obstacles, by a robot with unlimited
//! or unit-range vision.
//!
//! The geometry kernel ([`geom`]) and the quadtree ([`quadtree`]) are generic over
//! the scalar type; the exploration algorithms, terrain generators and the
//! experiment harness work in `f64` through the aliases below.

pub mod explore;
pub mod geom;
pub mod harness;
pub mod quadtree;
pub mod scalar;
pub mod terrains;
pub mod trajectory;

pub type Point = geom::Point2<f64>;
pub type Polygon = geom::Polygon<f64>;
pub type Terrain = geom::Terrain<f64>;
pub type Region = geom::Region<f64>;
pub type Square = geom::Square<f64>;
pub type CellRegion = geom::CellRegion<f64>;
pub type Metrics = geom::Metrics<f64>;
