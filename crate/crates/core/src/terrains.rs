//! Terrain generators: obstacle grids, combs, empty squares and random fat
//! terrains, each with construction-known metrics.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::geom::GeomError;
use crate::{Point, Polygon, Terrain};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenError {
    #[error("k = {0} is not a positive perfect square")]
    NotPerfectSquare(usize),
    #[error("non-positive dimension: {0}")]
    NonPositive(&'static str),
    #[error("obstacle size {eps} too large for spacing {spacing}")]
    ObstaclesTooLarge { eps: f64, spacing: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("could not place obstacle {index} after {attempts} attempts (seed {seed})")]
    PlacementFailed { seed: u64, index: usize, attempts: usize },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// 64-bit linear congruential generator (Knuth's MMIX constants). The top 53 bits
/// of the state give uniform doubles in `[0, 1)`.
#[derive(Clone, Debug)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub const A: u64 = 6364136223846793005;
    pub const C: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        let mut g = Self { state: seed };
        g.next_u64();
        g
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(Self::A).wrapping_add(Self::C);
        self.state
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.next_u64() >> 33) as usize % (hi - lo + 1)
    }
}

/// Generator family and its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    GridObstacles { k: usize, d: f64, eps: f64 },
    Comb { m: usize, depth: f64, width: f64 },
    EmptySquare { side: f64 },
    CfatRandom { seed: u64, c: f64, n: usize },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::GridObstacles { .. } => "grid_obstacles",
            Family::Comb { .. } => "comb",
            Family::EmptySquare { .. } => "empty_square",
            Family::CfatRandom { .. } => "cfat_random",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Family::CfatRandom { seed, .. } => Some(*seed),
            _ => None,
        }
    }
}

/// Metrics known from the construction. `r` is the radius of a disc contained
/// in the terrain's outer polygon and `big_r` of a disc containing it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Declared {
    #[serde(rename = "P")]
    pub perimeter: f64,
    #[serde(rename = "A")]
    pub area: f64,
    #[serde(rename = "D")]
    pub diameter: f64,
    pub k: usize,
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
}

/// A generated terrain with its declared metrics and a default start point.
#[derive(Clone, Debug)]
pub struct GenSpec {
    pub family: Family,
    pub terrain: Terrain,
    pub declared: Declared,
    pub start: Point,
}

/// Sidecar metrics file written next to a terrain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    #[serde(flatten)]
    pub declared: Declared,
    pub family: String,
    pub params: Family,
    pub seed: Option<u64>,
}

impl GenSpec {
    pub fn sidecar(&self) -> Sidecar {
        Sidecar { declared: self.declared, family: self.family.name().to_string(), params: self.family.clone(), seed: self.family.seed() }
    }

    /// Largest relative difference between declared and measured `P`, `A`, `D`.
    pub fn metric_mismatch(&self) -> f64 {
        let m = self.terrain.metrics();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
        rel(m.perimeter, self.declared.perimeter).max(rel(m.area, self.declared.area)).max(rel(m.diameter, self.declared.diameter))
    }
}

pub fn generate(family: &Family) -> Result<GenSpec, GenError> {
    match *family {
        Family::GridObstacles { k, d, eps } => grid_spec(k, d, eps),
        Family::Comb { m, depth, width } => comb_spec(m, depth, width),
        Family::EmptySquare { side } => empty_spec(side),
        Family::CfatRandom { seed, c, n } => cfat_spec(seed, c, n),
    }
}

fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<Point> {
    vec![Point::new(x0, y0), Point::new(x1, y0), Point::new(x1, y1), Point::new(x0, y1)]
}

/// Square annulus of outer side `eps` centred at `c`, wall `eps/8`, with a gap
/// of width `eps/4` in the wall facing +x.
pub fn keyhole(c: Point, eps: f64) -> Vec<Point> {
    let h = eps / 2.0;
    let w = eps / 8.0;
    let g = eps / 8.0;
    let i = h - w;
    [(h, g), (h, h), (-h, h), (-h, -h), (h, -h), (h, -g), (i, -g), (i, -i), (-i, -i), (-i, i), (i, i), (i, g)]
        .iter()
        .map(|&(x, y)| Point::new(c.x + x, c.y + y))
        .collect()
}

/// Perimeter of [`keyhole`].
pub fn keyhole_perimeter(eps: f64) -> f64 {
    6.75 * eps
}

/// Area of [`keyhole`].
pub fn keyhole_area(eps: f64) -> f64 {
    13.0 / 32.0 * eps * eps
}

fn positive(v: f64, name: &'static str) -> Result<(), GenError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(GenError::NonPositive(name))
    }
}

fn grid_spec(k: usize, d: f64, eps: f64) -> Result<GenSpec, GenError> {
    let n = (k as f64).sqrt().round() as usize;
    if k == 0 || n * n != k {
        return Err(GenError::NotPerfectSquare(k));
    }
    positive(d, "D")?;
    positive(eps, "eps")?;
    let side = d / SQRT_2;
    let spacing = side / (n as f64 + 1.0);
    if eps >= spacing / 2.0 {
        return Err(GenError::ObstaclesTooLarge { eps, spacing });
    }
    let mut obstacles = Vec::with_capacity(k);
    for j in 0..n {
        for i in 0..n {
            let c = Point::new((i as f64 + 1.0) * spacing, (j as f64 + 1.0) * spacing);
            obstacles.push(Polygon::new(keyhole(c, eps))?);
        }
    }
    let terrain = Terrain::new(Polygon::new(rect(0.0, 0.0, side, side))?, obstacles)?;
    let declared = Declared {
        perimeter: 4.0 * side + k as f64 * keyhole_perimeter(eps),
        area: side * side - k as f64 * keyhole_area(eps),
        diameter: d,
        k,
        r: side / 2.0,
        big_r: d / 2.0,
    };
    Ok(GenSpec { family: Family::GridObstacles { k, d, eps }, terrain, declared, start: Point::new(0.3 * spacing, 0.45 * spacing) })
}

pub fn gen_grid_obstacles(k: usize, d: f64, eps: f64) -> Result<Terrain, GenError> {
    grid_spec(k, d, eps).map(|g| g.terrain)
}

fn comb_spec(m: usize, depth: f64, width: f64) -> Result<GenSpec, GenError> {
    if m == 0 {
        return Err(GenError::InvalidParameter("comb needs at least one corridor".into()));
    }
    positive(depth, "depth")?;
    positive(width, "width")?;
    if width >= depth {
        return Err(GenError::InvalidParameter(format!("width {width} must be below depth {depth}")));
    }
    let w = width;
    let top = w + depth;
    let len = (2 * m - 1) as f64 * w;
    let mut v = vec![Point::new(0.0, 0.0), Point::new(len, 0.0)];
    for i in (0..m).rev() {
        let x0 = 2.0 * i as f64 * w;
        v.push(Point::new(x0 + w, top));
        v.push(Point::new(x0, top));
        if i > 0 {
            v.push(Point::new(x0, w));
            v.push(Point::new(x0 - w, w));
        }
    }
    let terrain = Terrain::new(Polygon::new(v)?, Vec::new())?;
    let declared = Declared {
        perimeter: 2.0 * m as f64 * depth + 4.0 * m as f64 * w,
        area: len * w + m as f64 * w * depth,
        diameter: len.hypot(top),
        k: 0,
        r: w / 2.0,
        big_r: len.hypot(top) / 2.0,
    };
    Ok(GenSpec { family: Family::Comb { m, depth, width }, terrain, declared, start: Point::new(w / 2.0, w / 2.0) })
}

pub fn gen_comb(m: usize, depth: f64, width: f64) -> Result<Terrain, GenError> {
    comb_spec(m, depth, width).map(|g| g.terrain)
}

fn empty_spec(side: f64) -> Result<GenSpec, GenError> {
    positive(side, "side")?;
    let terrain = Terrain::new(Polygon::new(rect(0.0, 0.0, side, side))?, Vec::new())?;
    let declared = Declared { perimeter: 4.0 * side, area: side * side, diameter: side * SQRT_2, k: 0, r: side / 2.0, big_r: side * SQRT_2 / 2.0 };
    Ok(GenSpec { family: Family::EmptySquare { side }, terrain, declared, start: Point::new(side / 2.0, side / 2.0) })
}

pub fn gen_empty_square(side: f64) -> Result<Terrain, GenError> {
    empty_spec(side).map(|g| g.terrain)
}

/// Circumradius of the outer polygon of random fat terrains.
pub const CFAT_SCALE: f64 = 3.0;
const CFAT_VERTICES: usize = 16;
const CFAT_ATTEMPTS: usize = 1000;

fn segment_origin_distance(a: Point, b: Point) -> f64 {
    crate::geom::segment_distance(Point::new(0.0, 0.0), a, b).0
}

fn cfat_spec(seed: u64, c: f64, n: usize) -> Result<GenSpec, GenError> {
    if !(c > 1.0 && c.is_finite()) {
        return Err(GenError::InvalidParameter(format!("fatness {c} must exceed 1")));
    }
    let mut rng = Lcg64::new(seed);
    let q = 1.0 / c + 0.3 * (1.0 - 1.0 / c);
    let step = 2.0 * PI / CFAT_VERTICES as f64;

    let (outer, r, big_r) = (0..CFAT_ATTEMPTS)
        .find_map(|_| {
            let pts: Vec<Point> = (0..CFAT_VERTICES)
                .map(|i| {
                    let theta = (i as f64 + rng.uniform(-0.3, 0.3)) * step;
                    let rho = CFAT_SCALE * rng.uniform(q, 1.0);
                    Point::new(rho * theta.cos(), rho * theta.sin())
                })
                .collect();
            let r = (0..pts.len()).map(|i| segment_origin_distance(pts[i], pts[(i + 1) % pts.len()])).fold(f64::INFINITY, f64::min);
            let big_r = pts.iter().map(|p| p.norm()).fold(0.0, f64::max);
            (big_r / r <= c).then_some((pts, r, big_r))
        })
        .ok_or(GenError::PlacementFailed { seed, index: 0, attempts: CFAT_ATTEMPTS })?;
    let outer = Polygon::new(outer)?;

    let clearance = 0.01 * r;
    let keep_free = 0.1 * r;
    let mut placed: Vec<(Point, f64)> = Vec::new();
    let mut obstacles = Vec::with_capacity(n);
    for index in 0..n {
        let mut ok = None;
        for _ in 0..CFAT_ATTEMPTS {
            let rho = CFAT_SCALE * rng.uniform(0.03, 0.08);
            let sides = rng.int(3, 6);
            let phase = rng.uniform(0.0, 2.0 * PI);
            let center = Point::new(rng.uniform(-big_r, big_r), rng.uniform(-big_r, big_r));
            if center.norm() < keep_free + rho || !outer.contains_strict(center) || outer.boundary_distance(center) < rho + clearance {
                continue;
            }
            if placed.iter().any(|&(p, pr)| p.dist(center) < pr + rho + clearance) {
                continue;
            }
            let pts: Vec<Point> = (0..sides)
                .map(|i| {
                    let a = phase + 2.0 * PI * i as f64 / sides as f64;
                    Point::new(center.x + rho * a.cos(), center.y + rho * a.sin())
                })
                .collect();
            ok = Some((center, rho, pts));
            break;
        }
        let (center, rho, pts) = ok.ok_or(GenError::PlacementFailed { seed, index, attempts: CFAT_ATTEMPTS })?;
        placed.push((center, rho));
        obstacles.push(Polygon::new(pts)?);
    }
    let terrain = Terrain::new(outer, obstacles)?;
    let m = terrain.metrics();
    let declared = Declared { perimeter: m.perimeter, area: m.area, diameter: m.diameter, k: n, r, big_r };
    Ok(GenSpec { family: Family::CfatRandom { seed, c, n }, terrain, declared, start: Point::new(0.0, 0.0) })
}

/// Random terrain whose outer polygon contains the disc of radius `r` about the
/// origin and lies in the disc of radius `R`, with `R / r <= c`, plus `n` small
/// regular obstacles kept clear of each other, of the boundary and of the origin.
pub fn gen_cfat_random(seed: u64, c: f64, n: usize) -> Result<(Terrain, f64, f64), GenError> {
    cfat_spec(seed, c, n).map(|g| (g.terrain, g.declared.r, g.declared.big_r))
}
