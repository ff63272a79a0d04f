//! Exploration with unit-range vision: tiles, cells and the depth-first cell
//! traversal.

use std::collections::HashMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use super::exptrav::{exp_trav, Domain, Halt, Monitor, Recorder};
use super::{ApproachEvent, Counters, ExploreConfig, ExploreError};
use crate::geom::{clip_to_tile, EdgeKind};
use crate::quadtree::{PolygonId, Quadtree};
use crate::trajectory::{SectionKind, Trajectory};
use crate::{CellRegion, Point, Square, Terrain};

/// Largest tile side for which a tile fits in a unit-diameter disc.
pub const MAX_TILE_SIDE: f64 = FRAC_1_SQRT_2;

const TOL: f64 = 1e-9;

pub type TileIndex = (i64, i64);

/// A cell: component `index` of the intersection of tile `tile` with the terrain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellKey {
    pub tile: TileIndex,
    pub index: usize,
}

struct Tile {
    cells: Vec<Rc<CellRegion>>,
    visited: Vec<bool>,
    quadtree: Option<Quadtree<f64>>,
    next_id: usize,
}

/// Square tiling of the plane with side `side`, one of whose vertices is
/// `anchor`. Tile `(i, j)` has its lower-left corner at `anchor + (i, j) * side`.
/// Cells are clipped lazily the first time a tile is touched.
pub struct TileGrid<'t> {
    terrain: &'t Terrain,
    side: f64,
    anchor: Point,
    tiles: HashMap<TileIndex, Tile>,
}

impl<'t> TileGrid<'t> {
    pub fn new(terrain: &'t Terrain, side: f64, anchor: Point) -> Self {
        Self { terrain, side, anchor, tiles: HashMap::new() }
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn tile_square(&self, t: TileIndex) -> Square {
        Square::new(Point::new(self.anchor.x + t.0 as f64 * self.side, self.anchor.y + t.1 as f64 * self.side), self.side)
    }

    /// The tile whose half-open square contains `p`.
    pub fn tile_of(&self, p: Point) -> TileIndex {
        let u = (p.x - self.anchor.x) / self.side;
        let v = (p.y - self.anchor.y) / self.side;
        (u.ceil() as i64 - 1, v.floor() as i64)
    }

    /// Every tile whose closed square contains `p`, in lexicographic order.
    pub fn tiles_touching(&self, p: Point) -> Vec<TileIndex> {
        let u = (p.x - self.anchor.x) / self.side;
        let v = (p.y - self.anchor.y) / self.side;
        let tol = TOL / self.side;
        let mut out = Vec::new();
        for i in (u - 1.0 - tol).floor() as i64..=(u + tol).floor() as i64 {
            for j in (v - 1.0 - tol).floor() as i64..=(v + tol).floor() as i64 {
                if self.tile_square((i, j)).contains_closed(p, TOL) {
                    out.push((i, j));
                }
            }
        }
        out.sort();
        out
    }

    /// Inclusive range of tile indices covering the terrain's bounding box.
    pub fn tile_range(&self) -> (TileIndex, TileIndex) {
        let bb = self.terrain.outer().bbox();
        let lo = self.tile_of(bb.min);
        let hi = self.tile_of(bb.max);
        ((lo.0 - 1, lo.1 - 1), (hi.0 + 1, hi.1 + 1))
    }

    fn load(&mut self, t: TileIndex) -> &mut Tile {
        let square = self.tile_square(t);
        let terrain = self.terrain;
        self.tiles.entry(t).or_insert_with(|| {
            let cells: Vec<_> = clip_to_tile(terrain, &square).into_iter().map(Rc::new).collect();
            Tile { visited: vec![false; cells.len()], cells, quadtree: Some(Quadtree::new(square)), next_id: 0 }
        })
    }

    /// Cells of tile `t`.
    pub fn cells(&mut self, t: TileIndex) -> Vec<Rc<CellRegion>> {
        self.load(t).cells.clone()
    }

    fn cell(&mut self, key: CellKey) -> Rc<CellRegion> {
        self.load(key.tile).cells[key.index].clone()
    }

    fn visited(&mut self, key: CellKey) -> bool {
        self.load(key.tile).visited[key.index]
    }

    /// Number of obstacles lying entirely within each tile (only tiles with at least one).
    pub fn obstacles_per_tile(&self) -> HashMap<TileIndex, usize> {
        let mut out = HashMap::new();
        for o in self.terrain.obstacles() {
            let bb = o.bbox();
            let u = ((bb.min.x - self.anchor.x) / self.side).floor() as i64;
            let v = ((bb.min.y - self.anchor.y) / self.side).floor() as i64;
            for t in [(u, v), (u - 1, v), (u, v - 1), (u - 1, v - 1)] {
                let sq = self.tile_square(t);
                if sq.contains_closed(bb.min, TOL) && sq.contains_closed(bb.max, TOL) {
                    *out.entry(t).or_insert(0) += 1;
                    break;
                }
            }
        }
        out
    }

    /// `sum over tiles of sqrt(k_T)`, with `k_T` the obstacles entirely within tile `T`.
    pub fn sqrt_k_sum(&self) -> f64 {
        self.obstacles_per_tile().values().map(|&k| (k as f64).sqrt()).sum()
    }

    /// Points of `key`'s outer boundary where it touches a cell of a neighbouring
    /// tile, as (offset from arc `s0`, point, neighbour), sorted by offset.
    fn contacts(&mut self, key: CellKey, s0: f64) -> Vec<(f64, Point, CellKey)> {
        let cell = self.cell(key);
        let ring = cell.outer();
        let perimeter = ring.perimeter();
        let sq = self.tile_square(key.tile);
        let (x0, y0) = (sq.origin.x, sq.origin.y);
        let (x1, y1) = (x0 + sq.side, y0 + sq.side);
        let (i, j) = key.tile;
        let near = |a: f64, b: f64| (a - b).abs() <= 10.0 * TOL;
        let offset = |s: f64| {
            let o = (s - s0).rem_euclid(perimeter);
            if o > perimeter - 1e-12 {
                0.0
            } else {
                o
            }
        };

        let mut out = Vec::new();
        for e in 0..ring.len() {
            if ring.kind(e) != EdgeKind::Tile {
                continue;
            }
            let (a, b) = ring.edge(e);
            let (nt, on_line): (TileIndex, Box<dyn Fn(Point) -> bool>) = if near(a.x, x0) && near(b.x, x0) {
                ((i - 1, j), Box::new(move |p: Point| (p.x - x0).abs() <= 10.0 * TOL))
            } else if near(a.x, x1) && near(b.x, x1) {
                ((i + 1, j), Box::new(move |p: Point| (p.x - x1).abs() <= 10.0 * TOL))
            } else if near(a.y, y0) && near(b.y, y0) {
                ((i, j - 1), Box::new(move |p: Point| (p.y - y0).abs() <= 10.0 * TOL))
            } else if near(a.y, y1) && near(b.y, y1) {
                ((i, j + 1), Box::new(move |p: Point| (p.y - y1).abs() <= 10.0 * TOL))
            } else {
                continue;
            };
            let d = b - a;
            let len2 = d.dot(d);
            let arc = ring.vertex_arc(e);
            for (ci, other) in self.cells(nt).iter().enumerate() {
                let oring = other.outer();
                for f in 0..oring.len() {
                    if oring.kind(f) != EdgeKind::Tile {
                        continue;
                    }
                    let (c, dd) = oring.edge(f);
                    if !on_line(c) || !on_line(dd) {
                        continue;
                    }
                    let tc = (c - a).dot(d) / len2;
                    let td = (dd - a).dot(d) / len2;
                    let lo = tc.min(td).max(0.0);
                    let hi = tc.max(td).min(1.0);
                    if hi >= lo - TOL {
                        let p = a.lerp(b, lo);
                        out.push((offset(arc + lo * len2.sqrt()), p, CellKey { tile: nt, index: ci }));
                    }
                }
            }
        }

        let corners = [((x0, y0), (i - 1, j - 1)), ((x1, y0), (i + 1, j - 1)), ((x1, y1), (i + 1, j + 1)), ((x0, y1), (i - 1, j + 1))];
        for v in 0..ring.len() {
            let p = ring.vertices()[v];
            for &((cx, cy), nt) in &corners {
                if !(near(p.x, cx) && near(p.y, cy)) {
                    continue;
                }
                for (ci, other) in self.cells(nt).iter().enumerate() {
                    if other.outer().vertices().iter().any(|q| near(q.x, cx) && near(q.y, cy)) {
                        out.push((offset(ring.vertex_arc(v)), p, CellKey { tile: nt, index: ci }));
                    }
                }
            }
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
        out
    }
}

/// `R_C <= 8 (A_C / F + P_C)`, with `R_C` the part of the cell's boundary on
/// the tile boundary and `P_C` the part on the terrain boundary.
pub fn check_cell_lemma(cell: &CellRegion, side: f64) -> bool {
    cell.tile_length <= 8.0 * (cell.area / side + cell.terrain_length) + 1e-9
}

/// Per-cell record of a visited cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellStat {
    pub key: CellKey,
    pub area: f64,
    pub terrain_length: f64,
    pub tile_length: f64,
    pub holes: usize,
    pub lemma_ok: bool,
}

/// Outcome of one run of the limited-vision algorithm.
#[derive(Clone, Debug)]
pub struct LimitedRun {
    pub trajectory: Trajectory,
    pub counters: Counters,
    /// False when the monitor interrupted the run.
    pub completed: bool,
    pub tile_side: f64,
    pub approaches: Vec<ApproachEvent>,
    pub exp_trav_calls: usize,
    pub cells: Vec<CellStat>,
    /// `sum over tiles of sqrt(k_T)` for this tiling.
    pub sqrt_k_sum: f64,
}

struct Frame {
    cell: Rc<CellRegion>,
    s0: f64,
    contacts: Vec<(f64, Point, CellKey)>,
    next: usize,
    flushed: f64,
}

struct Driver<'g, 't> {
    grid: &'g mut TileGrid<'t>,
    cfg: ExploreConfig,
    cells: Vec<CellStat>,
}

impl Driver<'_, '_> {
    fn enter(&mut self, rec: &mut Recorder<'_>, key: CellKey, r: Point) -> Result<Frame, Halt> {
        let cell = self.grid.cell(key);
        let side = self.grid.side;
        let n_loops = cell.region.loops().len();
        let tile = self.grid.load(key.tile);
        tile.visited[key.index] = true;
        let base = tile.next_id;
        tile.next_id += n_loops;
        let mut qt = tile.quadtree.take().expect("tile quadtree in use");

        let ids = (0..n_loops).map(|l| PolygonId(base + l)).collect();
        let delta = self.cfg.step(side, cell.outer().perimeter());
        let mut domain = Domain::new(&cell.region, ids, delta);
        let s0 = cell.outer().locate(r).0;
        let res = exp_trav(&mut domain, &mut qt, rec, 0, s0);
        self.grid.load(key.tile).quadtree = Some(qt);
        res?;

        rec.counters.area += cell.area;
        self.cells.push(CellStat {
            key,
            area: cell.area,
            terrain_length: cell.terrain_length,
            tile_length: cell.tile_length,
            holes: n_loops - 1,
            lemma_ok: check_cell_lemma(&cell, side),
        });
        rec.check()?;
        let contacts = self.grid.contacts(key, s0);
        Ok(Frame { cell, s0, contacts, next: 0, flushed: 0.0 })
    }

    fn run(&mut self, rec: &mut Recorder<'_>, start: CellKey, s: Point) -> Result<(), Halt> {
        let mut stack = vec![self.enter(rec, start, s)?];
        while let Some(top) = stack.last_mut() {
            if top.next < top.contacts.len() {
                let (off, p, nk) = top.contacts[top.next];
                top.next += 1;
                if self.grid.visited(nk) {
                    continue;
                }
                if off > top.flushed {
                    rec.trajectory.push_polyline(SectionKind::CellTour, top.cell.outer().span(top.s0 + top.flushed, off - top.flushed));
                    top.flushed = off;
                }
                let frame = self.enter(rec, nk, p)?;
                stack.push(frame);
            } else {
                let l = top.cell.outer().perimeter();
                if l > top.flushed {
                    rec.trajectory.push_polyline(SectionKind::CellTour, top.cell.outer().span(top.s0 + top.flushed, l - top.flushed));
                }
                stack.pop();
            }
        }
        Ok(())
    }
}

/// Limited-vision exploration with tile side `side`, anchored at `s`.
pub fn lim_exp_trav(terrain: &Terrain, s: Point, side: f64, cfg: &ExploreConfig) -> Result<LimitedRun, ExploreError> {
    run_limited(terrain, s, side, cfg, None)
}

/// Like [`lim_exp_trav`], but `monitor` is consulted after every counter
/// update and stops the run when it returns `true`.
pub fn lim_exp_trav_monitored(
    terrain: &Terrain,
    s: Point,
    side: f64,
    cfg: &ExploreConfig,
    monitor: &mut dyn FnMut(&Counters) -> bool,
) -> Result<LimitedRun, ExploreError> {
    run_limited(terrain, s, side, cfg, Some(monitor))
}

fn run_limited(terrain: &Terrain, s: Point, side: f64, cfg: &ExploreConfig, monitor: Option<Monitor<'_>>) -> Result<LimitedRun, ExploreError> {
    if !(side > 0.0 && side <= MAX_TILE_SIDE + 1e-12) {
        return Err(ExploreError::InvalidTileSide(side));
    }
    if !terrain.contains(s) {
        return Err(ExploreError::StartOutside(s));
    }
    let mut grid = TileGrid::new(terrain, side, s);
    let mut start = None;
    'outer: for t in grid.tiles_touching(s) {
        for (ci, c) in grid.cells(t).iter().enumerate() {
            if c.contains(s) {
                start = Some(CellKey { tile: t, index: ci });
                break 'outer;
            }
        }
    }
    let start = start.ok_or(ExploreError::NoStartCell)?;

    let mut rec = Recorder::new(monitor);
    let mut driver = Driver { grid: &mut grid, cfg: *cfg, cells: Vec::new() };
    let completed = match driver.run(&mut rec, start, s) {
        Ok(()) => true,
        Err(Halt::Interrupted) => false,
        Err(Halt::Failed(e)) => return Err(e),
    };
    let cells = std::mem::take(&mut driver.cells);
    Ok(LimitedRun {
        trajectory: rec.trajectory,
        counters: rec.counters,
        completed,
        tile_side: side,
        approaches: rec.approaches,
        exp_trav_calls: rec.exp_trav_calls,
        cells,
        sqrt_k_sum: grid.sqrt_k_sum(),
    })
}
