//! Exploration with unlimited vision.

use serde::{Deserialize, Serialize};

use super::exptrav::{exp_trav, Domain, Halt, Recorder};
use super::{ApproachEvent, Counters, ExploreConfig, ExploreError};
use crate::geom::segment_hits;
use crate::quadtree::{PolygonId, Quadtree};
use crate::trajectory::{Section, SectionKind, Trajectory};
use crate::{Point, Square, Terrain};

/// Result of the initial walk: the walked section and the point where the
/// boundary exploration starts.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialWalk {
    pub section: Section,
    pub r0: Point,
    /// Polygon ids hit, in order (0 is the outer polygon).
    pub hits: Vec<usize>,
}

/// Walks along the +x half-line from `start`. On hitting a polygon the robot
/// tours it completely, then moves along it to the farthest point of the
/// polygon on the half-line, and continues from there. The walk ends on the
/// first polygon beyond which no progress along the half-line is possible.
pub fn initial_walk(terrain: &Terrain, start: Point) -> Result<InitialWalk, ExploreError> {
    if !terrain.contains_interior(start) {
        return Err(ExploreError::StartNotInterior(start));
    }
    let region = terrain.region();
    let bb = region.bbox();
    let far = Point::new(bb.max.x + bb.width() + 1.0, start.y);
    let eta = 1e-9 * (1.0 + bb.width().max(bb.height()));
    let full = far.x - start.x;

    // parameters along [start, far] where the half-line meets loop `i`
    let hits_on = |i: usize, buf: &mut Vec<f64>| {
        buf.clear();
        for (a, b) in region.loops()[i].edges() {
            segment_hits(start, far, a, b, 0.0, buf);
        }
    };

    let mut polyline = vec![start];
    let mut hits = Vec::new();
    let mut pos_t = 0.0;
    let mut buf = Vec::new();
    loop {
        // nearest boundary point strictly ahead of the current position
        let mut best: Option<(f64, usize)> = None;
        for i in 0..region.loops().len() {
            let lb = region.loops()[i].bbox();
            if start.y < lb.min.y - eta || start.y > lb.max.y + eta || lb.max.x < start.x {
                continue;
            }
            hits_on(i, &mut buf);
            for &t in &buf {
                if t * full > pos_t * full + eta && best.map_or(true, |(bt, _)| t < bt) {
                    best = Some((t, i));
                }
            }
        }
        let (t_hit, id) = best.ok_or(ExploreError::RayMissed)?;
        let ring = &region.loops()[id];
        let h = start.lerp(far, t_hit);
        polyline.push(h);
        hits.push(id);
        let s_h = ring.locate(h).0;
        polyline.extend(ring.span(s_h, ring.perimeter()).into_iter().skip(1));

        hits_on(id, &mut buf);
        let t_u = buf.iter().copied().fold(t_hit, f64::max);
        let u = start.lerp(far, t_u);
        let s_u = ring.locate(u).0;
        let around = (s_u - s_h).rem_euclid(ring.perimeter());
        polyline.extend(ring.span(s_h, around).into_iter().skip(1));
        if let Some(last) = polyline.last_mut() {
            *last = u;
        }

        let probe = Point::new(u.x + 1e3 * eta, u.y);
        if id == 0 || !terrain.contains_interior(probe) {
            polyline.dedup();
            return Ok(InitialWalk { section: Section::new(SectionKind::InitialWalk, polyline), r0: u, hits });
        }
        pos_t = t_u;
    }
}

/// Outcome of an unlimited-vision exploration.
#[derive(Clone, Debug)]
pub struct UnlimitedRun {
    pub trajectory: Trajectory,
    pub quadtree: Quadtree<f64>,
    pub approaches: Vec<ApproachEvent>,
    pub counters: Counters,
    pub exp_trav_calls: usize,
    pub walk: InitialWalk,
    pub delta: f64,
}

/// Summary written into reports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnlimitedSummary {
    pub exp_trav_calls: usize,
    pub walk_length: f64,
    pub delta: f64,
    pub non_terminal: usize,
    pub diameter_sum: f64,
}

impl UnlimitedRun {
    pub fn summary(&self) -> UnlimitedSummary {
        UnlimitedSummary {
            exp_trav_calls: self.exp_trav_calls,
            walk_length: self.walk.section.length,
            delta: self.delta,
            non_terminal: self.quadtree.non_terminal_count(),
            diameter_sum: self.quadtree.diameter_sum(),
        }
    }
}

/// Smallest axis-aligned square with the same lower-left corner as the
/// terrain's bounding box that covers it.
pub fn root_square(terrain: &Terrain) -> Square {
    let bb = terrain.outer().bbox();
    Square::new(bb.min, bb.width().max(bb.height()))
}

/// Lowest-numbered obstacle not in `visited` having a witness `q` visible from
/// `r` with `|rq| <= 2 D(S_t)`, `S_t` being the terminal square of `qt` at `q`.
/// Witnesses are the obstacle's vertices and points every `delta` along it.
pub fn find_approachable(
    terrain: &Terrain,
    qt: &Quadtree<f64>,
    visited: &[usize],
    r: Point,
    delta: f64,
) -> Result<Option<(usize, Point)>, ExploreError> {
    let region = terrain.region();
    let ids = (0..region.loops().len()).map(PolygonId).collect();
    let mut domain = Domain::new(region, ids, delta);
    domain.mark_visited(0);
    for &v in visited {
        domain.mark_visited(v);
    }
    Ok(domain.find_approachable(qt, r)?.map(|t| (t.loop_id, t.q)))
}

/// Full exploration: initial walk, then the traversal of the outer polygon
/// from the walk's end point, recursing into every obstacle.
pub fn explore_unlimited(terrain: &Terrain, start: Point, cfg: &ExploreConfig) -> Result<UnlimitedRun, ExploreError> {
    let walk = initial_walk(terrain, start)?;
    let metrics = terrain.metrics();
    let delta = cfg.step(metrics.diameter, metrics.perimeter);
    let region = terrain.region();
    let ids = (0..region.loops().len()).map(PolygonId).collect();
    let mut domain = Domain::new(region, ids, delta);
    let mut qt = Quadtree::new(root_square(terrain));
    let mut rec = Recorder::new(None);
    rec.trajectory.push(walk.section.clone());
    let s0 = region.loops()[0].locate(walk.r0).0;
    match exp_trav(&mut domain, &mut qt, &mut rec, 0, s0) {
        Ok(()) | Err(Halt::Interrupted) => {}
        Err(Halt::Failed(e)) => return Err(e),
    }
    Ok(UnlimitedRun {
        trajectory: rec.trajectory,
        quadtree: qt,
        approaches: rec.approaches,
        counters: rec.counters,
        exp_trav_calls: rec.exp_trav_calls,
        walk,
        delta,
    })
}
