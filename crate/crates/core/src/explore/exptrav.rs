//! Recognition / exploration traversal of one boundary loop, recursing into
//! every obstacle that becomes approachable.

use serde::{Deserialize, Serialize};

use super::{Counters, ExploreError};
use crate::geom::Region;
use crate::quadtree::{PolygonId, Quadtree};
use crate::trajectory::{Section, SectionKind, Trajectory};
use crate::Point;

/// One approach decision, with the bound it was checked against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproachEvent {
    pub from: Point,
    pub to: Point,
    pub length: f64,
    /// `2 * D(S_t)` at decision time.
    pub limit: f64,
}

pub(crate) enum Halt {
    Interrupted,
    Failed(ExploreError),
}

impl<E: Into<ExploreError>> From<E> for Halt {
    fn from(e: E) -> Self {
        Halt::Failed(e.into())
    }
}

pub(crate) type Step = Result<(), Halt>;

/// Monitor returning `true` when the run must stop.
pub(crate) type Monitor<'m> = &'m mut dyn FnMut(&Counters) -> bool;

/// Everything a run accumulates.
pub(crate) struct Recorder<'m> {
    pub trajectory: Trajectory,
    pub counters: Counters,
    pub approaches: Vec<ApproachEvent>,
    pub exp_trav_calls: usize,
    monitor: Option<Monitor<'m>>,
}

impl<'m> Recorder<'m> {
    pub fn new(monitor: Option<Monitor<'m>>) -> Self {
        Self { trajectory: Trajectory::new(), counters: Counters::default(), approaches: Vec::new(), exp_trav_calls: 0, monitor }
    }

    pub fn check(&mut self) -> Step {
        let stop = match self.monitor.as_mut() {
            Some(m) => m(&self.counters),
            None => false,
        };
        if stop {
            Err(Halt::Interrupted)
        } else {
            Ok(())
        }
    }
}

struct Witness {
    s: f64,
    p: Point,
    limit: f64,
}

pub(crate) struct Target {
    pub loop_id: usize,
    pub s: f64,
    pub q: Point,
    pub limit: f64,
}

/// A region being explored: its outer loop and the holes (obstacles) it contains.
pub(crate) struct Domain<'r> {
    region: &'r Region<f64>,
    ids: Vec<PolygonId>,
    visited: Vec<bool>,
    witnesses: Vec<Vec<Witness>>,
    cached_version: Option<u64>,
    delta: f64,
}

impl<'r> Domain<'r> {
    /// `ids[i]` is the quadtree polygon id for loop `i`; `delta` the detection step.
    pub fn new(region: &'r Region<f64>, ids: Vec<PolygonId>, delta: f64) -> Self {
        let n = region.loops().len();
        let witnesses = region
            .loops()
            .iter()
            .enumerate()
            .map(|(i, ring)| {
                if i == 0 {
                    return Vec::new();
                }
                let mut arcs: Vec<f64> = (0..ring.len()).map(|v| ring.vertex_arc(v)).collect();
                let l = ring.perimeter();
                let steps = (l / delta).ceil() as usize;
                arcs.extend((0..steps).map(|j| j as f64 * delta).filter(|&s| s < l));
                arcs.sort_by(f64::total_cmp);
                arcs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
                arcs.into_iter().map(|s| Witness { s, p: ring.point_at(s), limit: 0.0 }).collect()
            })
            .collect();
        Self { region, ids, visited: vec![false; n], witnesses, cached_version: None, delta }
    }

    pub fn mark_visited(&mut self, loop_id: usize) {
        self.visited[loop_id] = true;
    }

    fn any_unvisited_obstacle(&self) -> bool {
        self.visited[1..].iter().any(|v| !v)
    }

    fn refresh(&mut self, qt: &Quadtree<f64>) -> Result<(), ExploreError> {
        if self.cached_version == Some(qt.version()) {
            return Ok(());
        }
        for (i, ws) in self.witnesses.iter_mut().enumerate() {
            if i == 0 || self.visited[i] {
                continue;
            }
            for w in ws.iter_mut() {
                let node = qt.terminal_at(w.p)?;
                w.limit = 2.0 * qt.node(node).square.diameter();
            }
        }
        self.cached_version = Some(qt.version());
        Ok(())
    }

    /// Lowest-numbered unvisited obstacle with a visible witness `q` such that
    /// `|rq| <= 2 D(S_t)`; among its witnesses the one with the smallest arc length.
    pub fn find_approachable(&mut self, qt: &Quadtree<f64>, r: Point) -> Result<Option<Target>, ExploreError> {
        self.refresh(qt)?;
        let eps = 1e-9;
        for i in 1..self.visited.len() {
            if self.visited[i] {
                continue;
            }
            let ws = &self.witnesses[i];
            let reach = ws.iter().map(|w| w.limit).fold(0.0, f64::max) + eps;
            let bb = self.region.loops()[i].bbox();
            let dx = (bb.min.x - r.x).max(r.x - bb.max.x).max(0.0);
            let dy = (bb.min.y - r.y).max(r.y - bb.max.y).max(0.0);
            if dx * dx + dy * dy > reach * reach {
                continue;
            }
            for w in ws {
                if r.dist(w.p) <= w.limit + eps && self.region.segment_inside(r, w.p) {
                    return Ok(Some(Target { loop_id: i, s: w.s, q: w.p, limit: w.limit }));
                }
            }
        }
        Ok(None)
    }
}

/// Explores loop `loop_id` of the domain starting at arc length `start`:
/// a recognition tour, a split of the terminal square at the start point, then
/// an exploration tour interrupted by approach / recursion / return triples.
/// Ends where it started.
pub(crate) fn exp_trav(domain: &mut Domain<'_>, qt: &mut Quadtree<f64>, rec: &mut Recorder<'_>, loop_id: usize, start: f64) -> Step {
    let region = domain.region;
    let ring = &region.loops()[loop_id];
    let perimeter = ring.perimeter();
    rec.exp_trav_calls += 1;

    rec.trajectory.push_polyline(SectionKind::Recognition, ring.span(start, perimeter));
    rec.counters.perimeter += ring.span_kind_lengths(start, perimeter).0;
    rec.check()?;

    let r_star = ring.point_at(start);
    let node = qt.terminal_at(r_star)?;
    qt.split(node, domain.ids[loop_id])?;
    domain.visited[loop_id] = true;

    // detection stops: every delta and every vertex, as offsets from the start
    let mut stops: Vec<f64> = Vec::new();
    if domain.any_unvisited_obstacle() {
        let steps = (perimeter / domain.delta).ceil() as usize;
        stops.extend((1..steps).map(|j| j as f64 * domain.delta));
        stops.extend((0..ring.len()).map(|v| (ring.vertex_arc(v) - start).rem_euclid(perimeter)).filter(|&o| o > 0.0));
        stops.sort_by(f64::total_cmp);
        stops.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    }

    let mut offset = 0.0;
    let mut flushed = 0.0;
    let mut next = 0;
    loop {
        if domain.any_unvisited_obstacle() {
            let r = ring.point_at(start + offset);
            if let Some(t) = domain.find_approachable(qt, r)? {
                if offset > flushed {
                    rec.trajectory.push_polyline(SectionKind::Exploration, ring.span(start + flushed, offset - flushed));
                    flushed = offset;
                }
                rec.counters.approached += 1;
                rec.check()?;
                let mut approach = Section::new(SectionKind::Approach, vec![r, t.q]);
                approach.approach_limit = Some(t.limit);
                rec.approaches.push(ApproachEvent { from: r, to: t.q, length: approach.length, limit: t.limit });
                rec.trajectory.push(approach);
                exp_trav(domain, qt, rec, t.loop_id, t.s)?;
                rec.trajectory.push_polyline(SectionKind::ApproachReturn, vec![t.q, r]);
                continue;
            }
        } else {
            break;
        }
        if next >= stops.len() {
            break;
        }
        offset = stops[next];
        next += 1;
    }
    if perimeter > flushed {
        rec.trajectory.push_polyline(SectionKind::Exploration, ring.span(start + flushed, perimeter - flushed));
    }
    Ok(())
}
