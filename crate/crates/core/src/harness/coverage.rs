//! Sampled completeness check: which interior points were seen from the trajectory.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::trajectory::Trajectory;
use crate::{Point, Terrain};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageResult {
    pub h: f64,
    pub clearance: f64,
    pub sampled: usize,
    pub explored: usize,
    pub fraction: f64,
    pub unexplored: Vec<Point>,
}

/// Trajectory points bucketed on a square grid.
struct Buckets {
    size: f64,
    cells: HashMap<(i64, i64), Vec<Point>>,
    lo: (i64, i64),
    hi: (i64, i64),
}

impl Buckets {
    fn new(points: &[Point], size: f64) -> Self {
        let mut cells: HashMap<(i64, i64), Vec<Point>> = HashMap::new();
        let mut lo = (i64::MAX, i64::MAX);
        let mut hi = (i64::MIN, i64::MIN);
        for &p in points {
            let key = Self::key_of(p, size);
            lo = (lo.0.min(key.0), lo.1.min(key.1));
            hi = (hi.0.max(key.0), hi.1.max(key.1));
            cells.entry(key).or_default().push(p);
        }
        Self { size, cells, lo, hi }
    }

    fn key_of(p: Point, size: f64) -> (i64, i64) {
        ((p.x / size).floor() as i64, (p.y / size).floor() as i64)
    }

    /// Calls `f` on points in square rings of buckets around `q`, nearest ring
    /// first, up to ring `max_ring`; stops as soon as `f` returns true.
    fn search(&self, q: Point, max_ring: i64, mut f: impl FnMut(Point) -> bool) -> bool {
        if self.cells.is_empty() {
            return false;
        }
        let (cx, cy) = Self::key_of(q, self.size);
        let reach = (cx - self.lo.0).max(self.hi.0 - cx).max(cy - self.lo.1).max(self.hi.1 - cy);
        for ring in 0..=max_ring.min(reach) {
            for dx in -ring..=ring {
                for dy in -ring..=ring {
                    if dx.abs() != ring && dy.abs() != ring {
                        continue;
                    }
                    if let Some(pts) = self.cells.get(&(cx + dx, cy + dy)) {
                        if pts.iter().any(|&p| f(p)) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
}

/// Samples the terrain on a grid of spacing `h` (skipping points closer than
/// `clearance` to the boundary) and checks, for each sample `q`, whether some
/// point `p` of the trajectory, discretized at `h/2`, sees it: the segment `pq`
/// lies in the terrain and, when `range` is given, `|pq| <= range`.
pub fn coverage_oracle(terrain: &Terrain, trajectory: &Trajectory, range: Option<f64>, h: f64, clearance: f64) -> CoverageResult {
    let region = terrain.region();
    let bb = region.bbox();
    let nx = (bb.width() / h).floor() as usize + 1;
    let ny = (bb.height() / h).floor() as usize + 1;
    let ox = bb.min.x + (bb.width() - (nx - 1) as f64 * h) / 2.0;
    let oy = bb.min.y + (bb.height() - (ny - 1) as f64 * h) / 2.0;
    let samples: Vec<Point> = (0..ny)
        .flat_map(|j| (0..nx).map(move |i| Point::new(ox + i as f64 * h, oy + j as f64 * h)))
        .filter(|&q| region.contains_with_clearance(q, clearance))
        .collect();

    let traj_pts = trajectory.sample(h / 2.0);
    let size = range.unwrap_or_else(|| (bb.width().max(bb.height()) / 32.0).max(h));
    let buckets = Buckets::new(&traj_pts, size);
    let max_ring = match range {
        Some(r) => (r / size).ceil() as i64 + 1,
        None => i64::MAX,
    };
    let sees = |p: Point, q: Point| range.map_or(true, |r| p.dist(q) <= r) && region.segment_inside(p, q);

    let mut last: Option<Point> = None;
    let mut unexplored = Vec::new();
    for &q in &samples {
        if last.is_some_and(|p| sees(p, q)) {
            continue;
        }
        let mut found = None;
        buckets.search(q, max_ring, |p| {
            if sees(p, q) {
                found = Some(p);
                true
            } else {
                false
            }
        });
        match found {
            Some(p) => last = Some(p),
            None => unexplored.push(q),
        }
    }
    let sampled = samples.len();
    let explored = sampled - unexplored.len();
    CoverageResult { h, clearance, sampled, explored, fraction: if sampled == 0 { 1.0 } else { explored as f64 / sampled as f64 }, unexplored }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terrains::gen_empty_square;
    use crate::trajectory::SectionKind;

    fn boundary_tour(side: f64) -> Trajectory {
        let mut t = Trajectory::new();
        t.push_polyline(
            SectionKind::Recognition,
            vec![Point::new(0.0, 0.0), Point::new(side, 0.0), Point::new(side, side), Point::new(0.0, side), Point::new(0.0, 0.0)],
        );
        t
    }

    #[test]
    fn convex_terrain_seen_from_its_boundary() {
        let t = gen_empty_square(1.0).unwrap();
        let c = coverage_oracle(&t, &boundary_tour(1.0), None, 0.05, 0.01);
        assert!(c.sampled > 300);
        assert_eq!(c.fraction, 1.0);
    }

    #[test]
    fn range_one_misses_the_centre_of_a_large_square() {
        let t = gen_empty_square(3.0).unwrap();
        let c = coverage_oracle(&t, &boundary_tour(3.0), Some(1.0), 0.05, 0.01);
        assert!(c.fraction < 1.0);
        // the centre is 1.5 from every boundary point
        assert!(c.unexplored.iter().any(|q| q.dist(Point::new(1.5, 1.5)) < 0.05));
        assert!(c.unexplored.iter().all(|q| q.x.min(q.y).min(3.0 - q.x).min(3.0 - q.y) > 1.0 - 1e-9));
    }

    #[test]
    fn empty_trajectory_sees_nothing() {
        let t = gen_empty_square(1.0).unwrap();
        let c = coverage_oracle(&t, &Trajectory::new(), None, 0.1, 0.01);
        assert!(c.sampled > 0);
        assert_eq!(c.fraction, 0.0);
    }
}
