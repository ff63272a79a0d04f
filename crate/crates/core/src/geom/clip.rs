//! Connected components of `region ∩ square`.
//!
//! The terrain edges crossing the square and the square's own edges are cut at
//! every mutual intersection into a planar arrangement. A directed edge is kept
//! when the clipped region lies on its left and not on its right; the kept edges
//! are then chained into loops with the usual "first clockwise turn" rule. Counter-
//! clockwise loops bound components, clockwise loops are holes and get attached to
//! the smallest component that encloses them.

use std::collections::HashMap;

use super::point::{segment_hits, Point2};
use super::polygon::{BBox, EdgeKind, Region, Ring};
use super::square::Square;
use super::terrain::Terrain;
use crate::scalar::Scalar;

/// One connected component of the terrain inside a tile (a cell).
#[derive(Clone, Debug)]
pub struct CellRegion<S> {
    /// Outer chain first, then holes; every edge tagged terrain or tile.
    pub region: Region<S>,
    pub tile: Square<S>,
    /// Cell area `A_C`.
    pub area: S,
    /// Boundary length inherited from the terrain boundary, `P_C`.
    pub terrain_length: S,
    /// Boundary length inherited from the tile boundary, `R_C`.
    pub tile_length: S,
}

impl<S: Scalar> CellRegion<S> {
    pub fn outer(&self) -> &Ring<S> {
        self.region.outer()
    }

    pub fn holes(&self) -> &[Ring<S>] {
        self.region.holes()
    }

    /// Largest vertex-to-vertex distance of the outer chain.
    pub fn diameter(&self) -> S {
        let v = self.outer().vertices();
        let mut best = S::zero();
        for (i, &a) in v.iter().enumerate() {
            for &b in &v[i + 1..] {
                best = best.max(a.dist(b));
            }
        }
        best
    }

    /// True if `p` lies on the closed cell (boundary or interior).
    pub fn contains(&self, p: Point2<S>) -> bool {
        self.tile.contains_closed(p, S::geom_eps()) && self.region.contains(p)
    }
}

pub fn clip_to_tile<S: Scalar>(terrain: &Terrain<S>, tile: &Square<S>) -> Vec<CellRegion<S>> {
    clip_region_to_tile(terrain.region(), tile)
}

struct Seg<S> {
    a: Point2<S>,
    b: Point2<S>,
    kind: EdgeKind,
}

/// Clips the closed segment `ab` to the closed axis-aligned box (Liang-Barsky).
fn clip_segment<S: Scalar>(a: Point2<S>, b: Point2<S>, lo: Point2<S>, hi: Point2<S>) -> Option<(Point2<S>, Point2<S>)> {
    let d = b - a;
    let mut t0 = S::zero();
    let mut t1 = S::one();
    for (p, q) in [(-d.x, a.x - lo.x), (d.x, hi.x - a.x), (-d.y, a.y - lo.y), (d.y, hi.y - a.y)] {
        if p == S::zero() {
            if q < S::zero() {
                return None;
            }
        } else {
            let r = q / p;
            if p < S::zero() {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    if t0 > t1 {
        return None;
    }
    Some((a.lerp(b, t0), a.lerp(b, t1)))
}

struct Vertices<S> {
    pts: Vec<Point2<S>>,
    tol: S,
}

impl<S: Scalar> Vertices<S> {
    fn id(&mut self, p: Point2<S>) -> usize {
        if let Some(i) = self.pts.iter().position(|q| q.dist(p) <= self.tol) {
            return i;
        }
        self.pts.push(p);
        self.pts.len() - 1
    }
}

pub fn clip_region_to_tile<S: Scalar>(region: &Region<S>, tile: &Square<S>) -> Vec<CellRegion<S>> {
    let eps = S::geom_eps();
    let lo = tile.origin;
    let hi = tile.max_corner();
    let tile_box = BBox { min: lo, max: hi };

    let corners = tile.corners();
    let mut segs: Vec<Seg<S>> = (0..4).map(|i| Seg { a: corners[i], b: corners[(i + 1) % 4], kind: EdgeKind::Tile }).collect();
    for ring in region.loops() {
        if !ring.bbox().overlaps(&tile_box, eps) {
            continue;
        }
        for i in 0..ring.len() {
            let (a, b) = ring.edge(i);
            if !BBox::of([a, b]).overlaps(&tile_box, eps) {
                continue;
            }
            if let Some((ca, cb)) = clip_segment(a, b, lo, hi) {
                if ca.dist(cb) > eps {
                    segs.push(Seg { a: ca, b: cb, kind: ring.kind(i) });
                }
            }
        }
    }

    // cut every segment at all intersections with the others
    let mut verts = Vertices { pts: Vec::new(), tol: eps * S::lit(10.0) };
    let mut edges: HashMap<(usize, usize), EdgeKind> = HashMap::new();
    let mut edge_order: Vec<(usize, usize)> = Vec::new();
    let mut ts: Vec<S> = Vec::new();
    for i in 0..segs.len() {
        ts.clear();
        ts.push(S::zero());
        ts.push(S::one());
        let si = &segs[i];
        let bi = BBox::of([si.a, si.b]);
        for (j, sj) in segs.iter().enumerate() {
            if i == j || !bi.overlaps(&BBox::of([sj.a, sj.b]), eps) {
                continue;
            }
            segment_hits(si.a, si.b, sj.a, sj.b, eps, &mut ts);
        }
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        let mut prev = verts.id(si.a);
        for &t in &ts[1..] {
            let v = verts.id(si.a.lerp(si.b, t));
            if v == prev {
                continue;
            }
            let key = (prev.min(v), prev.max(v));
            match edges.get_mut(&key) {
                Some(k) => {
                    if let EdgeKind::Terrain(_) = si.kind {
                        *k = si.kind;
                    }
                }
                None => {
                    edges.insert(key, si.kind);
                    edge_order.push(key);
                }
            }
            prev = v;
        }
    }

    let pts = verts.pts;
    let inside = |p: Point2<S>| p.x > lo.x && p.x < hi.x && p.y > lo.y && p.y < hi.y && region.contains_parity(p);
    let offset = eps * S::lit(100.0);

    // directed half-edges with the clipped region on their left
    let mut half: Vec<(usize, usize, EdgeKind)> = Vec::new();
    for &(u, v) in &edge_order {
        let kind = edges[&(u, v)];
        let (a, b) = (pts[u], pts[v]);
        let len = a.dist(b);
        let dir = (b - a) * (S::one() / len);
        let n = dir.perp();
        let off = offset.min(len * S::lit(0.25));
        let mid = a.lerp(b, S::lit(0.5));
        let left = inside(mid + n * off);
        let right = inside(mid - n * off);
        if left && !right {
            half.push((u, v, kind));
        } else if right && !left {
            half.push((v, u, kind));
        }
    }

    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); pts.len()];
    for (h, &(u, _, _)) in half.iter().enumerate() {
        outgoing[u].push(h);
    }
    let two_pi = S::PI() + S::PI();
    let angle = |d: Point2<S>| d.y.atan2(d.x);
    let mut used = vec![false; half.len()];
    let mut loops: Vec<(Vec<Point2<S>>, Vec<EdgeKind>)> = Vec::new();
    for start in 0..half.len() {
        if used[start] {
            continue;
        }
        let mut vs = Vec::new();
        let mut ks = Vec::new();
        let mut e = start;
        let mut ok = true;
        loop {
            used[e] = true;
            let (u, v, k) = half[e];
            vs.push(pts[u]);
            ks.push(k);
            let back = angle(pts[u] - pts[v]);
            let mut best: Option<(S, usize)> = None;
            for &o in &outgoing[v] {
                let a = angle(pts[half[o].1] - pts[v]);
                let mut cw = back - a;
                while cw <= S::zero() {
                    cw = cw + two_pi;
                }
                while cw > two_pi {
                    cw = cw - two_pi;
                }
                if best.map_or(true, |(b, _)| cw < b) {
                    best = Some((cw, o));
                }
            }
            match best {
                Some((_, next)) if next == start => break,
                Some((_, next)) if !used[next] => e = next,
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && vs.len() >= 3 {
            loops.push((vs, ks));
        }
    }

    let rings: Vec<Ring<S>> = loops.into_iter().map(|(v, k)| Ring::new(v, k)).collect();
    let min_area = eps * eps;
    let (outers, holes): (Vec<Ring<S>>, Vec<Ring<S>>) = rings
        .into_iter()
        .filter(|r| r.signed_area().abs() > min_area)
        .partition(|r| r.signed_area() > S::zero());

    let mut groups: Vec<Vec<Ring<S>>> = outers.into_iter().map(|o| vec![o]).collect();
    for h in holes {
        let (a, b) = h.edge(0);
        let len = a.dist(b);
        let probe = a.lerp(b, S::lit(0.5)) + (b - a).perp() * (offset.min(len * S::lit(0.25)) / len);
        let owner = groups
            .iter()
            .enumerate()
            .filter(|(_, g)| Region::new(vec![g[0].clone()]).contains_parity(probe))
            .min_by(|(_, x), (_, y)| {
                x[0].signed_area().partial_cmp(&y[0].signed_area()).unwrap_or(std::cmp::Ordering::Equal)
            })
            .map(|(i, _)| i);
        if let Some(i) = owner {
            groups[i].push(h);
        }
    }

    groups
        .into_iter()
        .map(|loops| {
            let region = Region::new(loops);
            let mut terrain_length = S::zero();
            let mut tile_length = S::zero();
            for r in region.loops() {
                for i in 0..r.len() {
                    let (a, b) = r.edge(i);
                    match r.kind(i) {
                        EdgeKind::Terrain(_) => terrain_length = terrain_length + a.dist(b),
                        EdgeKind::Tile => tile_length = tile_length + a.dist(b),
                    }
                }
            }
            CellRegion { area: region.area(), region, tile: *tile, terrain_length, tile_length }
        })
        .collect()
}
