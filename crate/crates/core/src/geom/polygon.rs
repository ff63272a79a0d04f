use serde::{Deserialize, Serialize};

use super::point::{orient, segment_distance, segment_hits, segments_touch, Point2};
use super::GeomError;
use crate::scalar::Scalar;

/// A simple polygon given by its vertex cycle (the closing edge is implicit).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar + Serialize", deserialize = "S: Scalar + Deserialize<'de>"))]
#[serde(transparent)]
pub struct Polygon<S> {
    vertices: Vec<Point2<S>>,
}

impl<S: Scalar> Polygon<S> {
    /// Builds a polygon and checks it is simple, non-degenerate and finite.
    pub fn new(vertices: Vec<Point2<S>>) -> Result<Self, GeomError> {
        let poly = Self { vertices };
        poly.validate()?;
        Ok(poly)
    }

    /// Builds a polygon without running validity checks.
    pub fn new_unchecked(vertices: Vec<Point2<S>>) -> Self {
        Self { vertices }
    }

    pub fn validate(&self) -> Result<(), GeomError> {
        let n = self.vertices.len();
        if n < 3 {
            return Err(GeomError::TooFewVertices(n));
        }
        if self.vertices.iter().any(|p| !p.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        let eps = S::geom_eps();
        for i in 0..n {
            if self.vertices[i].approx_eq(self.vertices[(i + 1) % n], eps) {
                return Err(GeomError::RepeatedVertex(i));
            }
        }
        if self.signed_area().abs() <= eps {
            return Err(GeomError::ZeroArea);
        }
        if !self.is_simple() {
            return Err(GeomError::SelfIntersecting);
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Point2<S>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge(&self, i: usize) -> (Point2<S>, Point2<S>) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2<S>, Point2<S>)> + '_ {
        (0..self.vertices.len()).map(move |i| self.edge(i))
    }

    /// Shoelace area; positive for counter-clockwise vertex order.
    pub fn signed_area(&self) -> S {
        let half = S::lit(0.5);
        self.edges().fold(S::zero(), |acc, (a, b)| acc + a.cross(b)) * half
    }

    pub fn area(&self) -> S {
        self.signed_area().abs()
    }

    pub fn perimeter(&self) -> S {
        self.edges().fold(S::zero(), |acc, (a, b)| acc + a.dist(b))
    }

    pub fn is_ccw(&self) -> bool {
        self.signed_area() > S::zero()
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        Self { vertices: v }
    }

    /// Returns the polygon with the requested orientation.
    pub fn oriented(self, ccw: bool) -> Self {
        if self.is_ccw() == ccw {
            self
        } else {
            self.reversed()
        }
    }

    pub fn bbox(&self) -> BBox<S> {
        BBox::of(self.vertices.iter().copied())
    }

    /// O(n^2) simplicity test: non-adjacent edges must not touch, adjacent edges
    /// may only share their common vertex.
    pub fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        let eps = S::geom_eps();
        for i in 0..n {
            let (a, b) = self.edge(i);
            for j in (i + 1)..n {
                let (c, d) = self.edge(j);
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    // the shared vertex is expected; reject an edge folding back onto its neighbour
                    let (prev_start, next_end, e0, e1) = if j == i + 1 { (a, d, (a, b), (c, d)) } else { (c, b, (c, d), (a, b)) };
                    if segment_distance(next_end, e0.0, e0.1).0 <= eps || segment_distance(prev_start, e1.0, e1.1).0 <= eps {
                        return false;
                    }
                    continue;
                }
                if segments_touch(a, b, c, d, eps) {
                    return false;
                }
            }
        }
        true
    }

    /// Crossing-number test; the answer for points on the boundary is unspecified.
    pub fn contains_parity(&self, p: Point2<S>) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn boundary_distance(&self, p: Point2<S>) -> S {
        self.edges()
            .map(|(a, b)| segment_distance(p, a, b).0)
            .fold(S::infinity(), S::min)
    }

    /// Closed containment: interior or within `geom_eps` of the boundary.
    pub fn contains_closed(&self, p: Point2<S>) -> bool {
        self.boundary_distance(p) <= S::geom_eps() || self.contains_parity(p)
    }

    /// Strict containment: interior and farther than `geom_eps` from the boundary.
    pub fn contains_strict(&self, p: Point2<S>) -> bool {
        self.boundary_distance(p) > S::geom_eps() && self.contains_parity(p)
    }

    /// Largest pairwise distance among vertices (equals the convex-hull diameter).
    pub fn diameter(&self) -> S {
        let mut best = S::zero();
        for (i, &a) in self.vertices.iter().enumerate() {
            for &b in &self.vertices[i + 1..] {
                best = best.max(a.dist(b));
            }
        }
        best
    }
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BBox<S> {
    pub min: Point2<S>,
    pub max: Point2<S>,
}

impl<S: Scalar> BBox<S> {
    pub fn of(points: impl IntoIterator<Item = Point2<S>>) -> Self {
        let mut min = Point2::new(S::infinity(), S::infinity());
        let mut max = Point2::new(S::neg_infinity(), S::neg_infinity());
        for p in points {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        Self { min, max }
    }

    pub fn width(&self) -> S {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> S {
        self.max.y - self.min.y
    }

    pub fn overlaps(&self, o: &Self, pad: S) -> bool {
        self.min.x <= o.max.x + pad
            && o.min.x <= self.max.x + pad
            && self.min.y <= o.max.y + pad
            && o.min.y <= self.max.y + pad
    }

    pub fn contains(&self, p: Point2<S>, pad: S) -> bool {
        p.x >= self.min.x - pad && p.x <= self.max.x + pad && p.y >= self.min.y - pad && p.y <= self.max.y + pad
    }
}

/// Origin of a boundary edge: the terrain boundary (with the index of the terrain
/// polygon it belongs to) or the boundary of a tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeKind {
    Terrain(usize),
    Tile,
}

/// A closed boundary loop with cumulative arc lengths, used for traversal.
#[derive(Clone, Debug)]
pub struct Ring<S> {
    vertices: Vec<Point2<S>>,
    kinds: Vec<EdgeKind>,
    /// `cum[i]` is the arc length at vertex `i`; `cum[n]` is the perimeter.
    cum: Vec<S>,
    bbox: BBox<S>,
}

impl<S: Scalar> Ring<S> {
    pub fn new(vertices: Vec<Point2<S>>, kinds: Vec<EdgeKind>) -> Self {
        assert_eq!(vertices.len(), kinds.len(), "one edge kind per vertex");
        let n = vertices.len();
        let mut cum = Vec::with_capacity(n + 1);
        let mut acc = S::zero();
        cum.push(acc);
        for i in 0..n {
            acc = acc + vertices[i].dist(vertices[(i + 1) % n]);
            cum.push(acc);
        }
        let bbox = BBox::of(vertices.iter().copied());
        Self { vertices, kinds, cum, bbox }
    }

    pub fn from_polygon(poly: &Polygon<S>, kind: EdgeKind) -> Self {
        Self::new(poly.vertices().to_vec(), vec![kind; poly.len()])
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Point2<S>] {
        &self.vertices
    }

    pub fn kind(&self, i: usize) -> EdgeKind {
        self.kinds[i]
    }

    pub fn kinds(&self) -> &[EdgeKind] {
        &self.kinds
    }

    pub fn edge(&self, i: usize) -> (Point2<S>, Point2<S>) {
        (self.vertices[i], self.vertices[(i + 1) % self.vertices.len()])
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2<S>, Point2<S>)> + '_ {
        (0..self.vertices.len()).map(move |i| self.edge(i))
    }

    pub fn bbox(&self) -> &BBox<S> {
        &self.bbox
    }

    pub fn perimeter(&self) -> S {
        self.cum[self.vertices.len()]
    }

    /// Arc length at which vertex `i` is reached.
    pub fn vertex_arc(&self, i: usize) -> S {
        self.cum[i]
    }

    pub fn signed_area(&self) -> S {
        let n = self.vertices.len();
        let mut acc = S::zero();
        for i in 0..n {
            acc = acc + self.vertices[i].cross(self.vertices[(i + 1) % n]);
        }
        acc * S::lit(0.5)
    }

    pub fn to_polygon(&self) -> Polygon<S> {
        Polygon::new_unchecked(self.vertices.clone())
    }

    /// Wraps an arc length into `[0, perimeter)`.
    pub fn wrap(&self, s: S) -> S {
        let l = self.perimeter();
        let mut w = s % l;
        if w < S::zero() {
            w = w + l;
        }
        if w >= l {
            w = S::zero();
        }
        w
    }

    /// Index of the edge containing arc length `s` (already wrapped).
    fn edge_index(&self, s: S) -> usize {
        let n = self.vertices.len();
        // first i with cum[i+1] > s
        let idx = self.cum[1..].partition_point(|&c| c <= s);
        idx.min(n - 1)
    }

    /// Point at arc length `s` (wrapped).
    pub fn point_at(&self, s: S) -> Point2<S> {
        let s = self.wrap(s);
        let i = self.edge_index(s);
        let (a, b) = self.edge(i);
        let len = self.cum[i + 1] - self.cum[i];
        if len <= S::zero() {
            return a;
        }
        a.lerp(b, (s - self.cum[i]) / len)
    }

    /// Arc-length parameter of the point of the ring closest to `p`, with its distance.
    pub fn locate(&self, p: Point2<S>) -> (S, S) {
        let mut best = (S::zero(), S::infinity());
        for i in 0..self.vertices.len() {
            let (a, b) = self.edge(i);
            let (d, t) = segment_distance(p, a, b);
            if d < best.1 {
                let len = self.cum[i + 1] - self.cum[i];
                let mut s = self.cum[i] + t * len;
                if s >= self.perimeter() {
                    s = S::zero();
                }
                best = (s, d);
            }
        }
        best
    }

    /// Polyline following the ring from `start` for `length` (which may equal the
    /// perimeter for a full tour, never more).
    pub fn span(&self, start: S, length: S) -> Vec<Point2<S>> {
        let l = self.perimeter();
        let length = length.max(S::zero()).min(l);
        let start = self.wrap(start);
        let mut out = vec![self.point_at(start)];
        if length <= S::zero() {
            return out;
        }
        let end = start + length;
        let n = self.vertices.len();
        // walk forward over vertex arcs strictly between start and end
        let mut i = self.edge_index(start) + 1;
        let mut lap = S::zero();
        loop {
            if i > n {
                i = 1;
                lap = lap + l;
            }
            let arc = self.cum[i] + lap;
            if arc >= end {
                break;
            }
            if arc > start {
                out.push(self.vertices[i % n]);
            }
            i += 1;
        }
        out.push(self.point_at(end));
        out
    }

    /// Lengths of terrain-tagged and tile-tagged boundary within the span
    /// `[start, start + length]`.
    pub fn span_kind_lengths(&self, start: S, length: S) -> (S, S) {
        let l = self.perimeter();
        let length = length.max(S::zero()).min(l);
        let n = self.vertices.len();
        let mut terrain = S::zero();
        let mut tile = S::zero();
        let start = self.wrap(start);
        let end = start + length;
        for lap in 0..2 {
            let off = if lap == 0 { S::zero() } else { l };
            for i in 0..n {
                let a = self.cum[i] + off;
                let b = self.cum[i + 1] + off;
                let lo = a.max(start);
                let hi = b.min(end);
                if hi > lo {
                    match self.kinds[i] {
                        EdgeKind::Terrain(_) => terrain = terrain + (hi - lo),
                        EdgeKind::Tile => tile = tile + (hi - lo),
                    }
                }
            }
        }
        (terrain, tile)
    }

    /// Polyline along the ring between arc lengths `from` and `to`, following the
    /// ring orientation and wrapping past the start when `to < from`.
    pub fn boundary_walk(&self, from: S, to: S) -> Result<Vec<Point2<S>>, GeomError> {
        let l = self.perimeter();
        let eps = S::geom_eps();
        for v in [from, to] {
            if !(v >= -eps && v <= l + eps) {
                return Err(GeomError::ArcOutOfRange { value: v.to_f64_lossy(), perimeter: l.to_f64_lossy() });
            }
        }
        let length = if to >= from { to - from } else { l - from + to };
        Ok(self.span(from, length))
    }
}

/// Arc length of a polyline.
pub fn polyline_length<S: Scalar>(pts: &[Point2<S>]) -> S {
    pts.windows(2).fold(S::zero(), |acc, w| acc + w[0].dist(w[1]))
}

/// A polygonal region with holes: `loops[0]` is the counter-clockwise outer
/// boundary, every further loop is a clockwise hole. The region lies to the left
/// of every directed boundary edge.
#[derive(Clone, Debug)]
pub struct Region<S> {
    loops: Vec<Ring<S>>,
}

impl<S: Scalar> Region<S> {
    pub fn new(loops: Vec<Ring<S>>) -> Self {
        assert!(!loops.is_empty(), "region needs an outer loop");
        Self { loops }
    }

    pub fn loops(&self) -> &[Ring<S>] {
        &self.loops
    }

    pub fn outer(&self) -> &Ring<S> {
        &self.loops[0]
    }

    pub fn holes(&self) -> &[Ring<S>] {
        &self.loops[1..]
    }

    pub fn area(&self) -> S {
        self.loops.iter().fold(S::zero(), |acc, r| acc + r.signed_area())
    }

    pub fn bbox(&self) -> &BBox<S> {
        self.loops[0].bbox()
    }

    fn near_boundary(&self, p: Point2<S>, eps: S) -> bool {
        self.loops.iter().any(|r| {
            r.bbox().contains(p, eps) && r.edges().any(|(a, b)| segment_distance(p, a, b).0 <= eps)
        })
    }

    fn ring_parity(r: &Ring<S>, p: Point2<S>) -> bool {
        if !r.bbox().contains(p, S::zero()) {
            return false;
        }
        let mut inside = false;
        for (a, b) in r.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Interior test without boundary tolerance (valid for points off the boundary).
    pub fn contains_parity(&self, p: Point2<S>) -> bool {
        Self::ring_parity(&self.loops[0], p) && !self.loops[1..].iter().any(|h| Self::ring_parity(h, p))
    }

    /// Closed containment: boundary points belong to the region.
    pub fn contains(&self, p: Point2<S>) -> bool {
        self.near_boundary(p, S::geom_eps()) || self.contains_parity(p)
    }

    /// Interior containment with a clearance from every boundary edge.
    pub fn contains_with_clearance(&self, p: Point2<S>, clearance: S) -> bool {
        !self.near_boundary(p, clearance.max(S::geom_eps())) && self.contains_parity(p)
    }

    pub fn boundary_distance(&self, p: Point2<S>) -> S {
        self.loops
            .iter()
            .flat_map(|r| r.edges())
            .map(|(a, b)| segment_distance(p, a, b).0)
            .fold(S::infinity(), S::min)
    }

    /// True iff every point of the closed segment `pq` lies in the closed region.
    /// Grazing the boundary is allowed.
    pub fn segment_inside(&self, p: Point2<S>, q: Point2<S>) -> bool {
        let eps = S::geom_eps();
        let seg_box = BBox::of([p, q]);
        let mut ts: Vec<S> = vec![S::zero(), S::one()];
        for r in &self.loops {
            if !r.bbox().overlaps(&seg_box, eps) {
                continue;
            }
            for (a, b) in r.edges() {
                segment_hits(p, q, a, b, eps, &mut ts);
            }
        }
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        ts.dedup_by(|a, b| (*a - *b).abs() <= S::lit(1e-12));
        let half = S::lit(0.5);
        if ts.len() == 2 {
            return self.contains(p.lerp(q, half));
        }
        ts.windows(2).all(|w| self.contains(p.lerp(q, (w[0] + w[1]) * half)))
    }
}

/// Orientation helper used by tests and validators.
pub fn is_left<S: Scalar>(a: Point2<S>, b: Point2<S>, p: Point2<S>) -> bool {
    orient(a, b, p) > S::zero()
}
