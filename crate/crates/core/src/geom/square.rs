use serde::{Deserialize, Serialize};

use super::point::Point2;
use crate::scalar::Scalar;

/// Axis-aligned square with half-open membership: it owns its East and South
/// edges but not its West and North edges, so adjacent squares partition the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar + Serialize", deserialize = "S: Scalar + Deserialize<'de>"))]
pub struct Square<S> {
    /// South-west corner.
    pub origin: Point2<S>,
    pub side: S,
}

/// Child position inside a split square, in the fixed order used by the quadtree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    SouthWest = 0,
    SouthEast = 1,
    NorthWest = 2,
    NorthEast = 3,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::SouthWest, Quadrant::SouthEast, Quadrant::NorthWest, Quadrant::NorthEast];
}

impl<S: Scalar> Square<S> {
    pub fn new(origin: Point2<S>, side: S) -> Self {
        Self { origin, side }
    }

    pub fn diameter(&self) -> S {
        self.side * S::SQRT_2()
    }

    pub fn max_corner(&self) -> Point2<S> {
        Point2::new(self.origin.x + self.side, self.origin.y + self.side)
    }

    pub fn center(&self) -> Point2<S> {
        let h = self.side * S::lit(0.5);
        Point2::new(self.origin.x + h, self.origin.y + h)
    }

    /// Half-open membership: `x0 < x <= x0 + s` and `y0 <= y < y0 + s`.
    pub fn contains(&self, p: Point2<S>) -> bool {
        let m = self.max_corner();
        p.x > self.origin.x && p.x <= m.x && p.y >= self.origin.y && p.y < m.y
    }

    /// Closed membership with tolerance `eps`.
    pub fn contains_closed(&self, p: Point2<S>, eps: S) -> bool {
        let m = self.max_corner();
        p.x >= self.origin.x - eps && p.x <= m.x + eps && p.y >= self.origin.y - eps && p.y <= m.y + eps
    }

    /// Quadrant of the half-open child containing `p`. Points on the vertical
    /// axis go West (the western child owns its East edge), points on the
    /// horizontal axis go North (the northern child owns its South edge).
    pub fn quadrant_of(&self, p: Point2<S>) -> Quadrant {
        let c = self.center();
        match (p.x <= c.x, p.y < c.y) {
            (true, true) => Quadrant::SouthWest,
            (false, true) => Quadrant::SouthEast,
            (true, false) => Quadrant::NorthWest,
            (false, false) => Quadrant::NorthEast,
        }
    }

    pub fn child(&self, q: Quadrant) -> Self {
        let h = self.side * S::lit(0.5);
        let (dx, dy) = match q {
            Quadrant::SouthWest => (S::zero(), S::zero()),
            Quadrant::SouthEast => (h, S::zero()),
            Quadrant::NorthWest => (S::zero(), h),
            Quadrant::NorthEast => (h, h),
        };
        Self::new(Point2::new(self.origin.x + dx, self.origin.y + dy), h)
    }

    /// Corners in counter-clockwise order starting at the south-west corner.
    pub fn corners(&self) -> [Point2<S>; 4] {
        let o = self.origin;
        let m = self.max_corner();
        [o, Point2::new(m.x, o.y), m, Point2::new(o.x, m.y)]
    }
}
