use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// A point (or free vector) in the plane. Serialized as `[x, y]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[S; 2]", into = "[S; 2]")]
#[serde(bound(serialize = "S: Scalar + Serialize", deserialize = "S: Scalar + Deserialize<'de>"))]
pub struct Point2<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> From<[S; 2]> for Point2<S> {
    fn from([x, y]: [S; 2]) -> Self {
        Self { x, y }
    }
}

impl<S: Scalar> From<Point2<S>> for [S; 2] {
    fn from(p: Point2<S>) -> Self {
        [p.x, p.y]
    }
}

impl<S: Scalar> Point2<S> {
    #[inline]
    pub fn new(x: S, y: S) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, o: Self) -> S {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-d cross product.
    #[inline]
    pub fn cross(self, o: Self) -> S {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> S {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, o: Self) -> S {
        (self - o).norm()
    }

    #[inline]
    pub fn dist2(self, o: Self) -> S {
        let d = self - o;
        d.dot(d)
    }

    /// Counter-clockwise perpendicular.
    #[inline]
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    #[inline]
    pub fn lerp(self, o: Self, t: S) -> Self {
        self + (o - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn approx_eq(self, o: Self, tol: S) -> bool {
        self.dist(o) <= tol
    }
}

impl<S: Scalar> Add for Point2<S> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<S: Scalar> Sub for Point2<S> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<S: Scalar> Mul<S> for Point2<S> {
    type Output = Self;
    #[inline]
    fn mul(self, k: S) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

impl<S: Scalar> Neg for Point2<S> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Signed doubled area of triangle `abc`; positive when counter-clockwise.
#[inline]
pub fn orient<S: Scalar>(a: Point2<S>, b: Point2<S>, c: Point2<S>) -> S {
    (b - a).cross(c - a)
}

/// Distance from `p` to the closed segment `ab`, with the clamped projection parameter.
pub fn segment_distance<S: Scalar>(p: Point2<S>, a: Point2<S>, b: Point2<S>) -> (S, S) {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 <= S::zero() {
        return (p.dist(a), S::zero());
    }
    let t = ((p - a).dot(ab) / len2).max(S::zero()).min(S::one());
    (p.dist(a + ab * t), t)
}

/// Intersection parameters of segment `pq` against segment `ab`, expressed as
/// positions along `pq` in `[0, 1]`.
///
/// Proper crossings and touches yield one parameter; collinear overlaps yield the
/// parameters of the overlap ends.
pub fn segment_hits<S: Scalar>(
    p: Point2<S>,
    q: Point2<S>,
    a: Point2<S>,
    b: Point2<S>,
    eps: S,
    out: &mut Vec<S>,
) {
    let d = q - p;
    let e = b - a;
    let dl = d.norm();
    let el = e.norm();
    if dl <= S::zero() || el <= S::zero() {
        return;
    }
    let denom = d.cross(e);
    let ap = a - p;
    if denom.abs() > eps * dl * el {
        let t = ap.cross(e) / denom;
        let u = ap.cross(d) / denom;
        let tt = eps / dl;
        let tu = eps / el;
        if t >= -tt && t <= S::one() + tt && u >= -tu && u <= S::one() + tu {
            out.push(t.max(S::zero()).min(S::one()));
        }
        return;
    }
    // parallel: only collinear overlaps matter
    if (ap.cross(d) / dl).abs() > eps {
        return;
    }
    let d2 = dl * dl;
    let ta = ap.dot(d) / d2;
    let tb = (b - p).dot(d) / d2;
    let (lo, hi) = if ta <= tb { (ta, tb) } else { (tb, ta) };
    let tol = eps / dl;
    if hi < -tol || lo > S::one() + tol {
        return;
    }
    out.push(lo.max(S::zero()).min(S::one()));
    out.push(hi.max(S::zero()).min(S::one()));
}

/// True if the closed segments `ab` and `cd` share a point (within `eps`).
pub fn segments_touch<S: Scalar>(a: Point2<S>, b: Point2<S>, c: Point2<S>, d: Point2<S>, eps: S) -> bool {
    let mut hits = Vec::new();
    segment_hits(a, b, c, d, eps, &mut hits);
    if !hits.is_empty() {
        return true;
    }
    // degenerate segments fall through `segment_hits`
    segment_distance(a, c, d).0 <= eps
        || segment_distance(b, c, d).0 <= eps
        || segment_distance(c, a, b).0 <= eps
        || segment_distance(d, a, b).0 <= eps
}
