use std::path::Path;

use serde::{Deserialize, Serialize};

use super::point::{segments_touch, Point2};
use super::polygon::{EdgeKind, Polygon, Region, Ring};
use super::GeomError;
use crate::scalar::Scalar;

/// A polygonal terrain: an outer polygon minus pairwise disjoint obstacles.
///
/// Polygon index 0 is the outer boundary (stored counter-clockwise); obstacle `i`
/// has polygon index `i + 1` (stored clockwise). Boundaries belong to the terrain.
#[derive(Clone, Debug)]
pub struct Terrain<S> {
    outer: Polygon<S>,
    obstacles: Vec<Polygon<S>>,
    region: Region<S>,
}

/// The four size parameters every cost bound is stated in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics<S> {
    /// Total perimeter, obstacles included.
    #[serde(rename = "P")]
    pub perimeter: S,
    /// Area of the outer polygon minus the obstacles.
    #[serde(rename = "A")]
    pub area: S,
    /// Diameter of the convex hull of the outer polygon.
    #[serde(rename = "D")]
    pub diameter: S,
    /// Number of obstacles.
    pub k: usize,
}

/// Vision model: unlimited, or limited to a closed disc of the given radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Vision<S> {
    Unlimited,
    Range(S),
}

impl<S: Scalar> Vision<S> {
    pub fn within(&self, p: Point2<S>, q: Point2<S>) -> bool {
        match *self {
            Vision::Unlimited => true,
            Vision::Range(r) => p.dist(q) <= r,
        }
    }
}

/// On-disk terrain layout: `{ "outer": [[x,y],...], "obstacles": [[[x,y],...], ...] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TerrainFile {
    pub outer: Vec<[f64; 2]>,
    #[serde(default)]
    pub obstacles: Vec<Vec<[f64; 2]>>,
}

impl<S: Scalar> Terrain<S> {
    /// Validates and normalizes orientation (outer counter-clockwise, obstacles clockwise).
    pub fn new(outer: Polygon<S>, obstacles: Vec<Polygon<S>>) -> Result<Self, GeomError> {
        outer.validate()?;
        let outer = outer.oriented(true);
        let mut norm = Vec::with_capacity(obstacles.len());
        for (i, ob) in obstacles.into_iter().enumerate() {
            ob.validate().map_err(|e| GeomError::Obstacle(i, Box::new(e)))?;
            let ob = ob.oriented(false);
            if !ob.vertices().iter().all(|&v| outer.contains_strict(v)) || crosses(&outer, &ob) {
                return Err(GeomError::ObstacleOutside(i));
            }
            norm.push(ob);
        }
        for i in 0..norm.len() {
            for j in (i + 1)..norm.len() {
                let (a, b) = (&norm[i], &norm[j]);
                if !a.bbox().overlaps(&b.bbox(), S::geom_eps()) {
                    continue;
                }
                if crosses(a, b) || a.contains_closed(b.vertices()[0]) || b.contains_closed(a.vertices()[0]) {
                    return Err(GeomError::ObstaclesOverlap(i, j));
                }
            }
        }
        let mut loops = vec![Ring::from_polygon(&outer, EdgeKind::Terrain(0))];
        loops.extend(norm.iter().enumerate().map(|(i, p)| Ring::from_polygon(p, EdgeKind::Terrain(i + 1))));
        Ok(Self { outer, obstacles: norm, region: Region::new(loops) })
    }

    pub fn outer(&self) -> &Polygon<S> {
        &self.outer
    }

    pub fn obstacles(&self) -> &[Polygon<S>] {
        &self.obstacles
    }

    /// Terrain polygon by index (0 = outer).
    pub fn polygon(&self, id: usize) -> &Polygon<S> {
        if id == 0 {
            &self.outer
        } else {
            &self.obstacles[id - 1]
        }
    }

    pub fn region(&self) -> &Region<S> {
        &self.region
    }

    pub fn metrics(&self) -> Metrics<S> {
        let perimeter = self.obstacles.iter().fold(self.outer.perimeter(), |acc, o| acc + o.perimeter());
        let area = self.obstacles.iter().fold(self.outer.area(), |acc, o| acc - o.area());
        Metrics { perimeter, area, diameter: self.outer.diameter(), k: self.obstacles.len() }
    }

    /// Closed membership.
    pub fn contains(&self, p: Point2<S>) -> bool {
        self.region.contains(p)
    }

    /// True iff `p` is in the terrain and not within `geom_eps` of its boundary.
    pub fn contains_interior(&self, p: Point2<S>) -> bool {
        self.region.contains_with_clearance(p, S::geom_eps())
    }

    /// True iff the whole closed segment `pq` lies in the terrain.
    pub fn segment_in_terrain(&self, p: Point2<S>, q: Point2<S>) -> Result<bool, GeomError> {
        for v in [p, q] {
            if !self.contains(v) {
                return Err(GeomError::PointOutside { x: v.x.to_f64_lossy(), y: v.y.to_f64_lossy() });
            }
        }
        Ok(self.region.segment_inside(p, q))
    }

    /// Visibility under the given vision model.
    pub fn visible(&self, p: Point2<S>, q: Point2<S>, vision: Vision<S>) -> Result<bool, GeomError> {
        let seg = self.segment_in_terrain(p, q)?;
        Ok(seg && vision.within(p, q))
    }

    pub fn to_file(&self) -> TerrainFile {
        let conv = |p: &Polygon<S>| p.vertices().iter().map(|v| [v.x.to_f64_lossy(), v.y.to_f64_lossy()]).collect();
        TerrainFile { outer: conv(&self.outer), obstacles: self.obstacles.iter().map(conv).collect() }
    }

    pub fn from_file(file: &TerrainFile) -> Result<Self, GeomError> {
        let conv = |pts: &[[f64; 2]]| -> Result<Polygon<S>, GeomError> {
            Polygon::new(pts.iter().map(|&[x, y]| Point2::new(S::lit(x), S::lit(y))).collect())
        };
        let outer = conv(&file.outer)?;
        let obstacles = file
            .obstacles
            .iter()
            .enumerate()
            .map(|(i, o)| conv(o).map_err(|e| GeomError::Obstacle(i, Box::new(e))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(outer, obstacles)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("terrain serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, GeomError> {
        let file: TerrainFile = serde_json::from_str(text).map_err(|e| GeomError::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn load(path: &Path) -> Result<Self, GeomError> {
        let text = std::fs::read_to_string(path).map_err(|e| GeomError::Io(path.display().to_string(), e.to_string()))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<(), GeomError> {
        std::fs::write(path, self.to_json()).map_err(|e| GeomError::Io(path.display().to_string(), e.to_string()))
    }
}

fn crosses<S: Scalar>(a: &Polygon<S>, b: &Polygon<S>) -> bool {
    let eps = S::geom_eps();
    a.edges().any(|(p, q)| b.edges().any(|(r, s)| segments_touch(p, q, r, s, eps)))
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Point2<f64>;

    fn sq(x0: f64, y0: f64, s: f64) -> Polygon<f64> {
        Polygon::new(vec![P::new(x0, y0), P::new(x0 + s, y0), P::new(x0 + s, y0 + s), P::new(x0, y0 + s)]).unwrap()
    }

    fn unit() -> Terrain<f64> {
        Terrain::new(sq(0.0, 0.0, 1.0), vec![]).unwrap()
    }

    fn with_block() -> Terrain<f64> {
        Terrain::new(sq(0.0, 0.0, 1.0), vec![sq(0.4, 0.4, 0.2)]).unwrap()
    }

    #[test]
    fn segment_examples() {
        let t = unit();
        assert!(t.segment_in_terrain(P::new(0.1, 0.1), P::new(0.9, 0.9)).unwrap());
        assert!(t.segment_in_terrain(P::new(0.5, 0.5), P::new(0.5, 0.5)).unwrap());
        let b = with_block();
        assert!(!b.segment_in_terrain(P::new(0.1, 0.5), P::new(0.9, 0.5)).unwrap());
    }

    #[test]
    fn segment_matches_sampling_oracle() {
        let b = with_block();
        let (p, q) = (P::new(0.1, 0.5), P::new(0.9, 0.5));
        let sampled = (0..=10_000).all(|i| {
            let x = p.lerp(q, i as f64 / 10_000.0);
            !b.obstacles()[0].contains_strict(x)
        });
        assert_eq!(sampled, b.segment_in_terrain(p, q).unwrap());
    }

    #[test]
    fn rejects_points_outside() {
        let t = unit();
        assert!(matches!(t.segment_in_terrain(P::new(-0.1, 0.5), P::new(0.5, 0.5)), Err(GeomError::PointOutside { .. })));
        let b = with_block();
        assert!(b.segment_in_terrain(P::new(0.5, 0.5), P::new(0.1, 0.1)).is_err());
    }

    #[test]
    fn visibility_range_is_closed() {
        let t = unit();
        let (p, q) = (P::new(0.0, 0.0), P::new(1.0, 1.0));
        assert!(t.visible(p, q, Vision::Unlimited).unwrap());
        assert!(!t.visible(p, q, Vision::Range(1.0)).unwrap());
        assert!(t.visible(p, q, Vision::Range(std::f64::consts::SQRT_2)).unwrap());
    }

    #[test]
    fn metrics_examples() {
        let m = unit().metrics();
        assert_eq!((m.perimeter, m.area, m.k), (4.0, 1.0, 0));
        assert!((m.diameter - std::f64::consts::SQRT_2).abs() < 1e-15);
        let t = Terrain::new(sq(0.0, 0.0, 1.0), vec![sq(0.45, 0.45, 0.1)]).unwrap();
        let m = t.metrics();
        assert!((m.perimeter - 4.4).abs() < 1e-12);
        assert!((m.area - 0.99).abs() < 1e-12);
        assert_eq!(m.k, 1);
    }

    #[test]
    fn orientation_normalized() {
        let outer = sq(0.0, 0.0, 1.0).reversed();
        let t = Terrain::new(outer, vec![sq(0.4, 0.4, 0.2)]).unwrap();
        assert!(t.outer().is_ccw());
        assert!(!t.obstacles()[0].is_ccw());
    }

    #[test]
    fn rejects_bad_obstacles() {
        assert!(matches!(Terrain::new(sq(0.0, 0.0, 1.0), vec![sq(0.8, 0.8, 0.4)]), Err(GeomError::ObstacleOutside(0))));
        assert!(matches!(
            Terrain::new(sq(0.0, 0.0, 1.0), vec![sq(0.2, 0.2, 0.3), sq(0.4, 0.4, 0.3)]),
            Err(GeomError::ObstaclesOverlap(0, 1))
        ));
        assert!(matches!(
            Terrain::new(sq(0.0, 0.0, 1.0), vec![sq(0.2, 0.2, 0.6), sq(0.4, 0.4, 0.1)]),
            Err(GeomError::ObstaclesOverlap(0, 1))
        ));
    }

    #[test]
    fn json_round_trip() {
        let t = with_block();
        let back = Terrain::<f64>::from_json(&t.to_json()).unwrap();
        assert_eq!(back.to_file(), t.to_file());
    }
}
