//! Robot trajectories as ordered, kind-tagged polyline sections.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::geom::polyline_length;
use crate::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionKind {
    InitialWalk,
    Recognition,
    Exploration,
    Approach,
    ApproachReturn,
    CellTour,
    /// Retracing an interrupted stage back to its start point.
    StageReturn,
}

impl SectionKind {
    pub const ALL: [SectionKind; 7] = [
        SectionKind::InitialWalk,
        SectionKind::Recognition,
        SectionKind::Exploration,
        SectionKind::Approach,
        SectionKind::ApproachReturn,
        SectionKind::CellTour,
        SectionKind::StageReturn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SectionKind::InitialWalk => "initial_walk",
            SectionKind::Recognition => "recognition",
            SectionKind::Exploration => "exploration",
            SectionKind::Approach => "approach",
            SectionKind::ApproachReturn => "approach_return",
            SectionKind::CellTour => "cell_tour",
            SectionKind::StageReturn => "stage_return",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub kind: SectionKind,
    pub polyline: Vec<Point>,
    pub length: f64,
    /// For approach sections: `2 * D(S_t)` of the terminal square holding the
    /// target point at the moment the approach was decided.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approach_limit: Option<f64>,
}

impl Section {
    pub fn new(kind: SectionKind, polyline: Vec<Point>) -> Self {
        let length = polyline_length(&polyline);
        Self { kind, polyline, length, approach_limit: None }
    }

    pub fn start(&self) -> Point {
        self.polyline[0]
    }

    pub fn end(&self) -> Point {
        *self.polyline.last().expect("non-empty section")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub sections: Vec<Section>,
    pub total_length: f64,
}

impl Trajectory {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a section; zero-length sections are dropped.
    pub fn push(&mut self, section: Section) {
        if section.polyline.len() < 2 || section.length <= 0.0 {
            return;
        }
        self.total_length += section.length;
        self.sections.push(section);
    }

    pub fn push_polyline(&mut self, kind: SectionKind, polyline: Vec<Point>) {
        self.push(Section::new(kind, polyline));
    }

    pub fn append(&mut self, other: Trajectory) {
        for s in other.sections {
            self.push(s);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.sections.is_empty()
    }

    pub fn start(&self) -> Option<Point> {
        self.sections.first().map(Section::start)
    }

    pub fn end(&self) -> Option<Point> {
        self.sections.last().map(Section::end)
    }

    /// Sum of section lengths per kind (every kind present, possibly zero).
    pub fn totals_by_kind(&self) -> BTreeMap<SectionKind, f64> {
        let mut m: BTreeMap<SectionKind, f64> = SectionKind::ALL.iter().map(|&k| (k, 0.0)).collect();
        for s in &self.sections {
            *m.get_mut(&s.kind).expect("all kinds present") += s.length;
        }
        m
    }

    /// Largest gap between the end of one section and the start of the next.
    pub fn max_discontinuity(&self) -> f64 {
        self.sections.windows(2).map(|w| w[0].end().dist(w[1].start())).fold(0.0, f64::max)
    }

    /// The whole path retraced backwards as a single section of `kind`.
    pub fn reversed_path(&self, kind: SectionKind) -> Option<Section> {
        let mut pts: Vec<Point> = Vec::new();
        for s in self.sections.iter().rev() {
            for &p in s.polyline.iter().rev() {
                if pts.last().map_or(true, |&l: &Point| l.dist(p) > 0.0) {
                    pts.push(p);
                }
            }
        }
        (pts.len() >= 2).then(|| Section::new(kind, pts))
    }

    /// Points along the trajectory with spacing at most `step` (all vertices included).
    pub fn sample(&self, step: f64) -> Vec<Point> {
        let mut out = Vec::new();
        for s in &self.sections {
            for w in s.polyline.windows(2) {
                let len = w[0].dist(w[1]);
                let n = (len / step).ceil().max(1.0) as usize;
                for i in 0..n {
                    out.push(w[0].lerp(w[1], i as f64 / n as f64));
                }
            }
            out.push(s.end());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn totals_and_continuity() {
        let mut t = Trajectory::new();
        t.push_polyline(SectionKind::Recognition, vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0)]);
        t.push_polyline(SectionKind::Approach, vec![p(1.0, 1.0), p(1.0, 2.0)]);
        t.push_polyline(SectionKind::Exploration, vec![p(1.0, 2.0), p(1.0, 2.0)]);
        assert_eq!(t.sections.len(), 2);
        assert_eq!(t.total_length, 3.0);
        let m = t.totals_by_kind();
        assert_eq!(m[&SectionKind::Recognition], 2.0);
        assert_eq!(m[&SectionKind::CellTour], 0.0);
        assert_eq!(t.max_discontinuity(), 0.0);
        let back = t.reversed_path(SectionKind::StageReturn).unwrap();
        assert_eq!(back.length, 3.0);
        assert_eq!(back.start(), p(1.0, 2.0));
        assert_eq!(back.end(), p(0.0, 0.0));
    }

    #[test]
    fn sampling_spacing() {
        let mut t = Trajectory::new();
        t.push_polyline(SectionKind::Recognition, vec![p(0.0, 0.0), p(1.0, 0.0)]);
        let s = t.sample(0.3);
        assert_eq!(s.len(), 5);
        assert!(s.windows(2).all(|w| w[0].dist(w[1]) <= 0.3 + 1e-12));
    }
}
