//! SVG rendering of a terrain and a trajectory.

use std::fmt::Write as _;
use std::path::Path;

use super::HarnessError;
use crate::trajectory::{SectionKind, Trajectory};
use crate::{Point, Terrain};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 20.0;
const LEGEND: f64 = 150.0;

pub fn section_color(kind: SectionKind) -> &'static str {
    match kind {
        SectionKind::InitialWalk => "#7f7f7f",
        SectionKind::Recognition => "#1f77b4",
        SectionKind::Exploration => "#2ca02c",
        SectionKind::Approach => "#d62728",
        SectionKind::ApproachReturn => "#ff9896",
        SectionKind::CellTour => "#9467bd",
        SectionKind::StageReturn => "#bcbd22",
    }
}

/// Renders the terrain outline, filled obstacles and the trajectory, one
/// polyline per section coloured by kind, plus a legend and a scale bar.
/// Coordinates are printed with fixed precision so equal inputs give equal bytes.
pub fn svg_string(terrain: &Terrain, trajectory: &Trajectory) -> String {
    let bb = terrain.outer().bbox();
    let extent = bb.width().max(bb.height());
    let scale = (WIDTH - 2.0 * MARGIN) / extent;
    let height = bb.height() * scale + 2.0 * MARGIN + 30.0;
    let map = |p: Point| ((p.x - bb.min.x) * scale + MARGIN, (bb.max.y - p.y) * scale + MARGIN);
    let path = |pts: &[Point], close: bool| {
        let mut d = String::new();
        for (i, &p) in pts.iter().enumerate() {
            let (x, y) = map(p);
            let _ = write!(d, "{}{:.3},{:.3}", if i == 0 { "M" } else { " L" }, x, y);
        }
        if close {
            d.push_str(" Z");
        }
        d
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}">"#,
        WIDTH + LEGEND,
        height,
        WIDTH + LEGEND,
        height
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(s, r##"<path class="outer" d="{}" fill="#f7f7f7" stroke="#000000" stroke-width="1.5"/>"##, path(terrain.outer().vertices(), true));
    for o in terrain.obstacles() {
        let _ = writeln!(s, r##"<path class="obstacle" d="{}" fill="#555555" stroke="#000000" stroke-width="0.5"/>"##, path(o.vertices(), true));
    }
    for sec in &trajectory.sections {
        let _ = writeln!(
            s,
            r#"<path class="{}" d="{}" fill="none" stroke="{}" stroke-width="1" stroke-opacity="0.8"/>"#,
            sec.kind.name(),
            path(&sec.polyline, false),
            section_color(sec.kind)
        );
    }

    for (i, kind) in SectionKind::ALL.iter().enumerate() {
        let y = MARGIN + 18.0 * i as f64;
        let x = WIDTH + 5.0;
        let _ = writeln!(s, r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{}" stroke-width="3"/>"#, x, y, x + 20.0, y, section_color(*kind));
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11">{}</text>"#, x + 25.0, y + 4.0, kind.name());
    }

    let unit = 10f64.powf(extent.log10().floor() - 1.0).max(1e-9);
    let bar = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * unit).rfind(|len| len * scale <= WIDTH / 4.0).unwrap_or(unit);
    let y = height - 12.0;
    let _ = writeln!(s, r##"<line class="scale" x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#000000" stroke-width="2"/>"##, MARGIN, y, MARGIN + bar * scale, y);
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11">{}</text>"#, MARGIN + bar * scale + 5.0, y + 4.0, bar);
    s.push_str("</svg>\n");
    s
}

pub fn render_svg(terrain: &Terrain, trajectory: &Trajectory, out: &Path) -> Result<(), HarnessError> {
    std::fs::write(out, svg_string(terrain, trajectory)).map_err(|e| HarnessError::Io(out.display().to_string(), e.to_string()))
}
