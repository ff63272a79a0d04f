//! Log-log slope fits of trajectory length against a terrain parameter.

use serde::{Deserialize, Serialize};

use super::report::{run_algorithm, AlgorithmSpec, CoverageConfig};
use super::HarnessError;
use crate::terrains::{generate, Family};

/// Driven parameter of a family ladder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Driver {
    K,
    Perimeter,
    Area,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingSummary {
    pub driver: Driver,
    pub xs: Vec<f64>,
    /// Lengths fitted: the boundary-traversal length for unlimited runs (the
    /// initial walk excluded), the total length otherwise.
    pub ys: Vec<f64>,
    /// Total lengths including the initial walk.
    pub totals: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square residual of the fit in log space.
    pub residual: f64,
    /// Slope fitted to `totals`.
    pub total_slope: f64,
}

/// Least-squares line through `(ln x, ln y)`: `(slope, intercept, rms residual)`.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64), HarnessError> {
    if xs.len() < 3 || xs.len() != ys.len() {
        return Err(HarnessError::TooFewPoints(xs.len()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok((slope, intercept, (rss / n).sqrt()))
}

/// Runs `algorithm` on every family in the ladder and fits length against `driver`.
pub fn scaling_check(ladder: &[Family], driver: Driver, algorithm: &AlgorithmSpec) -> Result<ScalingSummary, HarnessError> {
    if ladder.len() < 3 {
        return Err(HarnessError::TooFewPoints(ladder.len()));
    }
    let coverage = CoverageConfig { enabled: false, ..CoverageConfig::default() };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut totals = Vec::new();
    for fam in ladder {
        let g = generate(fam)?;
        let out = run_algorithm(&g.terrain, g.start, algorithm, &coverage)?;
        let m = out.report.metrics;
        xs.push(match driver {
            Driver::K => m.k as f64,
            Driver::Perimeter => m.perimeter,
            Driver::Area => m.area,
        });
        ys.push(out.report.exptrav_length);
        totals.push(out.report.total_length);
    }
    let (slope, intercept, residual) = loglog_fit(&xs, &ys)?;
    let (total_slope, _, _) = loglog_fit(&xs, &totals)?;
    Ok(ScalingSummary { driver, xs, ys, totals, slope, intercept, residual, total_slope })
}
