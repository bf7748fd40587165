//! The surface command: coverage/length lattices over the two-sample
//! parameter domains.

use anyhow::Result;
use bootcov_core::binom_two::{surface_grid, SurfaceKind, TwoSampleDesign};
use bootcov_core::percentile::BootstrapPlan;

use crate::csvio::{g17, to_csv};

pub struct SurfaceSummary {
    pub rows: usize,
    pub min_coverage: f64,
    pub frac_below_level: f64,
}

/// Row-major `axis1,p2,coverage,el` lattice plus the summary used for
/// the qualitative checks (grid minimum, fraction below nominal).
pub fn surface(
    kind: SurfaceKind,
    n1: u64,
    n2: u64,
    m: u64,
    alpha: f64,
    axis1_points: usize,
    p2_points: usize,
) -> Result<(String, SurfaceSummary)> {
    let design = TwoSampleDesign::new(n1, n2, BootstrapPlan::new(m, alpha)?)?;
    let grid = surface_grid(&design, kind, axis1_points, p2_points)?;
    let level = 1.0 - alpha;
    let mut min_coverage = f64::INFINITY;
    let mut below = 0usize;
    let rows: Vec<Vec<String>> = grid
        .iter()
        .map(|pt| {
            min_coverage = min_coverage.min(pt.coverage);
            if pt.coverage < level {
                below += 1;
            }
            vec![g17(pt.axis1), g17(pt.p2), g17(pt.coverage), g17(pt.el)]
        })
        .collect();
    let csv = to_csv(&["axis1", "p2", "coverage", "el"], &rows);
    Ok((
        csv,
        SurfaceSummary {
            rows: grid.len(),
            min_coverage,
            frac_below_level: below as f64 / grid.len() as f64,
        },
    ))
}

/// Default first-axis resolution: 101 for the difference, 100 log-spaced
/// points for the odds ratio.
pub fn default_axis1(kind: SurfaceKind) -> usize {
    match kind {
        SurfaceKind::Diff => 101,
        SurfaceKind::Odds => 100,
    }
}
