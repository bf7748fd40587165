//! The coverage-curve command: exact coverage and expected length of the
//! one-sample bootstrap intervals over a p-grid.

use anyhow::Result;
use bootcov_core::binom_one::{Center, OneSampleDesign};
use bootcov_core::percentile::BootstrapPlan;
use bootcov_core::Rational;

use crate::csvio::{g17, to_csv};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveDesign {
    Wald,
    Wilson,
}

/// Grid rows `p,coverage,el`. Grid points are the exact rationals
/// `i/(grid-1)`, so lattice membership of the transformed argument is
/// decided algebraically at every row. With `boundary_approach`, the
/// points `10^-k` and `1-10^-k` (k = 1..8) are inserted as well to show
/// the collapse toward the open boundaries.
pub fn coverage_curve(
    design: CurveDesign,
    n: u64,
    m: u64,
    alpha: f64,
    grid: usize,
    boundary_approach: bool,
) -> Result<String> {
    if grid < 2 {
        anyhow::bail!("grid must have at least 2 points");
    }
    let plan = BootstrapPlan::new(m, alpha)?;
    let center = match design {
        CurveDesign::Wald => Center::Wald,
        CurveDesign::Wilson => Center::Wilson,
    };
    let d = OneSampleDesign::new(n, plan, center)?;
    let weights = d.el_weights()?;

    // (sort key, p as rational if on the uniform grid)
    let den = (grid - 1) as i128;
    let mut points: Vec<(f64, Option<Rational>)> = (0..grid)
        .map(|i| (i as f64 / den as f64, Some(Rational::new(i as i128, den))))
        .collect();
    if boundary_approach {
        for k in 1..=8 {
            let eps = 10f64.powi(-k);
            points.push((eps, None));
            points.push((1.0 - eps, None));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
    }

    let mut rows = Vec::with_capacity(points.len());
    for (p, exact) in points {
        let coverage = match &exact {
            Some(r) => d.coverage_exact(r)?,
            None => d.coverage(p)?,
        };
        let el = d.el_with_weights(&weights, p)?;
        rows.push(vec![g17(p), g17(coverage), g17(el)]);
    }
    Ok(to_csv(&["p", "coverage", "el"], &rows))
}
