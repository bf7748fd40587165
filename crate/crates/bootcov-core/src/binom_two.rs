//! Two-sample bootstrap intervals for the difference of proportions and
//! the Gart odds ratio.
//!
//! Conditional on the data `(x, y)`, the bootstrap estimate is a function
//! of two independent binomials `U ~ Bino(n1, x/n1)` and
//! `V ~ Bino(n2, y/n2)`. The conditional distributions are enumerated
//! over all `(u, v)` pairs with exact rational support keys; the paper's
//! closed-form CDF sums (`H^D`, `H^R` via the threshold map `R(z, v)`)
//! are kept as an independent route and cross-checked, not used as the
//! primary path, because the expected-length sums need the full merged
//! support anyway.

use alloc::vec::Vec;

use crate::binomial::{binom_cdf_real, binom_pmf};
use crate::dist::DiscreteDist;
use crate::percentile::{coverage_bracket, expected_width, BootstrapPlan};
use crate::{Error, Rational};

/// Two independent Bernoulli samples of sizes `n1`, `n2` and a plan.
#[derive(Debug, Clone)]
pub struct TwoSampleDesign {
    n1: u64,
    n2: u64,
    plan: BootstrapPlan,
}

impl TwoSampleDesign {
    pub fn new(n1: u64, n2: u64, plan: BootstrapPlan) -> Result<Self, Error> {
        if n1 < 1 || n2 < 1 {
            return Err(Error::Domain {
                what: "two-sample design requires n1, n2 >= 1",
            });
        }
        Ok(TwoSampleDesign { n1, n2, plan })
    }

    pub fn n1(&self) -> u64 {
        self.n1
    }

    pub fn n2(&self) -> u64 {
        self.n2
    }

    pub fn plan(&self) -> &BootstrapPlan {
        &self.plan
    }
}

/// A point of the difference domain `H_D`: `p2 ∈ [0, 1-d]` for `d >= 0`,
/// `p2 ∈ [-d, 1]` for `d < 0`, so that `p1 = d + p2 ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffPoint {
    d: f64,
    p2: f64,
}

impl DiffPoint {
    pub fn new(d: f64, p2: f64) -> Result<Self, Error> {
        let p1 = d + p2;
        if !((-1.0..=1.0).contains(&d)
            && (0.0..=1.0).contains(&p2)
            && (-1e-12..=1.0 + 1e-12).contains(&p1))
        {
            return Err(Error::Domain {
                what: "difference point must satisfy p2 in D(d)",
            });
        }
        Ok(DiffPoint { d, p2 })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn p1(&self) -> f64 {
        (self.d + self.p2).clamp(0.0, 1.0)
    }
}

/// A point of the odds-ratio domain `H_R`: `theta >= 0`, `p2 ∈ [0, 1]`,
/// inducing `p1 = theta*p2 / (1 + (theta-1)*p2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OddsPoint {
    theta: f64,
    p2: f64,
}

impl OddsPoint {
    pub fn new(theta: f64, p2: f64) -> Result<Self, Error> {
        if !(theta >= 0.0 && (0.0..=1.0).contains(&p2)) {
            return Err(Error::Domain {
                what: "odds point requires theta >= 0 and p2 in [0,1]",
            });
        }
        if theta == 0.0 && p2 == 1.0 {
            return Err(Error::Domain {
                what: "odds point (theta, p2) = (0, 1) leaves p1 undefined",
            });
        }
        Ok(OddsPoint { theta, p2 })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn p1(&self) -> f64 {
        (self.theta * self.p2 / (1.0 + (self.theta - 1.0) * self.p2)).clamp(0.0, 1.0)
    }
}

/// Gart's odds-ratio estimator with the +1/2 corrections; finite and
/// positive for every outcome pair.
pub fn gart_theta(x: u64, y: u64, n1: u64, n2: u64) -> f64 {
    ((x as f64 + 0.5) * ((n2 - y) as f64 + 0.5)) / (((n1 - x) as f64 + 0.5) * (y as f64 + 0.5))
}

/// Exact key for the Gart estimate: numerator `(2u+1)(2(n2-v)+1)`,
/// denominator `(2(n1-u)+1)(2v+1)`.
fn gart_key(u: u64, v: u64, n1: u64, n2: u64) -> Rational {
    let num = (2 * u as i128 + 1) * (2 * (n2 - v) as i128 + 1);
    let den = (2 * (n1 - u) as i128 + 1) * (2 * v as i128 + 1);
    Rational::new(num, den)
}

/// Conditional distribution of `U/n1 - V/n2` given data `(x, y)`; keys
/// are the exact rationals `(u*n2 - v*n1)/(n1*n2)`.
pub fn dist_dhat(x: u64, y: u64, design: &TwoSampleDesign) -> Result<DiscreteDist, Error> {
    enumerate_pairs(x, y, design, |u, v| {
        Rational::new(
            u as i128 * design.n2 as i128 - v as i128 * design.n1 as i128,
            (design.n1 * design.n2) as i128,
        )
    })
}

/// Conditional distribution of the Gart estimate given data `(x, y)`.
pub fn dist_thetahat(x: u64, y: u64, design: &TwoSampleDesign) -> Result<DiscreteDist, Error> {
    enumerate_pairs(x, y, design, |u, v| gart_key(u, v, design.n1, design.n2))
}

fn enumerate_pairs(
    x: u64,
    y: u64,
    design: &TwoSampleDesign,
    key: impl Fn(u64, u64) -> Rational,
) -> Result<DiscreteDist, Error> {
    if x > design.n1 || y > design.n2 {
        return Err(Error::Domain {
            what: "data outcome outside {0..n1} x {0..n2}",
        });
    }
    let p1 = x as f64 / design.n1 as f64;
    let p2 = y as f64 / design.n2 as f64;
    let mut entries = Vec::with_capacity(((design.n1 + 1) * (design.n2 + 1)) as usize);
    for u in 0..=design.n1 {
        let wu = binom_pmf(u, design.n1, p1)?;
        for v in 0..=design.n2 {
            let w = wu * binom_pmf(v, design.n2, p2)?;
            entries.push((key(u, v), w));
        }
    }
    DiscreteDist::from_rational(entries)
}

/// Closed-form `H^D_{x,y}(z) = Σ_v F_B(n1(z + v/n2), n1, x/n1) p_B(v, n2, y/n2)`.
/// Cross-check route for [`dist_dhat`].
pub fn h_diff_closed(z: f64, x: u64, y: u64, design: &TwoSampleDesign) -> Result<f64, Error> {
    let p1 = x as f64 / design.n1 as f64;
    let p2 = y as f64 / design.n2 as f64;
    let mut acc = 0.0;
    for v in 0..=design.n2 {
        let arg = design.n1 as f64 * (z + v as f64 / design.n2 as f64);
        acc += binom_cdf_real(arg, design.n1, p1)? * binom_pmf(v, design.n2, p2)?;
    }
    Ok(acc)
}

/// The paper's threshold map: the largest (real) `u` with
/// `gart(u, v) <= z`.
pub fn gart_threshold(z: f64, v: u64, n1: u64, n2: u64) -> f64 {
    let vv = v as f64 + 0.5;
    let wv = (n2 - v) as f64 + 0.5;
    (z * (n1 as f64 + 0.5) * vv - 0.5 * wv) / (wv + z * vv)
}

/// Closed-form `H^R_{x,y}(z) = Σ_v F_B(R(z,v), n1, x/n1) p_B(v, n2, y/n2)`.
/// Cross-check route for [`dist_thetahat`].
pub fn h_odds_closed(z: f64, x: u64, y: u64, design: &TwoSampleDesign) -> Result<f64, Error> {
    let p1 = x as f64 / design.n1 as f64;
    let p2 = y as f64 / design.n2 as f64;
    let mut acc = 0.0;
    for v in 0..=design.n2 {
        let arg = gart_threshold(z, v, design.n1, design.n2);
        acc += binom_cdf_real(arg, design.n1, p1)? * binom_pmf(v, design.n2, p2)?;
    }
    Ok(acc)
}

/// Which two-sample functional a context evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceKind {
    Diff,
    Odds,
}

/// All `(n1+1)(n2+1)` conditional bootstrap distributions of a design,
/// built once and reused across parameter points; the per-`(x,y)`
/// expected widths are also cached since they do not depend on the
/// parameter point at all.
pub struct TwoSampleContext {
    design: TwoSampleDesign,
    dists: Vec<DiscreteDist>,
    widths: Vec<f64>,
}

impl TwoSampleContext {
    pub fn new(design: TwoSampleDesign, kind: SurfaceKind) -> Result<Self, Error> {
        let (n1, n2) = (design.n1, design.n2);
        let mut dists = Vec::with_capacity(((n1 + 1) * (n2 + 1)) as usize);
        let mut widths = Vec::with_capacity(dists.capacity());
        for x in 0..=n1 {
            for y in 0..=n2 {
                let d = match kind {
                    SurfaceKind::Diff => dist_dhat(x, y, &design)?,
                    SurfaceKind::Odds => dist_thetahat(x, y, &design)?,
                };
                widths.push(expected_width(&d, &design.plan)?);
                dists.push(d);
            }
        }
        Ok(TwoSampleContext {
            design,
            dists,
            widths,
        })
    }

    pub fn design(&self) -> &TwoSampleDesign {
        &self.design
    }

    fn weight_vectors(&self, p1: f64, p2: f64) -> Result<(Vec<f64>, Vec<f64>), Error> {
        let w1 = (0..=self.design.n1)
            .map(|x| binom_pmf(x, self.design.n1, p1))
            .collect::<Result<Vec<_>, _>>()?;
        let w2 = (0..=self.design.n2)
            .map(|y| binom_pmf(y, self.design.n2, p2))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((w1, w2))
    }

    /// Coverage at target `t` with data model `(p1, p2)`:
    /// `Σ_x Σ_y bracket(H_{x,y}, t) p_B(x,n1,p1) p_B(y,n2,p2)`.
    pub fn coverage(&self, target: f64, p1: f64, p2: f64) -> Result<f64, Error> {
        let brackets = self.brackets_for(target);
        self.weighted_sum(&brackets, p1, p2)
    }

    /// Conditional brackets at a fixed target, reusable across `(p1, p2)`.
    pub fn brackets_for(&self, target: f64) -> Vec<f64> {
        self.dists
            .iter()
            .map(|d| coverage_bracket(d, target, &self.design.plan))
            .collect()
    }

    /// Weighted aggregation of per-`(x,y)` quantities.
    pub fn weighted_sum(&self, per_xy: &[f64], p1: f64, p2: f64) -> Result<f64, Error> {
        let (w1, w2) = self.weight_vectors(p1, p2)?;
        let cols = self.design.n2 as usize + 1;
        let mut acc = 0.0;
        for (x, &wx) in w1.iter().enumerate() {
            if wx == 0.0 {
                continue;
            }
            let row = &per_xy[x * cols..(x + 1) * cols];
            let inner: f64 = row.iter().zip(w2.iter()).map(|(b, wy)| b * wy).sum();
            acc += wx * inner;
        }
        Ok(acc)
    }

    /// Expected length at `(p1, p2)`.
    pub fn el(&self, p1: f64, p2: f64) -> Result<f64, Error> {
        self.weighted_sum(&self.widths, p1, p2)
    }
}

/// Coverage probability of the difference interval at a domain point.
pub fn coverage_cd(point: &DiffPoint, design: &TwoSampleDesign) -> Result<f64, Error> {
    let ctx = TwoSampleContext::new(design.clone(), SurfaceKind::Diff)?;
    ctx.coverage(point.d(), point.p1(), point.p2())
}

/// Expected length of the difference interval at a domain point.
pub fn el_cd(point: &DiffPoint, design: &TwoSampleDesign) -> Result<f64, Error> {
    let ctx = TwoSampleContext::new(design.clone(), SurfaceKind::Diff)?;
    ctx.el(point.p1(), point.p2())
}

/// Coverage probability of the odds-ratio interval at a domain point.
pub fn coverage_ctheta(point: &OddsPoint, design: &TwoSampleDesign) -> Result<f64, Error> {
    let ctx = TwoSampleContext::new(design.clone(), SurfaceKind::Odds)?;
    ctx.coverage(point.theta(), point.p1(), point.p2())
}

/// Expected length of the odds-ratio interval at a domain point.
pub fn el_ctheta(point: &OddsPoint, design: &TwoSampleDesign) -> Result<f64, Error> {
    let ctx = TwoSampleContext::new(design.clone(), SurfaceKind::Odds)?;
    ctx.el(point.p1(), point.p2())
}

/// One row of a coverage/length surface.
#[derive(Debug, Clone, Copy)]
pub struct SurfacePoint {
    pub axis1: f64,
    pub p2: f64,
    pub coverage: f64,
    pub el: f64,
}

/// Lattice of `(axis1, p2, coverage, el)` rows, row-major over the grid.
/// For the difference the first axis spans `[-1, 1]` and `p2` spans the
/// parallelogram section `D(d)` relatively; for the odds ratio the first
/// axis is log-spaced on `[1, 100]` and `p2` spans `[0, 1]`.
pub fn surface_grid(
    design: &TwoSampleDesign,
    kind: SurfaceKind,
    axis1_points: usize,
    p2_points: usize,
) -> Result<Vec<SurfacePoint>, Error> {
    if axis1_points < 2 || p2_points < 2 {
        return Err(Error::Domain {
            what: "surface grids need at least 2 points per axis",
        });
    }
    let ctx = TwoSampleContext::new(design.clone(), kind)?;
    let mut rows = Vec::with_capacity(axis1_points * p2_points);
    for i in 0..axis1_points {
        let t = i as f64 / (axis1_points - 1) as f64;
        let axis1 = match kind {
            SurfaceKind::Diff => -1.0 + 2.0 * t,
            SurfaceKind::Odds => libm::pow(100.0, t), // log-spaced on [1, 100]
        };
        let brackets = ctx.brackets_for(axis1);
        for j in 0..p2_points {
            let s = j as f64 / (p2_points - 1) as f64;
            let (p1, p2) = match kind {
                SurfaceKind::Diff => {
                    let (lo, hi) = if axis1 >= 0.0 {
                        (0.0, 1.0 - axis1)
                    } else {
                        (-axis1, 1.0)
                    };
                    let p2 = lo + s * (hi - lo);
                    ((axis1 + p2).clamp(0.0, 1.0), p2)
                }
                SurfaceKind::Odds => {
                    let p2 = s;
                    let p1 = (axis1 * p2 / (1.0 + (axis1 - 1.0) * p2)).clamp(0.0, 1.0);
                    (p1, p2)
                }
            };
            rows.push(SurfacePoint {
                axis1,
                p2,
                coverage: ctx.weighted_sum(&brackets, p1, p2)?,
                el: ctx.el(p1, p2)?,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn design(n1: u64, n2: u64, m: u64, alpha: f64) -> TwoSampleDesign {
        TwoSampleDesign::new(n1, n2, BootstrapPlan::new(m, alpha).unwrap()).unwrap()
    }

    #[test]
    fn gart_theta_values() {
        // Equal sample proportions with equal n: numerator = denominator.
        assert!((gart_theta(3, 3, 6, 6) - 1.0).abs() < 1e-15);
        // Extreme corner (x, y) = (n1, 0).
        let (n1, n2) = (4u64, 7u64);
        let expect = (2 * n1 + 1) as f64 * (2 * n2 + 1) as f64;
        assert!((gart_theta(n1, 0, n1, n2) - expect).abs() < 1e-10);
        assert!((gart_theta(1, 0, 1, 1) - 9.0).abs() < 1e-15);
    }

    #[test]
    fn dist_dhat_degenerate_and_mixed() {
        let d = design(2, 2, 5, 0.2);
        // (x, y) = (n1, 0): both binomials degenerate, point mass at 1.
        let dd = dist_dhat(2, 0, &d).unwrap();
        assert_eq!(dd.len(), 1);
        assert_eq!(dd.values(), &[1.0]);
        // x = 1, y = 2: V = 2 surely, U ~ Bino(2, 1/2).
        let dd = dist_dhat(1, 2, &d).unwrap();
        assert_eq!(dd.values(), &[-1.0, -0.5, 0.0]);
        assert_eq!(dd.masses(), &[0.25, 0.5, 0.25]);
    }

    #[test]
    fn dist_thetahat_merges_coincident_ratios() {
        let d = design(2, 2, 5, 0.2);
        let dt = dist_thetahat(1, 1, &d).unwrap();
        assert_eq!(dt.len(), 5);
        let expect_vals = [1.0 / 25.0, 0.2, 1.0, 5.0, 25.0];
        for (v, e) in dt.values().iter().zip(expect_vals.iter()) {
            assert!((v - e).abs() < 1e-15);
        }
        let expect_mass = [1.0 / 16.0, 0.25, 0.375, 0.25, 1.0 / 16.0];
        for (w, e) in dt.masses().iter().zip(expect_mass.iter()) {
            assert!((w - e).abs() < 1e-14);
        }
        assert!((dt.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn total_mass_is_one_for_random_outcomes() {
        let d = design(5, 6, 10, 0.2);
        for (x, y) in [(0u64, 0u64), (3, 2), (5, 6), (1, 4)] {
            let dd = dist_dhat(x, y, &d).unwrap();
            assert!((dd.total_mass() - 1.0).abs() < 1e-12);
            assert!(dd.len() <= ((d.n1() + 1) * (d.n2() + 1)) as usize);
            let dt = dist_thetahat(x, y, &d).unwrap();
            assert!((dt.total_mass() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_cdfs_match_enumeration() {
        use rand::Rng;
        let mut rng = crate::mc::rep_rng(0xD0A1, 0);
        for &(n1, n2) in &[(2u64, 3u64), (4, 4), (5, 6), (6, 5)] {
            let d = design(n1, n2, 10, 0.2);
            for _ in 0..4 {
                let x = rng.gen_range(0..=n1);
                let y = rng.gen_range(0..=n2);
                let dd = dist_dhat(x, y, &d).unwrap();
                let dt = dist_thetahat(x, y, &d).unwrap();
                for _ in 0..20 {
                    let z: f64 = rng.gen_range(-1.2..1.2);
                    let (_, at) = dd.cdf_pair(z);
                    let closed = h_diff_closed(z, x, y, &d).unwrap();
                    assert!((at - closed).abs() < 1e-12, "diff: {at} vs {closed}");
                    let zt: f64 = rng.gen_range(0.01..30.0);
                    let (_, at) = dt.cdf_pair(zt);
                    let closed = h_odds_closed(zt, x, y, &d).unwrap();
                    assert!((at - closed).abs() < 1e-12, "odds: {at} vs {closed}");
                }
            }
        }
    }

    #[test]
    fn coverage_cd_corners_are_one() {
        let d = design(3, 4, 10, 0.2);
        let c = coverage_cd(&DiffPoint::new(1.0, 0.0).unwrap(), &d).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
        let c = coverage_cd(&DiffPoint::new(-1.0, 1.0).unwrap(), &d).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
        let w = el_cd(&DiffPoint::new(1.0, 0.0).unwrap(), &d).unwrap();
        assert!(w.abs() < 1e-12);
    }

    #[test]
    fn coverage_cd_flip_and_swap_symmetries() {
        // Relabeling successes as failures in both samples negates the
        // estimator, so coverage is invariant under (d, p2) -> (-d, 1-p2)
        // at fixed (n1, n2); swapping the roles of the two samples maps
        // (d, p2; n1, n2) -> (-d, d+p2; n2, n1).
        let d12 = design(3, 5, 12, 0.2);
        let d21 = design(5, 3, 12, 0.2);
        for &(dd, p2) in &[(0.2, 0.3), (-0.4, 0.6), (0.0, 0.5)] {
            let a = coverage_cd(&DiffPoint::new(dd, p2).unwrap(), &d12).unwrap();
            let flip = coverage_cd(&DiffPoint::new(-dd, 1.0 - p2).unwrap(), &d12).unwrap();
            assert!((a - flip).abs() < 1e-12, "flip ({dd},{p2}): {a} vs {flip}");
            let swap = coverage_cd(&DiffPoint::new(-dd, dd + p2).unwrap(), &d21).unwrap();
            assert!((a - swap).abs() < 1e-12, "swap ({dd},{p2}): {a} vs {swap}");
        }
    }

    #[test]
    fn odds_point_p2_zero_reduces_to_single_term() {
        let d = design(2, 2, 5, 0.2);
        let point = OddsPoint::new(2.0, 0.0).unwrap();
        assert_eq!(point.p1(), 0.0);
        let ctx = TwoSampleContext::new(d.clone(), SurfaceKind::Odds).unwrap();
        let single = coverage_bracket(&dist_thetahat(0, 0, &d).unwrap(), 2.0, d.plan());
        let full = ctx.coverage(2.0, 0.0, 0.0).unwrap();
        assert!((full - single).abs() < 1e-14);
    }

    #[test]
    fn coverage_in_unit_interval_on_grid() {
        let d = design(2, 3, 8, 0.2);
        let ctx = TwoSampleContext::new(d, SurfaceKind::Odds).unwrap();
        for i in 0..=10 {
            let theta = libm::pow(100.0, i as f64 / 10.0) / 10.0; // [0.1, 10]
            let brackets = ctx.brackets_for(theta);
            for j in 0..=10 {
                let p2 = j as f64 / 10.0;
                let p1 = theta * p2 / (1.0 + (theta - 1.0) * p2);
                let c = ctx.weighted_sum(&brackets, p1.clamp(0.0, 1.0), p2).unwrap();
                assert!((0.0..=1.0 + 1e-12).contains(&c));
            }
        }
    }

    #[test]
    fn el_bounds_for_unit_samples() {
        let d = design(1, 1, 6, 0.3);
        for &(dd, p2) in &[(0.0, 0.5), (0.3, 0.2), (-0.5, 0.9)] {
            let w = el_cd(&DiffPoint::new(dd, p2).unwrap(), &d).unwrap();
            assert!((0.0..=2.0).contains(&w));
            let t = el_ctheta(&OddsPoint::new(1.0, p2).unwrap(), &d).unwrap();
            assert!((0.0..=9.0 - 1.0 / 9.0 + 1e-12).contains(&t));
        }
    }

    #[test]
    fn surface_row_count_and_ranges() {
        let d = design(2, 2, 6, 0.2);
        let rows = surface_grid(&d, SurfaceKind::Diff, 7, 5).unwrap();
        assert_eq!(rows.len(), 35);
        for r in &rows {
            assert!((0.0..=1.0 + 1e-12).contains(&r.coverage));
            assert!(r.el >= 0.0);
        }
        // Corner rows (d = ±1) collapse to the single feasible p2.
        assert!((rows[0].coverage - 1.0).abs() < 1e-12);
        let rows = surface_grid(&d, SurfaceKind::Odds, 5, 4).unwrap();
        assert_eq!(rows.len(), 20);
        assert!((rows[0].axis1 - 1.0).abs() < 1e-15);
        assert!((rows.last().unwrap().axis1 - 100.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_points_rejected() {
        assert!(DiffPoint::new(0.5, 0.8).is_err());
        assert!(DiffPoint::new(-0.5, 0.2).is_err());
        assert!(OddsPoint::new(-1.0, 0.5).is_err());
        assert!(OddsPoint::new(0.0, 1.0).is_err());
    }
}
