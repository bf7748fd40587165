//! One-sample proportion bootstrap intervals and classic comparators.
//!
//! Both bootstrap intervals here use an estimator of the form `a*y + b`:
//! the Wald center `y/n` and the Wilson center `a1*y + b1`. Because the
//! sample is binary, the parametric and percentile bootstrap coincide, so
//! a single implementation serves both. Conditional on `y`, the bootstrap
//! estimates are `a*Bino(n, a*y+b) + b`, and coverage at `p` reduces to
//! the percentile bracket evaluated at the transformed point
//! `x = (p - b)/a` against `Bino(n, a*y+b)`.

use alloc::vec::Vec;

use crate::binomial::{binom_cdf, binom_pmf, lattice, Lattice};
use crate::percentile::{bracket_parts, BootstrapPlan};
use crate::quad::{integrate_piecewise, QuadratureSpec};
use crate::special::{beta_quantile, std_normal_quantile};
use crate::{Error, Rational};

/// Which point estimator centers the bootstrap resampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Center {
    Wald,
    Wilson,
}

/// Wilson-center coefficients: the estimator is `a1*y + b1` with
/// `a1 = 1/(n + z²)` and `b1 = (z²/2)/(n + z²)`, `z` the `(1 - α/2)`
/// normal quantile. Identity: `a1*n + 2*b1 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilsonCoeffs {
    pub a1: f64,
    pub b1: f64,
    pub z: f64,
}

pub fn wilson_coeffs(n: u64, alpha: f64) -> Result<WilsonCoeffs, Error> {
    if n < 1 {
        return Err(Error::Domain {
            what: "wilson coefficients require n >= 1",
        });
    }
    let z = std_normal_quantile(1.0 - alpha / 2.0)?;
    let denom = n as f64 + z * z;
    Ok(WilsonCoeffs {
        a1: 1.0 / denom,
        b1: z * z / 2.0 / denom,
        z,
    })
}

/// A one-sample bootstrap design: sample size, plan and center.
#[derive(Debug, Clone)]
pub struct OneSampleDesign {
    n: u64,
    plan: BootstrapPlan,
    center: Center,
    a: f64,
    b: f64,
}

impl OneSampleDesign {
    pub fn new(n: u64, plan: BootstrapPlan, center: Center) -> Result<Self, Error> {
        if n < 1 {
            return Err(Error::Domain {
                what: "one-sample design requires n >= 1",
            });
        }
        let (a, b) = match center {
            Center::Wald => (1.0 / n as f64, 0.0),
            Center::Wilson => {
                let w = wilson_coeffs(n, plan.alpha())?;
                (w.a1, w.b1)
            }
        };
        Ok(OneSampleDesign {
            n,
            plan,
            center,
            a,
            b,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn plan(&self) -> &BootstrapPlan {
        &self.plan
    }

    pub fn center(&self) -> Center {
        self.center
    }

    /// `(a, b)` of the affine estimator `a*y + b`.
    pub fn affine(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Discontinuity locations of the coverage curve: the attainable
    /// estimate values `a*k + b` inside `[0, 1]`.
    pub fn breakpoints(&self) -> Vec<f64> {
        (0..=self.n)
            .map(|k| self.a * k as f64 + self.b)
            .filter(|&x| (0.0..=1.0).contains(&x))
            .collect()
    }

    fn bracket_at(&self, x_left: i64, x_at: i64, y: u64) -> Result<f64, Error> {
        let c = self.a * y as f64 + self.b;
        let h_left = binom_cdf(x_left, self.n, c)?;
        let h_at = binom_cdf(x_at, self.n, c)?;
        bracket_parts(
            self.plan.m(),
            self.plan.m_l(),
            self.plan.m_u(),
            h_left,
            h_at,
        )
    }

    fn coverage_from_lattice(&self, lat: Lattice, p: f64) -> Result<f64, Error> {
        let (x_at, x_left) = match lat {
            Lattice::On(k) => (k, k - 1),
            Lattice::Between(f) => (f, f),
        };
        let mut acc = 0.0;
        for y in 0..=self.n {
            let bracket = self.bracket_at(x_left, x_at, y)?;
            if bracket > 0.0 {
                acc += bracket * binom_pmf(y, self.n, p)?;
            }
        }
        Ok(acc)
    }

    /// Exact coverage probability at `p`. The transformed point
    /// `x = (p - b)/a` is snapped onto the integer lattice within 1e-12,
    /// which is where the bracket is discontinuous.
    pub fn coverage(&self, p: f64) -> Result<f64, Error> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain {
                what: "coverage requires p in [0,1]",
            });
        }
        let x = (p - self.b) / self.a;
        self.coverage_from_lattice(lattice(x), p)
    }

    /// Coverage at an exactly rational `p`, with lattice membership of
    /// `x = (p - b)/a` decided algebraically instead of by float snap.
    /// For the Wald center `x = n*p`; for the Wilson center `x = n*p +
    /// z²(p - 1/2)` is integral only at `p = 1/2` with even `n` (the `z²`
    /// term cancels there and nowhere else for rational `p`).
    pub fn coverage_exact(&self, p: &Rational) -> Result<f64, Error> {
        let pf = crate::rational_to_f64(p);
        if !(0.0..=1.0).contains(&pf) {
            return Err(Error::Domain {
                what: "coverage requires p in [0,1]",
            });
        }
        let lat = match self.center {
            Center::Wald => {
                let x = *p * Rational::from_integer(self.n as i128);
                if x.is_integer() {
                    Lattice::On(x.to_integer() as i64)
                } else {
                    Lattice::Between(x.floor().to_integer() as i64)
                }
            }
            Center::Wilson => {
                if *p == Rational::new(1, 2) && self.n % 2 == 0 {
                    Lattice::On(self.n as i64 / 2)
                } else {
                    lattice((pf - self.b) / self.a)
                }
            }
        };
        self.coverage_from_lattice(lat, pf)
    }

    /// Per-`y` inner sums of the expected-length formula; they do not
    /// depend on `p`, so curve evaluations reuse them.
    pub fn el_weights(&self) -> Result<Vec<f64>, Error> {
        let mut weights = Vec::with_capacity(self.n as usize + 1);
        for y in 0..=self.n {
            let c = self.a * y as f64 + self.b;
            let mut w = 0.0;
            for x in 0..self.n {
                let h = binom_cdf(x as i64, self.n, c)?;
                let upper = binom_cdf(self.plan.m_u() as i64 - 1, self.plan.m(), h)?;
                let lower = binom_cdf(self.plan.m_l() as i64 - 1, self.plan.m(), h)?;
                w += upper - lower;
            }
            weights.push(w);
        }
        Ok(weights)
    }

    pub fn el_with_weights(&self, weights: &[f64], p: f64) -> Result<f64, Error> {
        let mut acc = 0.0;
        for (y, &w) in weights.iter().enumerate() {
            acc += w * binom_pmf(y as u64, self.n, p)?;
        }
        Ok(self.a * acc)
    }

    /// Expected length at `p`.
    pub fn el(&self, p: f64) -> Result<f64, Error> {
        let w = self.el_weights()?;
        self.el_with_weights(&w, p)
    }

    /// The zero-ICP witness: for `p` in (0,1) the `y = 0` bracket
    /// vanishes, so `coverage(p) <= 1 - (1-p)^n`.
    pub fn coverage_upper_bound(&self, p: f64) -> f64 {
        1.0 - libm::pow(1.0 - p, self.n as f64)
    }
}

/// A deterministic interval construction tabulated over `y = 0..n`.
/// Represents the classic comparator intervals and any imported external
/// construction.
#[derive(Debug, Clone)]
pub struct IntervalTable {
    n: u64,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl IntervalTable {
    /// Build from `(y, lower, upper)` rows; every `y` in `0..=n` must be
    /// present exactly once.
    pub fn new(n: u64, rows: &[(u32, f64, f64)]) -> Result<Self, Error> {
        let size = n as usize + 1;
        let mut lower = alloc::vec![f64::NAN; size];
        let mut upper = alloc::vec![f64::NAN; size];
        for &(y, lo, hi) in rows {
            if (y as u64) <= n {
                lower[y as usize] = lo;
                upper[y as usize] = hi;
            }
        }
        let missing: Vec<u32> = (0..size as u32)
            .filter(|&y| lower[y as usize].is_nan() || upper[y as usize].is_nan())
            .collect();
        if !missing.is_empty() {
            return Err(Error::IncompleteTable { missing });
        }
        for y in 0..size {
            if lower[y] > upper[y] {
                return Err(Error::Domain {
                    what: "interval table requires lower <= upper in every row",
                });
            }
        }
        Ok(IntervalTable { n, lower, upper })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn bounds(&self, y: u64) -> (f64, f64) {
        (self.lower[y as usize], self.upper[y as usize])
    }

    /// Coverage discontinuities: all endpoints inside (0,1).
    pub fn breakpoints(&self) -> Vec<f64> {
        self.lower
            .iter()
            .chain(self.upper.iter())
            .copied()
            .filter(|&x| x > 0.0 && x < 1.0)
            .collect()
    }

    /// Classic Wald interval `p̂ ± z √(p̂(1-p̂)/n)`.
    pub fn wald(n: u64, alpha: f64) -> Result<Self, Error> {
        let z = std_normal_quantile(1.0 - alpha / 2.0)?;
        let rows: Vec<(u32, f64, f64)> = (0..=n)
            .map(|y| {
                let ph = y as f64 / n as f64;
                let half = z * libm::sqrt(ph * (1.0 - ph) / n as f64);
                (y as u32, ph - half, ph + half)
            })
            .collect();
        IntervalTable::new(n, &rows)
    }

    /// Wilson score interval.
    pub fn wilson(n: u64, alpha: f64) -> Result<Self, Error> {
        let z = std_normal_quantile(1.0 - alpha / 2.0)?;
        let nf = n as f64;
        let rows: Vec<(u32, f64, f64)> = (0..=n)
            .map(|y| {
                let ph = y as f64 / nf;
                let denom = 1.0 + z * z / nf;
                let center = (ph + z * z / (2.0 * nf)) / denom;
                let half =
                    z * libm::sqrt(ph * (1.0 - ph) / nf + z * z / (4.0 * nf * nf)) / denom;
                (y as u32, center - half, center + half)
            })
            .collect();
        IntervalTable::new(n, &rows)
    }

    /// Agresti-Coull interval: Wald form at the Wilson center.
    pub fn agresti_coull(n: u64, alpha: f64) -> Result<Self, Error> {
        let z = std_normal_quantile(1.0 - alpha / 2.0)?;
        let nt = n as f64 + z * z;
        let rows: Vec<(u32, f64, f64)> = (0..=n)
            .map(|y| {
                let pt = (y as f64 + z * z / 2.0) / nt;
                let half = z * libm::sqrt(pt * (1.0 - pt) / nt);
                (y as u32, pt - half, pt + half)
            })
            .collect();
        IntervalTable::new(n, &rows)
    }

    /// Clopper-Pearson exact interval via beta quantiles.
    pub fn clopper_pearson(n: u64, alpha: f64) -> Result<Self, Error> {
        let mut rows = Vec::with_capacity(n as usize + 1);
        for y in 0..=n {
            let lo = if y == 0 {
                0.0
            } else {
                beta_quantile(alpha / 2.0, y as f64, (n - y + 1) as f64)?
            };
            let hi = if y == n {
                1.0
            } else {
                beta_quantile(1.0 - alpha / 2.0, (y + 1) as f64, (n - y) as f64)?
            };
            rows.push((y as u32, lo, hi));
        }
        IntervalTable::new(n, &rows)
    }
}

/// Coverage of a tabulated interval at `p`: `Σ_y 1{L_y <= p <= U_y} p_B`.
pub fn coverage_table(p: f64, table: &IntervalTable) -> Result<f64, Error> {
    let mut acc = 0.0;
    for y in 0..=table.n() {
        let (lo, hi) = table.bounds(y);
        if lo <= p && p <= hi {
            acc += binom_pmf(y, table.n(), p)?;
        }
    }
    Ok(acc)
}

/// Expected length of a tabulated interval at `p`: `Σ_y (U_y - L_y) p_B`.
pub fn el_table(p: f64, table: &IntervalTable) -> Result<f64, Error> {
    let mut acc = 0.0;
    for y in 0..=table.n() {
        let (lo, hi) = table.bounds(y);
        acc += (hi - lo) * binom_pmf(y, table.n(), p)?;
    }
    Ok(acc)
}

/// `∫₀¹ curve(p) dp`, integrated piecewise between the supplied
/// breakpoints. Applies to coverage curves and expected-length curves.
pub fn area_under(
    curve: impl Fn(f64) -> f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64, Error> {
    integrate_piecewise(curve, 0.0, 1.0, breakpoints, spec).into_value()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Open,
    Closed,
}

/// Minimum of a curve over a breakpoint-refined grid. A finite scan, not
/// a claim about the continuum: the report carries the resolution used.
#[derive(Debug, Clone, Copy)]
pub struct IcpReport {
    pub minimum: f64,
    pub at: f64,
    pub points: usize,
    pub boundary: Boundary,
}

pub fn icp(
    curve: impl Fn(f64) -> f64,
    breakpoints: &[f64],
    boundary: Boundary,
    grid: usize,
) -> IcpReport {
    let grid = grid.max(2);
    let mut pts: Vec<f64> = Vec::with_capacity(grid + breakpoints.len() * 3 + 16);
    for i in 0..grid {
        let p = (i as f64 + 0.5) / grid as f64;
        pts.push(p);
    }
    match boundary {
        Boundary::Closed => {
            pts.push(0.0);
            pts.push(1.0);
        }
        Boundary::Open => {
            // Approach each open endpoint at 10^-k, k <= 8.
            for k in 1..=8 {
                let eps = libm::pow(10.0, -(k as f64));
                pts.push(eps);
                pts.push(1.0 - eps);
            }
        }
    }
    for &b in breakpoints {
        for x in [b - 1e-9, b, b + 1e-9] {
            if x > 0.0 && x < 1.0 {
                pts.push(x);
            }
        }
    }
    let mut minimum = f64::INFINITY;
    let mut at = f64::NAN;
    let count = pts.len();
    for p in pts {
        let v = curve(p);
        if v < minimum {
            minimum = v;
            at = p;
        }
    }
    IcpReport {
        minimum,
        at,
        points: count,
        boundary,
    }
}

/// Grid over nominal levels used by [`calibrate_alpha`].
#[derive(Debug, Clone, Copy)]
pub struct AlphaGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Default for AlphaGrid {
    fn default() -> Self {
        AlphaGrid {
            lo: 0.005,
            hi: 0.995,
            points: 199,
        }
    }
}

impl AlphaGrid {
    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        let step = if self.points > 1 {
            (self.hi - self.lo) / (self.points - 1) as f64
        } else {
            0.0
        };
        (0..self.points).map(move |i| self.lo + step * i as f64)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Calibration {
    pub alpha: f64,
    pub area: f64,
    pub residual: f64,
    /// Set when the best residual exceeds the caller's tolerance.
    pub warn: bool,
}

/// Scan the alpha grid for the level whose area is closest to
/// `target_area`. No monotonicity in alpha is assumed -- the areas are
/// not monotone in the nominal level. Grid points whose plan is
/// infeasible are skipped.
pub fn calibrate_alpha(
    family: impl Fn(f64) -> Result<f64, Error>,
    target_area: f64,
    grid: &AlphaGrid,
    warn_tol: f64,
) -> Result<Calibration, Error> {
    if !(0.0 < target_area && target_area < 1.0) {
        return Err(Error::Domain {
            what: "target area must lie in (0,1)",
        });
    }
    let mut best: Option<Calibration> = None;
    for alpha in grid.iter() {
        let area = match family(alpha) {
            Ok(a) => a,
            Err(Error::DegeneratePlan { .. }) => continue,
            Err(e) => return Err(e),
        };
        let residual = (area - target_area).abs();
        if best.map_or(true, |b| residual < b.residual) {
            best = Some(Calibration {
                alpha,
                area,
                residual,
                warn: false,
            });
        }
    }
    let mut best = best.ok_or(Error::Domain {
        what: "no feasible alpha on the calibration grid",
    })?;
    best.warn = best.residual > warn_tol;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn design(n: u64, m: u64, alpha: f64, center: Center) -> OneSampleDesign {
        OneSampleDesign::new(n, BootstrapPlan::new(m, alpha).unwrap(), center).unwrap()
    }

    #[test]
    fn wilson_coeffs_identity_and_values() {
        for &(n, alpha) in &[(10u64, 0.1f64), (3, 0.05), (100, 0.2), (7, 0.5)] {
            let w = wilson_coeffs(n, alpha).unwrap();
            assert!((w.a1 * n as f64 + 2.0 * w.b1 - 1.0).abs() < 1e-14);
            assert!((w.b1 / w.a1 - w.z * w.z / 2.0).abs() < 1e-12);
        }
        let w = wilson_coeffs(10, 0.1).unwrap();
        assert!((w.a1 - 0.078706).abs() < 1e-6, "a1 = {}", w.a1);
        assert!((w.b1 - 0.106471).abs() < 1e-6, "b1 = {}", w.b1);
    }

    #[test]
    fn cwa_degenerate_endpoints_cover() {
        let d = design(4, 10, 0.2, Center::Wald);
        assert!((d.coverage(0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((d.coverage(1.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cwa_symmetric_in_p() {
        let d = design(7, 25, 0.15, Center::Wald);
        for &p in &[0.1, 0.23, 0.4, 0.77] {
            let a = d.coverage(p).unwrap();
            let b = d.coverage(1.0 - p).unwrap();
            assert!((a - b).abs() < 1e-12, "p = {p}: {a} vs {b}");
        }
    }

    #[test]
    fn cwa_respects_zero_icp_bound() {
        let d = design(6, 20, 0.1, Center::Wald);
        for k in 1..=8 {
            let p = libm::pow(10.0, -(k as f64));
            let c = d.coverage(p).unwrap();
            assert!(
                c <= d.coverage_upper_bound(p) + 1e-14,
                "p = {p}: {c} vs bound"
            );
        }
    }

    #[test]
    fn cwi_below_b1_respects_bound() {
        let d = design(5, 20, 0.1, Center::Wilson);
        let (_, b1) = d.affine();
        for &frac in &[0.1, 0.5, 0.9] {
            let p = frac * b1;
            let c = d.coverage(p).unwrap();
            assert!(c <= d.coverage_upper_bound(p) + 1e-14);
        }
        // p = 0 sits strictly below every attainable Wilson estimate.
        assert_eq!(d.coverage(0.0).unwrap(), 0.0);
    }

    #[test]
    fn exact_rational_matches_float_snap() {
        let d = design(10, 50, 0.1, Center::Wald);
        for num in 0..=20i128 {
            let p = Rational::new(num, 20);
            let exact = d.coverage_exact(&p).unwrap();
            let float = d.coverage(num as f64 / 20.0).unwrap();
            assert!((exact - float).abs() < 1e-12);
        }
        // Wilson lattice hit at p = 1/2 with even n.
        let d = design(10, 50, 0.1, Center::Wilson);
        let exact = d.coverage_exact(&Rational::new(1, 2)).unwrap();
        let float = d.coverage(0.5).unwrap();
        assert!((exact - float).abs() < 1e-12);
    }

    #[test]
    fn el_vanishes_when_degenerate() {
        // n = 1: conditional bootstrap estimates are all-0 or all-1.
        let d = design(1, 10, 0.2, Center::Wald);
        for &p in &[0.0, 0.3, 0.9] {
            assert!(d.el(p).unwrap().abs() < 1e-14);
        }
        let d = design(5, 10, 0.2, Center::Wald);
        assert!(d.el(0.0).unwrap().abs() < 1e-14);
    }

    #[test]
    fn degenerate_table_covers_everything() {
        let rows: Vec<(u32, f64, f64)> = (0..=4).map(|y| (y, 0.0, 1.0)).collect();
        let t = IntervalTable::new(4, &rows).unwrap();
        for &p in &[0.0, 0.4, 1.0] {
            assert!((coverage_table(p, &t).unwrap() - 1.0).abs() < 1e-12);
            assert!((el_table(p, &t).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn incomplete_table_lists_missing_rows() {
        let rows = [(0u32, 0.0, 1.0), (2, 0.0, 1.0)];
        match IntervalTable::new(3, &rows) {
            Err(Error::IncompleteTable { missing }) => assert_eq!(missing, alloc::vec![1, 3]),
            other => panic!("expected incomplete table, got {other:?}"),
        }
    }

    #[test]
    fn wald_el_matches_closed_form_sum() {
        let n = 12;
        let alpha = 0.1;
        let t = IntervalTable::wald(n, alpha).unwrap();
        let z = std_normal_quantile(1.0 - alpha / 2.0).unwrap();
        let p = 0.5;
        let oracle: f64 = (0..=n)
            .map(|y| {
                let ph = y as f64 / n as f64;
                2.0 * z
                    * libm::sqrt(ph * (1.0 - ph) / n as f64)
                    * binom_pmf(y, n, p).unwrap()
            })
            .sum();
        assert!((el_table(p, &t).unwrap() - oracle).abs() < 1e-14);
    }

    #[test]
    fn clopper_pearson_is_conservative() {
        let t = IntervalTable::clopper_pearson(10, 0.1).unwrap();
        let mut p = 0.05;
        while p <= 0.951 {
            let c = coverage_table(p, &t).unwrap();
            assert!(c >= 0.9 - 1e-10, "p = {p}: coverage {c}");
            p += 0.05;
        }
    }

    #[test]
    fn area_of_constant_curve() {
        let spec = QuadratureSpec::default();
        let a = area_under(|_| 1.0, &[], &spec).unwrap();
        assert!((a - 1.0).abs() < 1e-9);
    }

    #[test]
    fn icp_constant_curve() {
        let r = icp(|_| 0.37, &[], Boundary::Open, 100);
        assert_eq!(r.minimum, 0.37);
        assert_eq!(r.boundary, Boundary::Open);
    }

    #[test]
    fn icp_clopper_pearson_exceeds_level() {
        let t = IntervalTable::clopper_pearson(10, 0.1).unwrap();
        let bps = t.breakpoints();
        let r = icp(
            |p| coverage_table(p, &t).unwrap(),
            &bps,
            Boundary::Closed,
            2000,
        );
        assert!(r.minimum >= 0.9 - 1e-10, "grid min {}", r.minimum);
    }

    #[test]
    fn icp_cwa_grid_min_is_near_zero() {
        let d = design(5, 10, 0.2, Center::Wald);
        let r = icp(
            |p| d.coverage(p).unwrap(),
            &d.breakpoints(),
            Boundary::Open,
            500,
        );
        // With the 1e-8 boundary approach, the minimum is below the
        // analytic bound at that point.
        assert!(r.minimum <= 1.0 - libm::pow(1.0 - 1e-8, 5.0) + 1e-12);
    }

    #[test]
    fn calibrate_linear_family_is_exact_on_grid() {
        let grid = AlphaGrid::default();
        let cal = calibrate_alpha(|alpha| Ok(1.0 - alpha), 0.6, &grid, 1e-9).unwrap();
        assert!((1.0 - cal.alpha - 0.6).abs() < 1e-12);
        assert!(!cal.warn);
    }

    #[test]
    fn calibrate_cwa_to_own_area_is_fixed_point() {
        let spec = QuadratureSpec::default();
        let n = 5;
        let m = 20;
        let family = |alpha: f64| -> Result<f64, Error> {
            let d = OneSampleDesign::new(n, BootstrapPlan::new(m, alpha)?, Center::Wald)?;
            area_under(|p| d.coverage(p).unwrap(), &d.breakpoints(), &spec)
        };
        let target = family(0.1).unwrap();
        let cal = calibrate_alpha(family, target, &AlphaGrid::default(), 1e-6).unwrap();
        assert!((cal.alpha - 0.1).abs() < 1e-12, "alpha = {}", cal.alpha);
        assert!(cal.residual < 1e-12);
    }
}
