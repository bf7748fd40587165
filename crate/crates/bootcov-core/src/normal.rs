//! Parametric bootstrap intervals for a normal mean: the sample-mean
//! interval (known sigma), the sample-median interval (odd n), and the
//! unknown-sigma interval, plus the classic z- and t-interval
//! comparators.
//!
//! For any estimator whose density has the location-scale form
//! `f((q-mu)/sigma)/sigma` with even `f`, the coverage probability of the
//! percentile interval is the constant `(m_u - m_l)/(m + 1)` -- an exact
//! rational independent of `n`, `mu`, `sigma` and the estimator -- and
//! the expected length is a single one-dimensional integral against the
//! standardized quantile.

use crate::binomial::{binom_cdf, binom_pmf};
use crate::percentile::BootstrapPlan;
use crate::quad::{integrate, Domain, QuadratureSpec};
use crate::special::{
    beta_quantile, gamma_ln, std_normal_cdf, std_normal_quantile, t_pdf, t_quantile,
};
use crate::{Error, Rational};

pub use crate::mc::Estimator;

/// Largest f64 strictly below 1; quantile arguments are clamped into
/// `[MIN_POSITIVE, this]` because `Φ(t)` rounds to exactly 1.0 inside the
/// truncated tail.
const UNIT_OPEN_MAX: f64 = 1.0 - f64::EPSILON / 2.0;

fn clamp_unit_open(z: f64) -> f64 {
    z.clamp(f64::MIN_POSITIVE, UNIT_OPEN_MAX)
}

/// Standardized quantile `F^{-1}(z, 0, 1)` of the estimator's
/// location-scale family. Odd-symmetric: `F^{-1}(z) = -F^{-1}(1-z)`.
#[derive(Debug, Clone, Copy)]
pub enum QSpec {
    /// Sample mean: `Φ^{-1}(z)/√n`.
    Mean { n: u64 },
    /// Sample median, odd n: `Φ^{-1}(F_Be^{-1}(z, a, n-a+1))` with
    /// `a = floor(n/2) + 1`.
    Median { n: u64 },
}

impl QSpec {
    pub fn for_estimator(estimator: Estimator, n: u64) -> Result<Self, Error> {
        match estimator {
            Estimator::Mean => Ok(QSpec::Mean { n }),
            Estimator::Median => {
                if n % 2 == 0 {
                    return Err(Error::UnsupportedDesign {
                        what: "median designs require odd n (no closed-form density otherwise)",
                    });
                }
                Ok(QSpec::Median { n })
            }
        }
    }

    pub fn quantile(&self, z: f64) -> f64 {
        let z = clamp_unit_open(z);
        match *self {
            QSpec::Mean { n } => {
                std_normal_quantile(z).expect("clamped into (0,1)") / libm::sqrt(n as f64)
            }
            QSpec::Median { n } => {
                let a = (n / 2 + 1) as f64;
                let w = beta_quantile(z, a, n as f64 - a + 1.0).expect("clamped into (0,1)");
                std_normal_quantile(clamp_unit_open(w)).expect("clamped into (0,1)")
            }
        }
    }
}

/// A normal-mean bootstrap design.
#[derive(Debug, Clone, Copy)]
pub struct NormalDesign {
    pub n: u64,
    /// `None` marks the unknown-variance design (mean estimator only).
    pub sigma: Option<f64>,
    pub plan: BootstrapPlan,
    pub estimator: Estimator,
}

impl NormalDesign {
    pub fn known(n: u64, sigma: f64, plan: BootstrapPlan, estimator: Estimator) -> Result<Self, Error> {
        if sigma <= 0.0 {
            return Err(Error::Domain {
                what: "sigma must be positive",
            });
        }
        QSpec::for_estimator(estimator, n)?;
        Ok(NormalDesign {
            n,
            sigma: Some(sigma),
            plan,
            estimator,
        })
    }

    pub fn unknown(n: u64, plan: BootstrapPlan) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::Domain {
                what: "unknown-sigma design requires n >= 2",
            });
        }
        Ok(NormalDesign {
            n,
            sigma: None,
            plan,
            estimator: Estimator::Mean,
        })
    }
}

/// Theorem-1 constant coverage `(m_u - m_l)/(m + 1)`, exact.
pub fn coverage_cq(plan: &BootstrapPlan) -> Rational {
    Rational::new(
        (plan.m_u() - plan.m_l()) as i128,
        (plan.m() + 1) as i128,
    )
}

pub fn coverage_cq_f64(plan: &BootstrapPlan) -> f64 {
    (plan.m_u() - plan.m_l()) as f64 / (plan.m() + 1) as f64
}

/// Expected length of the percentile interval for a location-scale
/// estimator: `m σ ∫₀¹ F^{-1}(z)[p_B(m_u-1, m-1, z) - p_B(m_l-1, m-1, z)]dz`,
/// evaluated through the z = Φ(t) substitution.
pub fn el_cq(
    qspec: &QSpec,
    plan: &BootstrapPlan,
    sigma: f64,
    spec: &QuadratureSpec,
) -> Result<f64, Error> {
    let m = plan.m();
    let ku = plan.m_u() - 1;
    let kl = plan.m_l() - 1;
    let q = integrate(
        |z| {
            let z = clamp_unit_open(z);
            let du = binom_pmf(ku, m - 1, z).expect("z in (0,1)");
            let dl = binom_pmf(kl, m - 1, z).expect("z in (0,1)");
            qspec.quantile(z) * (du - dl)
        },
        Domain::UnitNormalSub,
        spec,
    );
    Ok(m as f64 * sigma * q.into_value()?)
}

/// `A(n, m, alpha)`: the expected length of the mean-based interval at
/// `sigma = 1`, so `EL_{C_N} = A(n,m,alpha) * sigma`.
pub fn a_factor(n: u64, m: u64, alpha: f64, spec: &QuadratureSpec) -> Result<f64, Error> {
    let plan = BootstrapPlan::new(m, alpha)?;
    el_cq(&QSpec::Mean { n }, &plan, 1.0, spec)
}

/// Expected length of the mean-based interval `C_N`.
pub fn el_cn(n: u64, m: u64, alpha: f64, sigma: f64, spec: &QuadratureSpec) -> Result<f64, Error> {
    Ok(a_factor(n, m, alpha, spec)? * sigma)
}

/// Expected length of the median-based interval `C_NM` (odd n).
pub fn el_cnm(n: u64, m: u64, alpha: f64, sigma: f64, spec: &QuadratureSpec) -> Result<f64, Error> {
    let qspec = QSpec::for_estimator(Estimator::Median, n)?;
    let plan = BootstrapPlan::new(m, alpha)?;
    el_cq(&qspec, &plan, sigma, spec)
}

/// Coverage of the unknown-sigma interval `C_Nu`:
/// `E[F_B(m_u-1, m, Φ(-T√(n/(n-1)))) - F_B(m_l-1, m, Φ(-T√(n/(n-1))))]`
/// with `T ~ t_{n-1}`; independent of `(mu, sigma)`.
pub fn coverage_cnu(n: u64, m: u64, alpha: f64, spec: &QuadratureSpec) -> Result<f64, Error> {
    if n < 2 {
        return Err(Error::Domain {
            what: "unknown-sigma design requires n >= 2",
        });
    }
    let plan = BootstrapPlan::new(m, alpha)?;
    let df = (n - 1) as u32;
    let scale = libm::sqrt(n as f64 / (n - 1) as f64);
    let q = integrate(
        |t| {
            let h = std_normal_cdf(-t * scale);
            let upper = binom_cdf(plan.m_u() as i64 - 1, m, h).expect("h in [0,1]");
            let lower = binom_cdf(plan.m_l() as i64 - 1, m, h).expect("h in [0,1]");
            (upper - lower) * t_pdf(t, df)
        },
        Domain::TruncatedReal,
        spec,
    );
    q.into_value()
}

/// `B(n) = √(2/n) Γ(n/2)/Γ((n-1)/2)`: the expected-length deflation of
/// the unknown-sigma interval relative to `C_N`. Always below 1.
pub fn b_factor(n: u64) -> f64 {
    let nf = n as f64;
    libm::sqrt(2.0 / nf) * libm::exp(gamma_ln(nf / 2.0) - gamma_ln((nf - 1.0) / 2.0))
}

/// Expected length of `C_Nu`: `B(n) A(n,m,alpha) sigma`.
pub fn el_cnu(n: u64, m: u64, alpha: f64, sigma: f64, spec: &QuadratureSpec) -> Result<f64, Error> {
    if n < 2 {
        return Err(Error::Domain {
            what: "unknown-sigma design requires n >= 2",
        });
    }
    Ok(b_factor(n) * a_factor(n, m, alpha, spec)? * sigma)
}

/// `E[S]/sigma` for the (n-1)-divisor sample standard deviation:
/// `√(2/(n-1)) Γ(n/2)/Γ((n-1)/2)`.
pub fn mean_of_s(n: u64) -> f64 {
    let nf = n as f64;
    libm::sqrt(2.0 / (nf - 1.0)) * libm::exp(gamma_ln(nf / 2.0) - gamma_ln((nf - 1.0) / 2.0))
}

/// Expected length of the classic z-interval `ybar ± z_{α/2} σ/√n`.
pub fn z_interval_el(n: u64, alpha: f64, sigma: f64) -> Result<f64, Error> {
    let z = std_normal_quantile(1.0 - alpha / 2.0)?;
    Ok(2.0 * z * sigma / libm::sqrt(n as f64))
}

/// Expected length of the classic t-interval `ybar ± t_{α/2,n-1} s/√n`,
/// with `s` the (n-1)-divisor sample standard deviation (the bootstrap
/// `C_Nu` uses the MLE divisor n instead; both conventions are explicit).
pub fn t_interval_el(n: u64, alpha: f64, sigma: f64) -> Result<f64, Error> {
    if n < 2 {
        return Err(Error::Domain {
            what: "t-interval requires n >= 2",
        });
    }
    let t = t_quantile(1.0 - alpha / 2.0, (n - 1) as u32)?;
    Ok(2.0 * t * mean_of_s(n) * sigma / libm::sqrt(n as f64))
}

/// Expected length of the z-interval whose nominal level equals
/// `target_cc` -- the z*-interval of the confidence-coefficient
/// comparison workflow.
pub fn z_star_el(target_cc: f64, n: u64, sigma: f64) -> Result<f64, Error> {
    if !(target_cc > 0.0 && target_cc < 1.0) {
        return Err(Error::Domain {
            what: "target confidence coefficient must lie in (0,1)",
        });
    }
    let z = std_normal_quantile((1.0 + target_cc) / 2.0)?;
    Ok(2.0 * z * sigma / libm::sqrt(n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(m: u64, alpha: f64) -> BootstrapPlan {
        BootstrapPlan::new(m, alpha).unwrap()
    }

    #[test]
    fn coverage_cq_exact_rationals() {
        let cases: [(u64, f64, i128, i128, f64); 6] = [
            (50, 0.1, 45, 51, 0.8824),
            (100, 0.1, 89, 101, 0.8812),
            (5000, 0.1, 4499, 5001, 0.8996),
            (50, 0.05, 47, 51, 0.9216),
            (100, 0.05, 95, 101, 0.9406),
            (5000, 0.05, 4749, 5001, 0.9496),
        ];
        for (m, alpha, num, den, rounded) in cases {
            let p = plan(m, alpha);
            let c = coverage_cq(&p);
            assert_eq!(c, Rational::new(num, den), "m={m} alpha={alpha}");
            let f = coverage_cq_f64(&p);
            assert!((f - rounded).abs() < 5e-5, "m={m}: {f} vs {rounded}");
        }
    }

    #[test]
    fn qspec_odd_symmetry() {
        let mean = QSpec::Mean { n: 5 };
        let med = QSpec::Median { n: 5 };
        for &z in &[0.01, 0.2, 0.4, 0.49] {
            assert!((mean.quantile(z) + mean.quantile(1.0 - z)).abs() < 1e-11);
            assert!((med.quantile(z) + med.quantile(1.0 - z)).abs() < 1e-9);
        }
    }

    #[test]
    fn qspec_median_rejects_even_n() {
        assert!(QSpec::for_estimator(Estimator::Median, 4).is_err());
        assert!(QSpec::for_estimator(Estimator::Median, 5).is_ok());
    }

    #[test]
    fn a_factor_scales_as_inverse_sqrt_n() {
        let spec = QuadratureSpec::default();
        let a5 = a_factor(5, 200, 0.2, &spec).unwrap();
        let a20 = a_factor(20, 200, 0.2, &spec).unwrap();
        assert!((a5 - 2.0 * a20).abs() < 1e-8, "{a5} vs 2*{a20}");
        assert!(a5 > 0.0);
    }

    #[test]
    fn el_cnm_exceeds_el_cn() {
        let spec = QuadratureSpec::default();
        let cn = el_cn(5, 100, 0.1, 1.0, &spec).unwrap();
        let cnm = el_cnm(5, 100, 0.1, 1.0, &spec).unwrap();
        assert!(cnm > cn, "median {cnm} should exceed mean {cn}");
    }

    #[test]
    fn el_cnm_rejects_even_n() {
        let spec = QuadratureSpec::default();
        assert!(matches!(
            el_cnm(4, 100, 0.1, 1.0, &spec),
            Err(Error::UnsupportedDesign { .. })
        ));
    }

    #[test]
    fn b_factor_value_and_monotonicity() {
        assert!((b_factor(5) - 0.84075).abs() < 1e-5, "{}", b_factor(5));
        let mut prev = 0.0;
        for n in 2..200 {
            let b = b_factor(n);
            assert!(b < 1.0, "B({n}) = {b}");
            assert!(b > prev, "B not increasing at n = {n}");
            prev = b;
        }
    }

    #[test]
    fn z_and_t_interval_table_values() {
        assert!((z_interval_el(5, 0.1, 1.0).unwrap() - 1.4712).abs() < 5e-4);
        assert!((t_interval_el(5, 0.1, 1.0).unwrap() - 1.7923).abs() < 5e-4);
        // z* at the nominal level is the plain z-interval.
        let z = z_interval_el(31, 0.05, 1.0).unwrap();
        let zs = z_star_el(0.95, 31, 1.0).unwrap();
        assert!((z - zs).abs() < 1e-14);
    }

    #[test]
    fn coverage_cnu_below_constant_and_increasing_in_n() {
        let spec = QuadratureSpec::default();
        let constant = coverage_cq_f64(&plan(100, 0.1));
        let mut prev = 0.0;
        for n in [5u64, 31, 301] {
            let c = coverage_cnu(n, 100, 0.1, &spec).unwrap();
            assert!(c < constant, "n={n}: {c} vs {constant}");
            assert!(c > prev, "not increasing at n={n}");
            prev = c;
        }
    }

    #[test]
    fn coverage_cnu_limits_to_theorem_constant() {
        // t -> normal as df grows; the integral collapses to (m_u-m_l)/(m+1).
        let spec = QuadratureSpec::default();
        let c = coverage_cnu(100_001, 50, 0.2, &spec).unwrap();
        let constant = coverage_cq_f64(&plan(50, 0.2));
        assert!((c - constant).abs() < 5e-4, "{c} vs {constant}");
    }

    #[test]
    fn el_cnu_matches_nested_quadrature() {
        // Independent route: EL = A(n,m,alpha) E[s], integrating s against
        // the chi_{n-1} density instead of using the Gamma-ratio identity.
        let spec = QuadratureSpec::default();
        let (n, m, alpha) = (5u64, 100u64, 0.1);
        let a = a_factor(n, m, alpha, &spec).unwrap();
        let k = (n - 1) as f64;
        let chi_norm = -(k / 2.0 - 1.0) * libm::log(2.0) - gamma_ln(k / 2.0);
        let e_s = integrate(
            |u| {
                if u <= 0.0 {
                    return 0.0;
                }
                let ln_pdf = chi_norm + (k - 1.0) * libm::log(u) - u * u / 2.0;
                u / libm::sqrt(n as f64) * libm::exp(ln_pdf)
            },
            Domain::Interval(0.0, 30.0),
            &spec,
        )
        .into_value()
        .unwrap();
        let direct = a * e_s;
        let identity = el_cnu(n, m, alpha, 1.0, &spec).unwrap();
        assert!((direct - identity).abs() < 1e-6, "{direct} vs {identity}");
    }

    #[test]
    fn el_cq_positive_for_valid_plans() {
        let spec = QuadratureSpec::default();
        for &(m, alpha) in &[(20u64, 0.2f64), (50, 0.1), (100, 0.05)] {
            let p = plan(m, alpha);
            let v = el_cq(&QSpec::Mean { n: 7 }, &p, 1.0, &spec).unwrap();
            assert!(v > 0.0, "m={m} alpha={alpha}: {v}");
        }
    }
}
