//! Percentile bootstrap for the mean and the median of a continuous
//! sample.
//!
//! Conditional on the sample, the bootstrap mean takes `S(n,n)` distinct
//! values indexed by compositions `(k_1,...,k_n)` with mass
//! `n^{-n} n!/(k_1!...k_n!)`; the cap on exact enumeration is n = 12
//! (about 1.35M compositions), beyond which only the full Monte Carlo
//! pipeline applies. The bootstrap median is fully tractable: its
//! conditional CDF is `F_B(a-1, n, (n-i)/n)` on the order statistics,
//! rank-only, which makes coverage a finite distribution-free sum for any
//! symmetric continuous population.

use alloc::vec::Vec;

use crate::binomial::{binom_cdf, binom_pmf};
use crate::dist::DiscreteDist;
use crate::mc::{
    draw_std_normal, run_replicates, simulate_nonparam, Estimator, McConfig, SampleFamily,
};
use crate::percentile::{bracket_parts, expected_width, BootstrapPlan};
use crate::quad::{integrate, Domain, QuadratureSpec};
use crate::special::std_normal_quantile;
use crate::{Error, EvalResult, Method, Rational};

/// Largest n whose composition space is enumerated exactly.
pub const ENUM_CAP: u32 = 12;

/// 1/√π: the closed form of `∫₀¹ Φ^{-1}(z)(2z-1) dz`.
pub const FRAC_1_SQRT_PI: f64 = 0.5641895835477563;

/// An observed sample; entries are labeled, so ties resample as distinct
/// outcomes.
#[derive(Debug, Clone)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self, Error> {
        if values.is_empty() {
            return Err(Error::Domain {
                what: "sample must be nonempty",
            });
        }
        Ok(Sample { values })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `S(n,t)`: the number of distinct monomials in `(x_1+...+x_n)^t`, via
/// the recurrence `S(n,t) = Σ_{j<=t} S(n-1,j)`, `S(1,t) = S(n,0) = 1`.
pub fn s_count(n: u32, t: u32) -> u128 {
    let mut row: Vec<u128> = alloc::vec![1; t as usize + 1];
    for _ in 2..=n.max(1) {
        let mut acc = 0u128;
        for slot in row.iter_mut() {
            acc += *slot;
            *slot = acc;
        }
    }
    row[t as usize]
}

const FACT: [u64; 13] = [
    1,
    1,
    2,
    6,
    24,
    120,
    720,
    5040,
    40320,
    362880,
    3628800,
    39916800,
    479001600,
];

/// Visit every composition `(k_1,...,k_n)` with `Σ k_j = n`, passing the
/// multinomial coefficient `n!/(k_1!...k_n!)`.
fn for_each_composition(n: usize, mut visit: impl FnMut(&[u32], u64)) {
    let mut k = alloc::vec![0u32; n];
    fn rec(k: &mut [u32], pos: usize, remaining: u32, n: usize, visit: &mut impl FnMut(&[u32], u64)) {
        if pos == n - 1 {
            k[pos] = remaining;
            let mut coef = FACT[n];
            for &kj in k.iter() {
                coef /= FACT[kj as usize];
            }
            visit(k, coef);
            return;
        }
        for c in 0..=remaining {
            k[pos] = c;
            rec(k, pos + 1, remaining - c, n, visit);
        }
    }
    rec(&mut k, 0, n as u32, n, &mut visit);
}

/// Conditional distribution of the bootstrap mean given the sample, by
/// exact composition enumeration. Real-valued samples are keyed by value
/// with the snap-tolerance merge; coincident values across compositions
/// have probability zero for continuous data.
pub fn mean_boot_dist(sample: &Sample) -> Result<DiscreteDist, Error> {
    let n = sample.n();
    if n as u32 > ENUM_CAP {
        return Err(Error::EnumerationCap {
            n: n as u32,
            cap: ENUM_CAP,
        });
    }
    let n_pow = libm::pow(n as f64, n as f64);
    let values = sample.values();
    let mut entries: Vec<(f64, f64)> = Vec::with_capacity(s_count(n as u32, n as u32) as usize);
    for_each_composition(n, |k, coef| {
        let total: f64 = k
            .iter()
            .zip(values.iter())
            .map(|(&kj, &y)| kj as f64 * y)
            .sum();
        entries.push((total / n as f64, coef as f64 / n_pow));
    });
    DiscreteDist::from_reals(entries)
}

/// Exact-rational variant of [`mean_boot_dist`] for rational-valued
/// samples: returns the merged `(value, mass)` pairs as exact rationals.
pub fn mean_boot_dist_exact(values: &[Rational]) -> Result<Vec<(Rational, Rational)>, Error> {
    let n = values.len();
    if n == 0 {
        return Err(Error::EmptySupport);
    }
    if n as u32 > ENUM_CAP {
        return Err(Error::EnumerationCap {
            n: n as u32,
            cap: ENUM_CAP,
        });
    }
    let n_pow = (n as i128).pow(n as u32);
    let mut acc: alloc::collections::BTreeMap<Rational, Rational> =
        alloc::collections::BTreeMap::new();
    for_each_composition(n, |k, coef| {
        let total: Rational = k
            .iter()
            .zip(values.iter())
            .map(|(&kj, y)| Rational::from_integer(kj as i128) * *y)
            .sum();
        let value = total / Rational::from_integer(n as i128);
        let mass = Rational::new(coef as i128, n_pow);
        *acc.entry(value).or_insert_with(|| Rational::new(0, 1)) += mass;
    });
    Ok(acc.into_iter().collect())
}

/// Exact n = 2 coverage: `(1/2)[F_B(m_u-1, m, 1/4) - F_B(m_l-1, m, 1/4)]`.
pub fn coverage_cpn_n2(plan: &BootstrapPlan) -> f64 {
    let upper = binom_cdf(plan.m_u() as i64 - 1, plan.m(), 0.25).expect("prob in range");
    let lower = binom_cdf(plan.m_l() as i64 - 1, plan.m(), 0.25).expect("prob in range");
    0.5 * (upper - lower)
}

/// Exact n = 2 expected length:
/// `2σ [F_B(m_u-1, m, 1/4) - F_B(m_l-1, m, 1/4)] / √π`.
pub fn el_cpn_n2(plan: &BootstrapPlan, sigma: f64) -> f64 {
    let upper = binom_cdf(plan.m_u() as i64 - 1, plan.m(), 0.25).expect("prob in range");
    let lower = binom_cdf(plan.m_l() as i64 - 1, plan.m(), 0.25).expect("prob in range");
    2.0 * sigma * (upper - lower) * FRAC_1_SQRT_PI
}

/// The hard coverage ceiling `1 - 2^{-(n-1)}`: the probability that the
/// sample does not lie entirely on one side of the mean.
pub fn cpn_upper_bound(n: u32) -> f64 {
    1.0 - libm::pow(2.0, -((n as f64) - 1.0))
}

/// Evaluation modes for the bootstrap-mean coverage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpnMode {
    /// Exact outer enumeration over the sign/ordering regions. Only
    /// n = 2 admits this reduction; the general-n outer integral over
    /// R^n has no finite form.
    ExactEnum,
    /// Simulate the outer sample, compute the inner bootstrap CDF
    /// exactly by composition enumeration, average the bracket.
    /// Strictly lower variance than the full pipeline at equal reps.
    RaoBlackwell,
    /// Simulate both the outer sample and the m bootstrap draws.
    FullMc,
}

/// Coverage probability of the percentile-mean interval at `mu` (the
/// value is mu-free; the estimate is computed by centering at mu).
pub fn coverage_cpn(
    n: u32,
    plan: &BootstrapPlan,
    mu: f64,
    mode: CpnMode,
    cfg: &McConfig,
) -> Result<EvalResult, Error> {
    match mode {
        CpnMode::ExactEnum => {
            if n != 2 {
                return Err(Error::UnsupportedDesign {
                    what: "exact outer enumeration of the bootstrap-mean coverage exists only \
                           for n = 2; use the Rao-Blackwell or full Monte Carlo path",
                });
            }
            // The four regions of the (y_1, y_2) plane have probability
            // 1/4 each and conditional CDFs H(mu) in {0, 1/4, 3/4, 1}.
            let mut acc = 0.0;
            for h in [0.0, 0.25, 0.75, 1.0] {
                acc += bracket_parts(plan.m(), plan.m_l(), plan.m_u(), h, h)?;
            }
            Ok(EvalResult::exact(0.25 * acc))
        }
        CpnMode::RaoBlackwell => {
            if n > ENUM_CAP {
                return Err(Error::EnumerationCap { n, cap: ENUM_CAP });
            }
            let mut centered = alloc::vec![0.0f64; n as usize];
            let (cov, _) = run_replicates(cfg, |rng| {
                for slot in centered.iter_mut() {
                    let y = mu + draw_std_normal(rng);
                    *slot = y - mu;
                }
                let dist = mean_boot_dist(&Sample {
                    values: centered.clone(),
                })
                .expect("n under cap");
                let (h_left, h_at) = dist.cdf_pair(0.0);
                let b = bracket_parts(plan.m(), plan.m_l(), plan.m_u(), h_left, h_at)
                    .expect("h in range");
                (b, 0.0)
            });
            Ok(EvalResult {
                value: cov.mean(),
                method: Method::MonteCarlo {
                    reps: cfg.reps,
                    seed: cfg.seed,
                    se: cov.se(),
                },
            })
        }
        CpnMode::FullMc => {
            let est = simulate_nonparam(
                n as u64,
                Estimator::Mean,
                SampleFamily::Normal { mu, sigma: 1.0 },
                plan,
                cfg,
            );
            Ok(EvalResult {
                value: est.coverage,
                method: Method::MonteCarlo {
                    reps: cfg.reps,
                    seed: cfg.seed,
                    se: est.coverage_se,
                },
            })
        }
    }
}

/// Expected length of the percentile-mean interval: the Rao-Blackwell
/// average of the exact conditional width over simulated samples, scaled
/// by sigma.
pub fn el_cpn(
    n: u32,
    plan: &BootstrapPlan,
    sigma: f64,
    cfg: &McConfig,
) -> Result<EvalResult, Error> {
    if n > ENUM_CAP {
        return Err(Error::EnumerationCap { n, cap: ENUM_CAP });
    }
    let mut sample = alloc::vec![0.0f64; n as usize];
    let (_, wid) = run_replicates(cfg, |rng| {
        for slot in sample.iter_mut() {
            *slot = draw_std_normal(rng);
        }
        let dist = mean_boot_dist(&Sample {
            values: sample.clone(),
        })
        .expect("n under cap");
        let w = expected_width(&dist, plan).expect("nonempty support");
        (0.0, w)
    });
    Ok(EvalResult {
        value: sigma * wid.mean(),
        method: Method::MonteCarlo {
            reps: cfg.reps,
            seed: cfg.seed,
            se: sigma * wid.se(),
        },
    })
}

/// Conditional distribution of the bootstrap median (odd n): support is
/// the order statistics, `H_M(y_(i)) = F_B(a-1, n, (n-i)/n)` with
/// `a = floor(n/2) + 1`. Rank-only, independent of the values themselves.
pub fn median_boot_dist(sample: &Sample) -> Result<DiscreteDist, Error> {
    let n = sample.n() as u64;
    if n % 2 == 0 {
        return Err(Error::UnsupportedDesign {
            what: "bootstrap-median distribution requires odd n",
        });
    }
    let a = n / 2 + 1;
    let mut sorted = sample.values().to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let mut entries = Vec::with_capacity(n as usize);
    let mut prev = 0.0;
    for (idx, &v) in sorted.iter().enumerate() {
        let i = idx as u64 + 1;
        let h = binom_cdf(a as i64 - 1, n, (n - i) as f64 / n as f64)?;
        entries.push((v, h - prev));
        prev = h;
    }
    DiscreteDist::from_reals(entries)
}

fn cpm_h(i: u64, n: u64) -> Result<f64, Error> {
    let a = n / 2 + 1;
    binom_cdf(a as i64 - 1, n, (n - i) as f64 / n as f64)
}

/// Exact coverage of the percentile-median interval for any symmetric
/// continuous population (odd n):
/// `Σ_i [F_B(m_u-1,m,H_i) - F_B(m_l-1,m,H_i)] p_B(i,n,1/2)` with
/// `H_i = F_B(a-1, n, (n-i)/n)`.
pub fn coverage_cpm(n: u64, plan: &BootstrapPlan) -> Result<f64, Error> {
    if n % 2 == 0 {
        return Err(Error::UnsupportedDesign {
            what: "percentile-median coverage requires odd n",
        });
    }
    let mut acc = 0.0;
    for i in 0..=n {
        let h = cpm_h(i, n)?;
        let b = bracket_parts(plan.m(), plan.m_l(), plan.m_u(), h, h)?;
        acc += b * binom_pmf(i, n, 0.5)?;
    }
    Ok(acc)
}

/// Expected length of the percentile-median interval for a population
/// with quantile function `quantile` (odd n):
/// `n Σ_{i=1}^{n-1} bracket_i ∫₀¹ F^{-1}(z)[p_B(i,n-1,z) - p_B(i-1,n-1,z)]dz`.
pub fn el_cpm(
    n: u64,
    plan: &BootstrapPlan,
    quantile: impl Fn(f64) -> f64,
    spec: &QuadratureSpec,
) -> Result<f64, Error> {
    if n % 2 == 0 {
        return Err(Error::UnsupportedDesign {
            what: "percentile-median length requires odd n",
        });
    }
    let mut brackets = Vec::with_capacity(n as usize - 1);
    for i in 1..n {
        let h = cpm_h(i, n)?;
        brackets.push(bracket_parts(plan.m(), plan.m_l(), plan.m_u(), h, h)?);
    }
    let q = integrate(
        |z| {
            let mut inner = 0.0;
            for (idx, &b) in brackets.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                let i = idx as u64 + 1;
                let hi = binom_pmf(i, n - 1, z).expect("z in [0,1]");
                let lo = binom_pmf(i - 1, n - 1, z).expect("z in [0,1]");
                inner += b * (hi - lo);
            }
            quantile(z) * inner
        },
        Domain::UnitNormalSub,
        spec,
    );
    Ok(n as f64 * q.into_value()?)
}

/// [`el_cpm`] for the normal family `N(mu, sigma^2)`.
pub fn el_cpm_normal(
    n: u64,
    plan: &BootstrapPlan,
    sigma: f64,
    spec: &QuadratureSpec,
) -> Result<f64, Error> {
    let el = el_cpm(
        n,
        plan,
        |z| std_normal_quantile(z.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0)).unwrap(),
        spec,
    )?;
    Ok(sigma * el)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(m: u64, alpha: f64) -> BootstrapPlan {
        BootstrapPlan::new(m, alpha).unwrap()
    }

    fn choose(n: u128, k: u128) -> u128 {
        let mut acc = 1u128;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }

    #[test]
    fn s_count_small_and_stars_bars() {
        assert_eq!(s_count(2, 2), 3);
        assert_eq!(s_count(3, 3), 10);
        assert_eq!(s_count(1, 7), 1);
        assert_eq!(s_count(5, 0), 1);
        for n in 1..=12u32 {
            assert_eq!(
                s_count(n, n),
                choose(2 * n as u128 - 1, n as u128 - 1),
                "n = {n}"
            );
        }
    }

    #[test]
    fn mean_boot_dist_table_example() {
        let s = Sample::new(alloc::vec![0.0, 1.0, 5.0]).unwrap();
        let d = mean_boot_dist(&s).unwrap();
        assert_eq!(d.len(), 10);
        assert!((d.total_mass() - 1.0).abs() < 1e-12);
        let (_, h0) = d.cdf_pair(0.0);
        assert!((h0 - 1.0 / 27.0).abs() < 1e-13);
        let (left2, at2) = d.cdf_pair(2.0);
        assert!((at2 - 17.0 / 27.0).abs() < 1e-13);
        assert!((at2 - left2 - 6.0 / 27.0).abs() < 1e-13);
        let (_, h5) = d.cdf_pair(5.0);
        assert!((h5 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn mean_boot_dist_exact_reproduces_all_rows() {
        let values: Vec<Rational> = [0, 1, 5]
            .iter()
            .map(|&v| Rational::from_integer(v))
            .collect();
        let rows = mean_boot_dist_exact(&values).unwrap();
        let expect: [(i128, i128, i128); 10] = [
            (0, 1, 1),
            (1, 3, 3),
            (2, 3, 3),
            (1, 1, 1),
            (5, 3, 3),
            (2, 1, 6),
            (7, 3, 3),
            (10, 3, 3),
            (11, 3, 3),
            (5, 1, 1),
        ];
        assert_eq!(rows.len(), 10);
        let mut cum = Rational::new(0, 1);
        for ((value, mass), (num, den, count)) in rows.iter().zip(expect.iter()) {
            assert_eq!(*value, Rational::new(*num, *den));
            assert_eq!(*mass, Rational::new(*count, 27));
            cum += *mass;
        }
        assert_eq!(cum, Rational::new(1, 1));
    }

    #[test]
    fn enumeration_cap_enforced() {
        let s = Sample::new((0..13).map(|i| i as f64).collect()).unwrap();
        assert!(matches!(
            mean_boot_dist(&s),
            Err(Error::EnumerationCap { n: 13, cap: 12 })
        ));
    }

    #[test]
    fn cpn_n2_binomial_arithmetic() {
        let p = plan(4, 0.5);
        assert_eq!((p.m_l(), p.m_u()), (2, 3));
        let c = coverage_cpn_n2(&p);
        assert!((c - 0.10546875).abs() < 1e-14, "c = {c}");
        for &(m, alpha) in &[(4u64, 0.5f64), (10, 0.2), (100, 0.1), (50, 0.05)] {
            assert!(coverage_cpn_n2(&plan(m, alpha)) <= 0.5);
        }
    }

    #[test]
    fn el_cpn_n2_sigma_linear() {
        let p = plan(10, 0.2);
        let one = el_cpn_n2(&p, 1.0);
        let two = el_cpn_n2(&p, 2.0);
        assert!(one > 0.0);
        assert_eq!(two, 2.0 * one);
    }

    #[test]
    fn upper_bound_values() {
        assert_eq!(cpn_upper_bound(2), 0.5);
        assert_eq!(cpn_upper_bound(5), 0.9375);
    }

    #[test]
    fn exact_enum_matches_n2_formula() {
        for &(m, alpha) in &[(4u64, 0.5f64), (20, 0.2), (100, 0.1)] {
            let p = plan(m, alpha);
            let cfg = McConfig::new(100, 1).unwrap();
            let enumerated = coverage_cpn(2, &p, 0.0, CpnMode::ExactEnum, &cfg).unwrap();
            assert!(matches!(enumerated.method, Method::Exact));
            assert!(
                (enumerated.value - coverage_cpn_n2(&p)).abs() < 1e-12,
                "m={m}"
            );
        }
        let cfg = McConfig::new(100, 1).unwrap();
        assert!(coverage_cpn(3, &plan(10, 0.2), 0.0, CpnMode::ExactEnum, &cfg).is_err());
    }

    #[test]
    fn rao_blackwell_is_translation_equivariant_bitwise() {
        let p = plan(10, 0.2);
        let cfg = McConfig::new(2000, 99).unwrap();
        let at_zero = coverage_cpn(3, &p, 0.0, CpnMode::RaoBlackwell, &cfg).unwrap();
        let shifted = coverage_cpn(3, &p, 7.3, CpnMode::RaoBlackwell, &cfg).unwrap();
        assert_eq!(at_zero.value.to_bits(), shifted.value.to_bits());
    }

    #[test]
    fn el_cpn_sigma_linearity_at_fixed_seed() {
        let p = plan(10, 0.2);
        let cfg = McConfig::new(500, 7).unwrap();
        let one = el_cpn(3, &p, 1.0, &cfg).unwrap();
        let three = el_cpn(3, &p, 3.0, &cfg).unwrap();
        assert_eq!(three.value, 3.0 * one.value);
        assert!(el_cpn(13, &p, 1.0, &cfg).is_err());
    }

    #[test]
    fn median_boot_dist_rank_only() {
        let a = Sample::new(alloc::vec![1.0, 0.0, 4.0]).unwrap();
        let b = Sample::new(alloc::vec![-10.0, 3.0, 100.0]).unwrap();
        let da = median_boot_dist(&a).unwrap();
        let db = median_boot_dist(&b).unwrap();
        // H values depend only on ranks.
        for (ma, mb) in da.cum().iter().zip(db.cum().iter()) {
            assert!((ma - mb).abs() < 1e-15);
        }
        // n = 3: 7 of 27 triples have median equal to the minimum.
        assert!((da.cum()[0] - 7.0 / 27.0).abs() < 1e-14);
        assert!((da.cum()[2] - 1.0).abs() < 1e-14);
        assert!(median_boot_dist(&Sample::new(alloc::vec![1.0, 2.0]).unwrap()).is_err());
    }

    #[test]
    fn coverage_cpm_respects_ceiling_and_rejects_even_n() {
        for &(n, m, alpha) in &[(3u64, 10u64, 0.2f64), (5, 50, 0.1), (7, 100, 0.05)] {
            let c = coverage_cpm(n, &plan(m, alpha)).unwrap();
            assert!(c <= cpn_upper_bound(n as u32) + 1e-12, "n={n}: {c}");
            assert!(c >= 0.0);
        }
        assert!(coverage_cpm(4, &plan(10, 0.2)).is_err());
    }

    #[test]
    fn el_cpm_uniform_family_scales_linearly() {
        let spec = QuadratureSpec::default();
        let p = plan(20, 0.2);
        // Uniform on [-c, c]: quantile c(2z - 1).
        let at1 = el_cpm(5, &p, |z| 2.0 * z - 1.0, &spec).unwrap();
        let at3 = el_cpm(5, &p, |z| 3.0 * (2.0 * z - 1.0), &spec).unwrap();
        assert!(at1 > 0.0);
        assert!((at3 - 3.0 * at1).abs() < 1e-8);
    }
}
