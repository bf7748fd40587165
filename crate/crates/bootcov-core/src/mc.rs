//! Full-pipeline Monte Carlo simulation and brute-force enumeration of
//! bootstrap intervals. These are the independent oracles for every exact
//! formula in the crate: they never touch the order-statistic CDF
//! machinery, only draw data, draw bootstrap estimates, sort, and count.
//!
//! Replicate `r` of a run gets its own generator derived from
//! `(seed, r)` by a SplitMix64 hash, so serial and chunked executions of
//! the same `(seed, streams)` configuration agree bit for bit.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::binom_one::{wilson_coeffs, Center};
use crate::binomial::binom_pmf;
use crate::dist::DiscreteDist;
use crate::percentile::BootstrapPlan;
use crate::special::std_normal_quantile;
use crate::Error;

/// Replication budget and seeding for a simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub reps: u64,
    pub seed: u64,
    pub streams: u32,
}

impl McConfig {
    pub fn new(reps: u64, seed: u64) -> Result<Self, Error> {
        if reps < 100 {
            return Err(Error::Domain {
                what: "Monte Carlo runs need at least 100 replications",
            });
        }
        Ok(McConfig {
            reps,
            seed,
            streams: 1,
        })
    }

    pub fn with_streams(mut self, streams: u32) -> Self {
        self.streams = streams.max(1);
        self
    }
}

/// Means and standard errors from one simulation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub coverage: f64,
    pub coverage_se: f64,
    pub el: f64,
    pub el_se: f64,
    pub reps: u64,
    pub seed: u64,
}

/// Per-replicate generator: SplitMix64 over `(seed, rep)`.
pub fn rep_rng(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut z = seed ^ rep.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    ChaCha8Rng::seed_from_u64(z)
}

/// Standard normal draw by inverse CDF; one uniform per variate, fully
/// deterministic across platforms.
pub fn draw_std_normal<R: Rng>(rng: &mut R) -> f64 {
    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
    std_normal_quantile(u).expect("u strictly inside (0,1)")
}

fn draw_laplace<R: Rng>(rng: &mut R, mu: f64, scale: f64) -> f64 {
    let u: f64 = rng.gen_range(f64::EPSILON - 0.5..0.5);
    let sign = if u < 0.0 { -1.0 } else { 1.0 };
    mu - scale * sign * libm::log1p(-2.0 * u.abs())
}

/// Inverse-CDF binomial sampler with a precomputed cumulative table;
/// build once per conditional distribution, draw many times.
pub struct BinomialSampler {
    cum: Vec<f64>,
}

impl BinomialSampler {
    pub fn new(n: u64, p: f64) -> Self {
        let mut cum = Vec::with_capacity(n as usize + 1);
        let mut acc = 0.0;
        for k in 0..=n {
            acc += binom_pmf(k, n, p).expect("k in range");
            cum.push(acc);
        }
        BinomialSampler { cum }
    }

    pub fn draw<R: Rng>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.gen_range(0.0..1.0);
        self.cum.partition_point(|&c| c < u) as u64
    }
}

/// Data-generating family for the nonparametric designs. Both families
/// are symmetric about `mu`, so `mu` is simultaneously mean and median.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleFamily {
    Normal { mu: f64, sigma: f64 },
    Laplace { mu: f64, scale: f64 },
}

impl SampleFamily {
    pub fn location(&self) -> f64 {
        match self {
            SampleFamily::Normal { mu, .. } => *mu,
            SampleFamily::Laplace { mu, .. } => *mu,
        }
    }

    pub fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            SampleFamily::Normal { mu, sigma } => mu + sigma * draw_std_normal(rng),
            SampleFamily::Laplace { mu, scale } => draw_laplace(rng, mu, scale),
        }
    }
}

/// Point estimator applied to a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    Mean,
    /// Sample median; the designs in this crate only use it for odd n.
    Median,
}

impl Estimator {
    pub fn apply(&self, values: &mut [f64]) -> f64 {
        match self {
            Estimator::Mean => values.iter().sum::<f64>() / values.len() as f64,
            Estimator::Median => {
                let mid = values.len() / 2;
                *values
                    .select_nth_unstable_by(mid, f64::total_cmp)
                    .1
            }
        }
    }
}

pub(crate) struct Running {
    count: u64,
    sum: f64,
    sum2: f64,
}

impl Running {
    fn new() -> Self {
        Running {
            count: 0,
            sum: 0.0,
            sum2: 0.0,
        }
    }
    fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum2 += x * x;
    }
    fn merge(&mut self, other: Running) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum2 += other.sum2;
    }
    pub(crate) fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }
    pub(crate) fn se(&self) -> f64 {
        let n = self.count as f64;
        let var = (self.sum2 / n - self.mean() * self.mean()).max(0.0);
        libm::sqrt(var / n)
    }
}

/// Run `rep_fn` over every replicate, chunked by stream, and aggregate in
/// stream order. `rep_fn` returns (coverage contribution, width).
pub(crate) fn run_replicates<F>(cfg: &McConfig, mut rep_fn: F) -> (Running, Running)
where
    F: FnMut(&mut ChaCha8Rng) -> (f64, f64),
{
    let chunk = cfg.reps.div_ceil(cfg.streams as u64);
    let mut cov = Running::new();
    let mut wid = Running::new();
    let mut start = 0u64;
    while start < cfg.reps {
        let end = (start + chunk).min(cfg.reps);
        let mut cov_part = Running::new();
        let mut wid_part = Running::new();
        for rep in start..end {
            let mut rng = rep_rng(cfg.seed, rep);
            let (c, w) = rep_fn(&mut rng);
            cov_part.push(c);
            wid_part.push(w);
        }
        cov.merge(cov_part);
        wid.merge(wid_part);
        start = end;
    }
    (cov, wid)
}

fn finish(cfg: &McConfig, cov: Running, wid: Running, indicator: bool) -> McEstimate {
    let coverage = cov.mean();
    let coverage_se = if indicator {
        // Binomial proportion SE for 0/1 coverage indicators.
        libm::sqrt(coverage * (1.0 - coverage) / cov.count as f64)
    } else {
        cov.se()
    };
    McEstimate {
        coverage,
        coverage_se,
        el: wid.mean(),
        el_se: wid.se(),
        reps: cfg.reps,
        seed: cfg.seed,
    }
}

/// Indicator/width of `[u_(m_l), u_(m_u)]` built from the raw estimates.
fn interval_outcome(estimates: &mut [f64], plan: &BootstrapPlan, theta: f64) -> (f64, f64) {
    let mu_idx = plan.m_u() as usize - 1;
    let ml_idx = plan.m_l() as usize - 1;
    let (lower_part, hi, _) = estimates.select_nth_unstable_by(mu_idx, f64::total_cmp);
    let hi = *hi;
    let lo = *lower_part.select_nth_unstable_by(ml_idx, f64::total_cmp).1;
    let covered = (lo <= theta && theta <= hi) as u64 as f64;
    (covered, hi - lo)
}

/// Count-to-estimate map of the one-sample designs. The Wald estimate is
/// the division `c/n` (not `c * (1/n)`, which lands one ulp off the
/// attainable values and corrupts exact-touch coverage events).
fn one_sample_estimate(center: Center, n: u64, alpha: f64) -> Result<impl Fn(u64) -> f64, Error> {
    let (a, b) = match center {
        Center::Wald => (f64::NAN, f64::NAN),
        Center::Wilson => {
            let w = wilson_coeffs(n, alpha)?;
            (w.a1, w.b1)
        }
    };
    Ok(move |c: u64| match center {
        Center::Wald => c as f64 / n as f64,
        Center::Wilson => a * c as f64 + b,
    })
}

/// One-sample proportion designs: Wald center `y/n` or Wilson center
/// `a1*y + b1`; bootstrap counts are drawn from `Bino(n, estimate)`.
pub fn simulate_binom_one(
    n: u64,
    center: Center,
    plan: &BootstrapPlan,
    p: f64,
    cfg: &McConfig,
) -> Result<McEstimate, Error> {
    let estimate = one_sample_estimate(center, n, plan.alpha())?;
    let m = plan.m() as usize;
    let data_sampler = BinomialSampler::new(n, p);
    let mut boot: Vec<f64> = alloc::vec![0.0; m];
    let (cov, wid) = run_replicates(cfg, |rng| {
        let y = data_sampler.draw(rng);
        let boot_sampler = BinomialSampler::new(n, estimate(y));
        for slot in boot.iter_mut() {
            *slot = estimate(boot_sampler.draw(rng));
        }
        interval_outcome(&mut boot, plan, p)
    });
    Ok(finish(cfg, cov, wid, true))
}

/// Which two-sample functional the interval targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoSampleTarget {
    Difference,
    OddsRatio,
}

fn gart(u: u64, v: u64, n1: u64, n2: u64) -> f64 {
    ((u as f64 + 0.5) * ((n2 - v) as f64 + 0.5)) / (((n1 - u) as f64 + 0.5) * (v as f64 + 0.5))
}

/// Two-sample designs: difference `p1 - p2` or Gart odds ratio.
/// `p1` is derived from the target point.
pub fn simulate_binom_two(
    n1: u64,
    n2: u64,
    target: TwoSampleTarget,
    plan: &BootstrapPlan,
    theta: f64,
    p2: f64,
    cfg: &McConfig,
) -> McEstimate {
    let p1 = match target {
        TwoSampleTarget::Difference => theta + p2,
        TwoSampleTarget::OddsRatio => theta * p2 / (1.0 + (theta - 1.0) * p2),
    };
    let m = plan.m() as usize;
    let s1 = BinomialSampler::new(n1, p1);
    let s2 = BinomialSampler::new(n2, p2);
    let mut boot: Vec<f64> = alloc::vec![0.0; m];
    let (cov, wid) = run_replicates(cfg, |rng| {
        let x = s1.draw(rng);
        let y = s2.draw(rng);
        let b1 = BinomialSampler::new(n1, x as f64 / n1 as f64);
        let b2 = BinomialSampler::new(n2, y as f64 / n2 as f64);
        for slot in boot.iter_mut() {
            let u = b1.draw(rng);
            let v = b2.draw(rng);
            *slot = match target {
                TwoSampleTarget::Difference => u as f64 / n1 as f64 - v as f64 / n2 as f64,
                TwoSampleTarget::OddsRatio => gart(u, v, n1, n2),
            };
        }
        interval_outcome(&mut boot, plan, theta)
    });
    finish(cfg, cov, wid, true)
}

/// Parametric bootstrap for a normal mean with known sigma, using the
/// mean or (odd-n) median estimator.
pub fn simulate_normal_known(
    n: u64,
    sigma: f64,
    estimator: Estimator,
    plan: &BootstrapPlan,
    mu: f64,
    cfg: &McConfig,
) -> McEstimate {
    let m = plan.m() as usize;
    let mut data: Vec<f64> = alloc::vec![0.0; n as usize];
    let mut resample: Vec<f64> = alloc::vec![0.0; n as usize];
    let mut boot: Vec<f64> = alloc::vec![0.0; m];
    let (cov, wid) = run_replicates(cfg, |rng| {
        for d in data.iter_mut() {
            *d = mu + sigma * draw_std_normal(rng);
        }
        let q = estimator.apply(&mut data);
        for slot in boot.iter_mut() {
            for r in resample.iter_mut() {
                *r = q + sigma * draw_std_normal(rng);
            }
            *slot = estimator.apply(&mut resample);
        }
        interval_outcome(&mut boot, plan, mu)
    });
    finish(cfg, cov, wid, true)
}

/// Parametric bootstrap for a normal mean with unknown sigma: resamples
/// come from `N(ybar, s^2)` with the MLE variance (divisor n).
pub fn simulate_normal_unknown(
    n: u64,
    plan: &BootstrapPlan,
    mu: f64,
    sigma: f64,
    cfg: &McConfig,
) -> McEstimate {
    let m = plan.m() as usize;
    let mut data: Vec<f64> = alloc::vec![0.0; n as usize];
    let mut resample: Vec<f64> = alloc::vec![0.0; n as usize];
    let mut boot: Vec<f64> = alloc::vec![0.0; m];
    let (cov, wid) = run_replicates(cfg, |rng| {
        for d in data.iter_mut() {
            *d = mu + sigma * draw_std_normal(rng);
        }
        let ybar = data.iter().sum::<f64>() / n as f64;
        let s = libm::sqrt(data.iter().map(|y| (y - ybar) * (y - ybar)).sum::<f64>() / n as f64);
        for slot in boot.iter_mut() {
            for r in resample.iter_mut() {
                *r = ybar + s * draw_std_normal(rng);
            }
            *slot = resample.iter().sum::<f64>() / n as f64;
        }
        interval_outcome(&mut boot, plan, mu)
    });
    finish(cfg, cov, wid, true)
}

/// Percentile bootstrap: resample with replacement from the observed
/// sample, apply the estimator, take order statistics. The target is the
/// family's location.
pub fn simulate_nonparam(
    n: u64,
    estimator: Estimator,
    family: SampleFamily,
    plan: &BootstrapPlan,
    cfg: &McConfig,
) -> McEstimate {
    let m = plan.m() as usize;
    let theta = family.location();
    let mut data: Vec<f64> = alloc::vec![0.0; n as usize];
    let mut resample: Vec<f64> = alloc::vec![0.0; n as usize];
    let mut boot: Vec<f64> = alloc::vec![0.0; m];
    let (cov, wid) = run_replicates(cfg, |rng| {
        for d in data.iter_mut() {
            *d = family.draw(rng);
        }
        for slot in boot.iter_mut() {
            for r in resample.iter_mut() {
                *r = data[rng.gen_range(0..n as usize)];
            }
            *slot = estimator.apply(&mut resample);
        }
        interval_outcome(&mut boot, plan, theta)
    });
    finish(cfg, cov, wid, true)
}

/// Cap on the number of enumerated outcomes in [`exhaustive_interval`].
pub const EXHAUSTIVE_CAP: u128 = 10_000_000;

/// Exact coverage and expected width of `[u_(m_l), u_(m_u)]` when the m
/// bootstrap draws come i.i.d. from a small finite distribution: complete
/// enumeration of all ordered m-tuples. No randomness, no order-statistic
/// formulas.
pub fn exhaustive_interval(
    dist: &DiscreteDist,
    plan: &BootstrapPlan,
    theta: f64,
) -> Result<(f64, f64), Error> {
    let k = dist.len();
    let m = plan.m() as usize;
    let outcomes = (k as u128)
        .checked_pow(m as u32)
        .ok_or(Error::SizeCap {
            outcomes: u128::MAX,
            cap: EXHAUSTIVE_CAP,
        })?;
    if outcomes > EXHAUSTIVE_CAP {
        return Err(Error::SizeCap {
            outcomes,
            cap: EXHAUSTIVE_CAP,
        });
    }
    let values = dist.values();
    let masses = dist.masses();
    let mut idx = alloc::vec![0usize; m];
    let mut sorted = alloc::vec![0.0f64; m];
    let mut coverage = 0.0;
    let mut width = 0.0;
    loop {
        let mut prob = 1.0;
        for (slot, &i) in sorted.iter_mut().zip(idx.iter()) {
            prob *= masses[i];
            *slot = values[i];
        }
        sorted.sort_unstable_by(f64::total_cmp);
        let lo = sorted[plan.m_l() as usize - 1];
        let hi = sorted[plan.m_u() as usize - 1];
        if lo <= theta && theta <= hi {
            coverage += prob;
        }
        width += prob * (hi - lo);
        // Odometer increment.
        let mut pos = 0;
        loop {
            if pos == m {
                return Ok((coverage, width));
            }
            idx[pos] += 1;
            if idx[pos] < k {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Exhaustive one-sample proportion oracle: enumerates the data outcome
/// `y` and, per `y`, every ordered bootstrap m-tuple of estimates.
pub fn exhaustive_binom_one(
    n: u64,
    center: Center,
    plan: &BootstrapPlan,
    p: f64,
) -> Result<(f64, f64), Error> {
    let estimate = one_sample_estimate(center, n, plan.alpha())?;
    let mut coverage = 0.0;
    let mut el = 0.0;
    for y in 0..=n {
        let weight = binom_pmf(y, n, p)?;
        let entries: Vec<(f64, f64)> = (0..=n)
            .map(|c| (estimate(c), binom_pmf(c, n, estimate(y)).unwrap()))
            .collect();
        let dist = DiscreteDist::from_reals(entries)?;
        let (c, w) = exhaustive_interval(&dist, plan, p)?;
        coverage += weight * c;
        el += weight * w;
    }
    Ok((coverage, el))
}

/// Exhaustive two-sample oracle over all `(x, y)` data outcomes and all
/// ordered bootstrap m-tuples of the difference or odds-ratio estimates.
pub fn exhaustive_binom_two(
    n1: u64,
    n2: u64,
    target: TwoSampleTarget,
    plan: &BootstrapPlan,
    theta: f64,
    p2: f64,
) -> Result<(f64, f64), Error> {
    let p1 = match target {
        TwoSampleTarget::Difference => theta + p2,
        TwoSampleTarget::OddsRatio => theta * p2 / (1.0 + (theta - 1.0) * p2),
    };
    let mut coverage = 0.0;
    let mut el = 0.0;
    for x in 0..=n1 {
        for y in 0..=n2 {
            let weight = binom_pmf(x, n1, p1)? * binom_pmf(y, n2, p2)?;
            let mut entries: Vec<(f64, f64)> = Vec::with_capacity(((n1 + 1) * (n2 + 1)) as usize);
            for u in 0..=n1 {
                for v in 0..=n2 {
                    let prob = binom_pmf(u, n1, x as f64 / n1 as f64)?
                        * binom_pmf(v, n2, y as f64 / n2 as f64)?;
                    let value = match target {
                        TwoSampleTarget::Difference => {
                            u as f64 / n1 as f64 - v as f64 / n2 as f64
                        }
                        TwoSampleTarget::OddsRatio => gart(u, v, n1, n2),
                    };
                    entries.push((value, prob));
                }
            }
            let dist = DiscreteDist::from_reals(entries)?;
            let (c, w) = exhaustive_interval(&dist, plan, theta)?;
            coverage += weight * c;
            el += weight * w;
        }
    }
    Ok((coverage, el))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(reps: u64, seed: u64) -> McConfig {
        McConfig::new(reps, seed).unwrap()
    }

    #[test]
    fn degenerate_proportion_is_exact() {
        let plan = BootstrapPlan::new(10, 0.2).unwrap();
        let est = simulate_binom_one(4, Center::Wald, &plan, 0.0, &cfg(200, 7)).unwrap();
        assert_eq!(est.coverage, 1.0);
        assert_eq!(est.el, 0.0);
    }

    #[test]
    fn identical_configs_are_bit_identical() {
        let plan = BootstrapPlan::new(20, 0.2).unwrap();
        let a = simulate_normal_known(5, 1.0, Estimator::Mean, &plan, 0.3, &cfg(500, 42));
        let b = simulate_normal_known(5, 1.0, Estimator::Mean, &plan, 0.3, &cfg(500, 42));
        assert_eq!(a, b);
        let c = simulate_normal_known(5, 1.0, Estimator::Mean, &plan, 0.3, &cfg(500, 43));
        assert_ne!(a.coverage.to_bits(), c.coverage.to_bits());
    }

    #[test]
    fn stream_chunking_keeps_counts() {
        let plan = BootstrapPlan::new(10, 0.2).unwrap();
        let base = cfg(501, 9).with_streams(4);
        let est = simulate_binom_one(3, Center::Wald, &plan, 0.4, &base).unwrap();
        assert_eq!(est.reps, 501);
        assert!(est.coverage_se > 0.0);
    }

    #[test]
    fn exhaustive_point_mass_covers_itself() {
        let plan = BootstrapPlan::new(4, 0.5).unwrap();
        let d = DiscreteDist::point_mass(2.0);
        let (c, w) = exhaustive_interval(&d, &plan, 2.0).unwrap();
        assert_eq!((c, w), (1.0, 0.0));
    }

    #[test]
    fn exhaustive_cap_is_enforced() {
        let plan = BootstrapPlan::new(40, 0.2).unwrap();
        let d = DiscreteDist::from_reals((0..10).map(|i| (i as f64, 0.1)).collect()).unwrap();
        assert!(matches!(
            exhaustive_interval(&d, &plan, 1.0),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn exhaustive_matches_simulation() {
        // Same tiny design through both oracle routes.
        let plan = BootstrapPlan::new(2, 0.5).unwrap();
        let (c_ex, w_ex) = exhaustive_binom_one(2, Center::Wald, &plan, 0.5).unwrap();
        let est = simulate_binom_one(2, Center::Wald, &plan, 0.5, &cfg(40_000, 11)).unwrap();
        assert!((c_ex - est.coverage).abs() < 3.0 * est.coverage_se);
        assert!((w_ex - est.el).abs() < 3.0 * est.el_se.max(1e-12));
    }

    #[test]
    fn normal_draw_moments() {
        let mut rng = rep_rng(123, 0);
        let n = 200_000;
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        for _ in 0..n {
            let z = draw_std_normal(&mut rng);
            sum += z;
            sum2 += z * z;
        }
        let mean = sum / n as f64;
        let var = sum2 / n as f64 - mean * mean;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn laplace_draw_moments() {
        let mut rng = rep_rng(99, 1);
        let fam = SampleFamily::Laplace {
            mu: 2.0,
            scale: 1.0,
        };
        let n = 200_000;
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        for _ in 0..n {
            let z = fam.draw(&mut rng);
            sum += z;
            sum2 += z * z;
        }
        let mean = sum / n as f64;
        let var = sum2 / n as f64 - mean * mean;
        assert!((mean - 2.0).abs() < 0.02, "mean {mean}");
        // Laplace variance is 2b².
        assert!((var - 2.0).abs() < 0.05, "var {var}");
    }

    #[test]
    fn binomial_sampler_mean() {
        let s = BinomialSampler::new(30, 0.3);
        let mut rng = rep_rng(5, 0);
        let n = 100_000;
        let mut sum = 0u64;
        for _ in 0..n {
            sum += s.draw(&mut rng);
        }
        let mean = sum as f64 / n as f64;
        assert!((mean - 9.0).abs() < 0.1, "mean {mean}");
    }
}
