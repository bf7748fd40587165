//! Binomial PMF and CDF, including the left-limit CDF `F_B(x^-, n, p)`
//! needed by the percentile coverage bracket.
//!
//! Below `n = 1000` the CDF is a Kahan-compensated sum of log-space PMF
//! terms, accumulated from the query point toward the nearer tail so the
//! term count stays `O(√(np(1-p)))`. Above that it switches to the
//! regularized incomplete beta identity `F_B(k,n,p) = I_{1-p}(n-k, k+1)`.

use crate::special::beta_cdf;
use crate::Error;

/// Switch point between direct summation and the incomplete-beta identity.
pub const BETA_SWITCH: u64 = 1000;

/// Snap tolerance for deciding whether a real argument sits on an integer
/// lattice point (relative to `max(1, |x|)`).
pub const LATTICE_SNAP: f64 = 1e-12;

fn check_prob(p: f64) -> Result<(), Error> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain {
            what: "probability must lie in [0,1]",
        });
    }
    Ok(())
}

/// `ln C(n, k)`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    libm::lgamma((n + 1) as f64) - libm::lgamma((k + 1) as f64) - libm::lgamma((n - k + 1) as f64)
}

/// Binomial PMF `C(n,k) p^k (1-p)^(n-k)`, computed in log space.
pub fn binom_pmf(k: u64, n: u64, p: f64) -> Result<f64, Error> {
    check_prob(p)?;
    if k > n {
        return Err(Error::Domain {
            what: "binomial pmf requires 0 <= k <= n",
        });
    }
    Ok(pmf_unchecked(k, n, p))
}

fn pmf_unchecked(k: u64, n: u64, p: f64) -> f64 {
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let ln = ln_choose(n, k) + k as f64 * libm::log(p) + (n - k) as f64 * libm::log1p(-p);
    libm::exp(ln)
}

/// Binomial CDF `P(Bino(n,p) <= k)`; `k` may be any integer and is clamped
/// to the support.
pub fn binom_cdf(k: i64, n: u64, p: f64) -> Result<f64, Error> {
    check_prob(p)?;
    if k < 0 {
        return Ok(0.0);
    }
    let k = k as u64;
    if k >= n {
        return Ok(1.0);
    }
    if p == 0.0 {
        return Ok(1.0);
    }
    if p == 1.0 {
        return Ok(0.0);
    }
    if n > BETA_SWITCH {
        return beta_cdf(1.0 - p, (n - k) as f64, (k + 1) as f64);
    }
    Ok(direct_cdf(k, n, p))
}

/// Kahan-compensated summation toward the nearer tail. Terms on each side
/// of the mode are monotone, so truncating once a term falls below
/// `2^-60` of the accumulated sum is safe.
fn direct_cdf(k: u64, n: u64, p: f64) -> f64 {
    let q = 1.0 - p;
    let mode = libm::floor((n + 1) as f64 * p) as u64;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let add = |term: f64, sum: &mut f64, comp: &mut f64| {
        let y = term - *comp;
        let t = *sum + y;
        *comp = (t - *sum) - y;
        *sum = t;
    };
    const CUTOFF: f64 = 8.7e-19; // 2^-60

    if k < mode {
        // Sum pmf(k), pmf(k-1), ... downward; terms decrease.
        let mut term = pmf_unchecked(k, n, p);
        let mut j = k;
        loop {
            add(term, &mut sum, &mut comp);
            if j == 0 || term <= CUTOFF * sum {
                break;
            }
            term *= (j as f64 * q) / ((n - j + 1) as f64 * p);
            j -= 1;
        }
        sum.clamp(0.0, 1.0)
    } else {
        // Complement: sum pmf(k+1), pmf(k+2), ... upward; terms decrease.
        let mut term = pmf_unchecked(k + 1, n, p);
        let mut j = k + 1;
        loop {
            add(term, &mut sum, &mut comp);
            if j == n || term <= CUTOFF * sum {
                break;
            }
            term *= ((n - j) as f64 * p) / ((j + 1) as f64 * q);
            j += 1;
        }
        (1.0 - sum).clamp(0.0, 1.0)
    }
}

/// Where a real number sits relative to the integer lattice, with the
/// [`LATTICE_SNAP`] tolerance absorbing float noise in arguments like
/// `n*p` or `(p-b1)/a1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lattice {
    /// Within snap distance of the integer carried.
    On(i64),
    /// Strictly between integers; carries the floor.
    Between(i64),
}

pub fn lattice(x: f64) -> Lattice {
    let r = libm::round(x);
    if (x - r).abs() <= LATTICE_SNAP * x.abs().max(1.0) {
        Lattice::On(r as i64)
    } else {
        Lattice::Between(libm::floor(x) as i64)
    }
}

/// `F_B(x, n, p)` at a real argument: the CDF evaluated at `floor(x)`.
pub fn binom_cdf_real(x: f64, n: u64, p: f64) -> Result<f64, Error> {
    let k = match lattice(x) {
        Lattice::On(k) => k,
        Lattice::Between(f) => f,
    };
    binom_cdf(k, n, p)
}

/// `F_B(x^-, n, p)`: mass strictly below `x`. Drops the atom at `x` when
/// `x` is an attained integer, otherwise equals the CDF at `floor(x)`.
pub fn binom_cdf_left(x: f64, n: u64, p: f64) -> Result<f64, Error> {
    let k = match lattice(x) {
        Lattice::On(k) => k - 1,
        Lattice::Between(f) => f,
    };
    binom_cdf(k, n, p)
}
