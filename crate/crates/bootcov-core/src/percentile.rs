//! The generic bootstrap-percentile calculus: interval indices, the order
//! statistic CDF, the coverage bracket and order-statistic expectations.
//!
//! For `m` i.i.d. bootstrap estimates with conditional CDF `H`, the j-th
//! order statistic has CDF `1 - F_B(j-1, m, H(x))`, so the percentile
//! interval `[u_(m_l), u_(m_u)]` covers a target `t` with conditional
//! probability `F_B(m_u-1, m, H(t^-)) - F_B(m_l-1, m, H(t))`. Everything
//! downstream is a weighted aggregation of that bracket.

use crate::binomial::{binom_cdf, lattice, Lattice};
use crate::dist::DiscreteDist;
use crate::{Error, Rational};

/// Replication count, nominal level and the two order-statistic indices.
///
/// `m_l = floor(m*alpha/2) + 1` is the index of the largest
/// `100(alpha/2)`-th percentile; `m_u = m + 1 - m_l` is the index of the
/// smallest `100(1-alpha/2)`-th percentile. Construction rejects any
/// `(m, alpha)` with `m_l >= m_u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapPlan {
    m: u64,
    alpha: f64,
    m_l: u64,
    m_u: u64,
}

impl BootstrapPlan {
    pub fn new(m: u64, alpha: f64) -> Result<Self, Error> {
        if m < 1 {
            return Err(Error::Domain {
                what: "bootstrap plan requires m >= 1",
            });
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain {
                what: "bootstrap plan requires alpha in (0,1)",
            });
        }
        let m_l = floor_snapped(m as f64 * alpha / 2.0).max(0) as u64 + 1;
        let m_u = m + 1 - m_l;
        if m_l >= m_u {
            return Err(Error::DegeneratePlan { m, alpha, m_l, m_u });
        }
        Ok(BootstrapPlan { m, alpha, m_l, m_u })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn m_l(&self) -> u64 {
        self.m_l
    }

    pub fn m_u(&self) -> u64 {
        self.m_u
    }
}

/// Floor with the lattice snap, so nominal inputs like `100 * 0.1 / 2`
/// land on the intended integer despite decimal-to-binary rounding.
fn floor_snapped(x: f64) -> i64 {
    match lattice(x) {
        Lattice::On(k) => k,
        Lattice::Between(f) => f,
    }
}

/// Which order statistic realizes a `100p`-th percentile when `mp` is an
/// integer and the percentile is non-unique.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The largest `100p`-th percentile, `u_(mp+1)`.
    Lower,
    /// The smallest `100p`-th percentile, `u_(mp)`.
    Upper,
}

/// Index `j` such that `u_(j)` is the chosen `100p`-th percentile of `m`
/// values. Percentiles are always order statistics, never midpoint
/// averages. The result is clamped to `[1, m]`.
pub fn percentile_index(m: u64, p: f64, side: Side) -> u64 {
    let t = m as f64 * p;
    let j = match lattice(t) {
        Lattice::On(k) => match side {
            Side::Lower => k + 1,
            Side::Upper => k,
        },
        Lattice::Between(f) => f + 1,
    };
    (j.max(1) as u64).min(m)
}

/// CDF of the j-th order statistic of `m` i.i.d. draws whose common CDF
/// evaluates to `h` at the query point: `1 - F_B(j-1, m, h)`.
pub fn order_stat_cdf(j: u64, m: u64, h: f64) -> Result<f64, Error> {
    if j < 1 || j > m {
        return Err(Error::Domain {
            what: "order statistic index must satisfy 1 <= j <= m",
        });
    }
    Ok(1.0 - binom_cdf(j as i64 - 1, m, h)?)
}

/// The conditional coverage bracket from raw plan parts:
/// `F_B(m_u-1, m, h_left) - F_B(m_l-1, m, h_at)`, clamped at zero. The
/// `h` arguments are clamped into `[0,1]` to absorb cumulation rounding.
pub fn bracket_parts(m: u64, m_l: u64, m_u: u64, h_left: f64, h_at: f64) -> Result<f64, Error> {
    let upper = binom_cdf(m_u as i64 - 1, m, h_left.clamp(0.0, 1.0))?;
    let lower = binom_cdf(m_l as i64 - 1, m, h_at.clamp(0.0, 1.0))?;
    Ok((upper - lower).max(0.0))
}

/// Conditional probability that `[u_(m_l), u_(m_u)]` covers `theta` when
/// the bootstrap estimates are i.i.d. from `dist`.
pub fn coverage_bracket(dist: &DiscreteDist, theta: f64, plan: &BootstrapPlan) -> f64 {
    let (h_left, h_at) = dist.cdf_pair(theta);
    bracket_parts(plan.m, plan.m_l, plan.m_u, h_left, h_at).expect("h values are probabilities")
}

/// Exact-key variant of [`coverage_bracket`].
pub fn coverage_bracket_exact(dist: &DiscreteDist, theta: &Rational, plan: &BootstrapPlan) -> f64 {
    let (h_left, h_at) = dist.cdf_pair_exact(theta);
    bracket_parts(plan.m, plan.m_l, plan.m_u, h_left, h_at).expect("h values are probabilities")
}

/// `E[u_(j)]` for the j-th order statistic of `m` draws from `dist`:
/// `d_1 + Σ_s (d_{s+1} - d_s) F_B(j-1, m, H(d_s))`.
pub fn order_stat_expect(dist: &DiscreteDist, j: u64, m: u64) -> Result<f64, Error> {
    if dist.is_empty() {
        return Err(Error::EmptySupport);
    }
    if j < 1 || j > m {
        return Err(Error::Domain {
            what: "order statistic index must satisfy 1 <= j <= m",
        });
    }
    let values = dist.values();
    let cum = dist.cum();
    let mut acc = values[0];
    for s in 0..values.len() - 1 {
        acc += (values[s + 1] - values[s]) * binom_cdf(j as i64 - 1, m, cum[s].min(1.0))?;
    }
    Ok(acc)
}

/// `E[u_(m_u) - u_(m_l)]`: the expected interval width under `dist`.
pub fn expected_width(dist: &DiscreteDist, plan: &BootstrapPlan) -> Result<f64, Error> {
    if dist.is_empty() {
        return Err(Error::EmptySupport);
    }
    let values = dist.values();
    let cum = dist.cum();
    let mut acc = 0.0;
    for s in 0..values.len() - 1 {
        let h = cum[s].min(1.0);
        let upper = binom_cdf(plan.m_u as i64 - 1, plan.m, h)?;
        let lower = binom_cdf(plan.m_l as i64 - 1, plan.m, h)?;
        acc += (values[s + 1] - values[s]) * (upper - lower);
    }
    Ok(acc.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_examples() {
        let p = BootstrapPlan::new(100, 0.1).unwrap();
        assert_eq!((p.m_l(), p.m_u()), (6, 95));
        let p = BootstrapPlan::new(50, 0.1).unwrap();
        assert_eq!((p.m_l(), p.m_u()), (3, 48));
        let p = BootstrapPlan::new(5000, 0.05).unwrap();
        assert_eq!((p.m_l(), p.m_u()), (126, 4875));
    }

    #[test]
    fn plan_rejects_degenerate() {
        // m = 1 always collapses.
        assert!(matches!(
            BootstrapPlan::new(1, 0.5),
            Err(Error::DegeneratePlan { .. })
        ));
        // Odd m with alpha near 1 collapses onto the median.
        assert!(BootstrapPlan::new(3, 0.9).is_err());
        assert!(BootstrapPlan::new(10, 0.0).is_err());
        assert!(BootstrapPlan::new(10, 1.0).is_err());
    }

    #[test]
    fn percentile_index_examples() {
        assert_eq!(percentile_index(6, 0.5, Side::Lower), 4);
        assert_eq!(percentile_index(6, 0.5, Side::Upper), 3);
        assert_eq!(percentile_index(5, 0.5, Side::Lower), 3);
        assert_eq!(percentile_index(5, 0.5, Side::Upper), 3);
        assert_eq!(percentile_index(10, 0.42, Side::Lower), 5);
        assert_eq!(percentile_index(10, 0.42, Side::Upper), 5);
    }

    #[test]
    fn plan_indices_are_percentile_indices() {
        for &(m, alpha) in &[(100u64, 0.1f64), (50, 0.1), (5000, 0.05), (37, 0.23)] {
            let plan = BootstrapPlan::new(m, alpha).unwrap();
            assert_eq!(plan.m_l(), percentile_index(m, alpha / 2.0, Side::Lower));
            assert_eq!(
                plan.m_u(),
                percentile_index(m, 1.0 - alpha / 2.0, Side::Upper)
            );
        }
    }

    #[test]
    fn order_stat_cdf_edges() {
        assert_eq!(order_stat_cdf(3, 7, 0.0).unwrap(), 0.0);
        assert_eq!(order_stat_cdf(3, 7, 1.0).unwrap(), 1.0);
        assert!((order_stat_cdf(1, 2, 0.5).unwrap() - 0.75).abs() < 1e-15);
        assert!(order_stat_cdf(0, 7, 0.5).is_err());
        assert!(order_stat_cdf(8, 7, 0.5).is_err());
    }

    #[test]
    fn order_stat_cdf_nonincreasing_in_j() {
        for h in [0.1, 0.5, 0.9] {
            let mut prev = 1.0;
            for j in 1..=12 {
                let c = order_stat_cdf(j, 12, h).unwrap();
                assert!(c <= prev + 1e-15);
                prev = c;
            }
        }
    }

    fn bin2_half() -> DiscreteDist {
        // Bino(2, 0.5)/2: support {0, 1/2, 1}, masses {1/4, 1/2, 1/4}.
        DiscreteDist::from_rational(alloc::vec![
            (Rational::new(0, 1), 0.25),
            (Rational::new(1, 2), 0.5),
            (Rational::new(1, 1), 0.25),
        ])
        .unwrap()
    }

    #[test]
    fn bracket_point_mass_and_disjoint() {
        let plan = BootstrapPlan::new(4, 0.5).unwrap();
        let point = DiscreteDist::point_mass(3.0);
        assert_eq!(coverage_bracket(&point, 3.0, &plan), 1.0);
        // Entire support above theta.
        assert_eq!(coverage_bracket(&point, 2.0, &plan), 0.0);
    }

    #[test]
    fn bracket_binomial_example() {
        // Degenerate m = 1 "plan" exercised through the raw parts:
        // F_B(0,1,0.25) - F_B(0,1,0.75) = 0.75 - 0.25.
        let d = bin2_half();
        let (h_left, h_at) = d.cdf_pair(0.5);
        let b = bracket_parts(1, 1, 1, h_left, h_at).unwrap();
        assert!((b - 0.5).abs() < 1e-15);
    }

    #[test]
    fn order_stat_expect_small_cases() {
        let point = DiscreteDist::point_mass(2.5);
        for (j, m) in [(1u64, 1u64), (2, 3), (5, 5)] {
            assert_eq!(order_stat_expect(&point, j, m).unwrap(), 2.5);
        }
        let coin = DiscreteDist::from_rational(alloc::vec![
            (Rational::new(0, 1), 0.5),
            (Rational::new(1, 1), 0.5),
        ])
        .unwrap();
        assert!((order_stat_expect(&coin, 1, 1).unwrap() - 0.5).abs() < 1e-15);
        // Enumeration of 4 equiprobable pairs: E[min] = 1/4, E[max] = 3/4.
        assert!((order_stat_expect(&coin, 1, 2).unwrap() - 0.25).abs() < 1e-15);
        assert!((order_stat_expect(&coin, 2, 2).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn expected_width_small_cases() {
        let plan = BootstrapPlan::new(2, 0.5).unwrap();
        assert_eq!((plan.m_l(), plan.m_u()), (1, 2));
        let point = DiscreteDist::point_mass(7.0);
        assert_eq!(expected_width(&point, &plan).unwrap(), 0.0);
        let coin = DiscreteDist::from_rational(alloc::vec![
            (Rational::new(0, 1), 0.5),
            (Rational::new(1, 1), 0.5),
        ])
        .unwrap();
        assert!((expected_width(&coin, &plan).unwrap() - 0.5).abs() < 1e-15);
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn arb_dist() -> impl Strategy<Value = DiscreteDist> {
        proptest::collection::vec(((-50i128..50, 1i128..20), 0.01f64..1.0), 1..6).prop_map(
            |entries| {
                let total: f64 = entries.iter().map(|e| e.1).sum();
                let pairs = entries
                    .into_iter()
                    .map(|((n, d), w)| (Rational::new(n, d), w / total))
                    .collect();
                DiscreteDist::from_rational(pairs).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn bracket_is_a_probability(dist in arb_dist(), theta in -5.0f64..5.0,
                                    m in 2u64..30, alpha in 0.05f64..0.8) {
            if let Ok(plan) = BootstrapPlan::new(m, alpha) {
                let b = coverage_bracket(&dist, theta, &plan);
                prop_assert!((0.0..=1.0).contains(&b));
            }
        }

        #[test]
        fn width_nonnegative_and_bounded_by_range(dist in arb_dist(), m in 2u64..30,
                                                  alpha in 0.05f64..0.8) {
            if let Ok(plan) = BootstrapPlan::new(m, alpha) {
                let w = expected_width(&dist, &plan).unwrap();
                let range = dist.values().last().unwrap() - dist.values()[0];
                prop_assert!(w >= 0.0);
                prop_assert!(w <= range + 1e-12);
            }
        }
    }
}
