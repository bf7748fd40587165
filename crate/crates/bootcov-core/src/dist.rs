//! Finite discrete distributions with sorted support.
//!
//! Supports built from exact rational keys (one-sample proportions,
//! two-sample differences and odds ratios) merge coincident outcomes by
//! key equality before cumulating, so float rounding can never split or
//! misorder an atom. Supports built from measured reals (bootstrap means
//! of a continuous sample) merge within a small tolerance instead.

use alloc::vec::Vec;

use crate::{rational_to_f64, Error, Rational};

/// Relative snap tolerance for float CDF queries and real-key merges.
pub const VALUE_SNAP: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct DiscreteDist {
    values: Vec<f64>,
    masses: Vec<f64>,
    cum: Vec<f64>,
    keys: Option<Vec<Rational>>,
}

impl DiscreteDist {
    /// Build from `(key, mass)` pairs; duplicate keys are merged with
    /// masses summed, then the cumulative table is formed.
    pub fn from_rational(mut entries: Vec<(Rational, f64)>) -> Result<Self, Error> {
        if entries.is_empty() {
            return Err(Error::EmptySupport);
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut keys: Vec<Rational> = Vec::with_capacity(entries.len());
        let mut masses: Vec<f64> = Vec::with_capacity(entries.len());
        for (k, w) in entries {
            if keys.last() == Some(&k) {
                *masses.last_mut().unwrap() += w;
            } else {
                keys.push(k);
                masses.push(w);
            }
        }
        // Zero-mass outcomes (degenerate p in {0,1}) are not support points.
        let mut idx = 0;
        keys.retain(|_| {
            let keep = masses[idx] > 0.0;
            idx += 1;
            keep
        });
        masses.retain(|&w| w > 0.0);
        if keys.is_empty() {
            return Err(Error::EmptySupport);
        }
        let values = keys
            .iter()
            .map(rational_to_f64)
            .collect();
        let cum = cumulate(&masses);
        Ok(DiscreteDist {
            values,
            masses,
            cum,
            keys: Some(keys),
        })
    }

    /// Build from real-valued `(value, mass)` pairs, merging values that
    /// agree within `VALUE_SNAP` relative tolerance.
    pub fn from_reals(mut entries: Vec<(f64, f64)>) -> Result<Self, Error> {
        if entries.is_empty() {
            return Err(Error::EmptySupport);
        }
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut masses: Vec<f64> = Vec::with_capacity(entries.len());
        for (v, w) in entries {
            if w <= 0.0 {
                continue;
            }
            match values.last() {
                Some(&last) if (v - last).abs() <= VALUE_SNAP * v.abs().max(1.0) => {
                    *masses.last_mut().unwrap() += w;
                }
                _ => {
                    values.push(v);
                    masses.push(w);
                }
            }
        }
        if values.is_empty() {
            return Err(Error::EmptySupport);
        }
        let cum = cumulate(&masses);
        Ok(DiscreteDist {
            values,
            masses,
            cum,
            keys: None,
        })
    }

    /// Point mass at a single value.
    pub fn point_mass(value: f64) -> Self {
        DiscreteDist {
            values: alloc::vec![value],
            masses: alloc::vec![1.0],
            cum: alloc::vec![1.0],
            keys: None,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Cumulative mass up to and including support point `s`.
    pub fn cum(&self) -> &[f64] {
        &self.cum
    }

    pub fn keys(&self) -> Option<&[Rational]> {
        self.keys.as_deref()
    }

    pub fn total_mass(&self) -> f64 {
        *self.cum.last().unwrap_or(&0.0)
    }

    /// `(H(x^-), H(x))`: mass strictly below `x` and mass up to `x`, with
    /// support points within snap distance of `x` treated as atoms at `x`.
    pub fn cdf_pair(&self, x: f64) -> (f64, f64) {
        let tol = VALUE_SNAP * x.abs().max(1.0);
        let below = self.values.partition_point(|&v| v < x - tol);
        let upto = self.values.partition_point(|&v| v <= x + tol);
        (self.cum_before(below), self.cum_before(upto))
    }

    /// Exact-key variant of [`Self::cdf_pair`]; requires rational keys.
    pub fn cdf_pair_exact(&self, x: &Rational) -> (f64, f64) {
        let keys = self
            .keys
            .as_ref()
            .expect("exact query requires rational keys");
        let below = keys.partition_point(|k| k < x);
        let upto = keys.partition_point(|k| k <= x);
        (self.cum_before(below), self.cum_before(upto))
    }

    fn cum_before(&self, idx: usize) -> f64 {
        if idx == 0 {
            0.0
        } else {
            self.cum[idx - 1]
        }
    }
}

fn cumulate(masses: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    masses
        .iter()
        .map(|&w| {
            acc += w;
            acc.min(1.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rational_build_merges_equal_keys() {
        // 1/2 arrives twice under different representations.
        let d = DiscreteDist::from_rational(alloc::vec![
            (ratio(2, 4), 0.25),
            (ratio(1, 2), 0.25),
            (ratio(0, 1), 0.25),
            (ratio(1, 1), 0.25),
        ])
        .unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.values(), &[0.0, 0.5, 1.0]);
        assert_eq!(d.masses(), &[0.25, 0.5, 0.25]);
        assert!((d.total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cdf_pair_splits_atom() {
        let d = DiscreteDist::from_rational(alloc::vec![
            (ratio(0, 1), 0.25),
            (ratio(1, 2), 0.5),
            (ratio(1, 1), 0.25),
        ])
        .unwrap();
        let (left, at) = d.cdf_pair(0.5);
        assert_eq!((left, at), (0.25, 0.75));
        let (left, at) = d.cdf_pair(0.7);
        assert_eq!((left, at), (0.75, 0.75));
        let (left, at) = d.cdf_pair(-1.0);
        assert_eq!((left, at), (0.0, 0.0));
        let (left, at) = d.cdf_pair(2.0);
        assert_eq!((left, at), (1.0, 1.0));
        let (left, at) = d.cdf_pair_exact(&ratio(1, 2));
        assert_eq!((left, at), (0.25, 0.75));
        let (left, at) = d.cdf_pair_exact(&ratio(2, 3));
        assert_eq!((left, at), (0.75, 0.75));
    }

    #[test]
    fn real_build_merges_within_snap() {
        let d = DiscreteDist::from_reals(alloc::vec![
            (1.0, 0.3),
            (1.0 + 1e-14, 0.2),
            (2.0, 0.5),
        ])
        .unwrap();
        assert_eq!(d.len(), 2);
        assert!((d.masses()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn empty_support_rejected() {
        assert_eq!(
            DiscreteDist::from_reals(alloc::vec![]).unwrap_err(),
            Error::EmptySupport
        );
    }
}
