//! Exact evaluation of parametric and percentile bootstrap confidence
//! intervals at fixed sample size.
//!
//! Given a design (one- or two-sample binomial, normal mean with known or
//! unknown variance, or a nonparametric resampling scheme) and a bootstrap
//! plan `(m, alpha)`, this crate computes the coverage probability and
//! expected length of the percentile interval `[u_(m_l), u_(m_u)]` either
//! in closed form, by adaptive quadrature, or by seeded Monte Carlo when
//! no finite formula exists. A full-pipeline simulator and a brute-force
//! enumerator serve as independent oracles for every exact formula.
//!
//! The crate is `no_std` (with `alloc`); IO, CSV output and the command
//! line live in the companion `bootcov` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod binom_one;
pub mod binom_two;
pub mod binomial;
pub mod dist;
pub mod mc;
pub mod nonparam;
pub mod normal;
pub mod percentile;
pub mod quad;
pub mod special;

mod error;

pub use error::Error;

/// Exact rational used for support keys and plan constants.
///
/// Numerators and denominators stay far below `i128::MAX` for every design
/// this crate accepts (the widest products are the odds-ratio keys
/// `(2u+1)(2(n2-v)+1)`, at most ~4e6 for n up to 1000), so comparisons by
/// cross multiplication cannot overflow.
pub type Rational = num_rational::Ratio<i128>;

/// Materialize a rational key as f64. Every key this crate constructs
/// has numerator and denominator well inside 2^53, so the conversion is
/// a single correctly-rounded division.
pub fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// How a returned value was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Finite closed-form arithmetic; error at f64 rounding level.
    Exact,
    /// Adaptive quadrature; carries the estimated absolute error.
    Quadrature { abs_err: f64 },
    /// Seeded Monte Carlo; carries replication count, seed and standard error.
    MonteCarlo { reps: u64, seed: u64, se: f64 },
}

/// A computed scalar together with how it was computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub method: Method,
}

impl EvalResult {
    pub fn exact(value: f64) -> Self {
        EvalResult {
            value,
            method: Method::Exact,
        }
    }

    /// Standard error when the value is a Monte Carlo estimate, else `None`.
    pub fn se(&self) -> Option<f64> {
        match self.method {
            Method::MonteCarlo { se, .. } => Some(se),
            _ => None,
        }
    }
}
