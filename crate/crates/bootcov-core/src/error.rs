use alloc::vec::Vec;
use core::fmt;

/// Errors surfaced by the evaluation routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument left its mathematical domain.
    Domain {
        what: &'static str,
    },
    /// `(m, alpha)` gives `m_l >= m_u`, so the two-sided interval collapses.
    DegeneratePlan {
        m: u64,
        alpha: f64,
        m_l: u64,
        m_u: u64,
    },
    /// A discrete distribution with no support points.
    EmptySupport,
    /// Quadrature failed to reach the requested tolerance; the best
    /// estimate and its error bound are reported, never silently used.
    QuadratureNonConvergence {
        estimate: f64,
        abs_err: f64,
    },
    /// The design is outside what the implemented formulas cover.
    UnsupportedDesign {
        what: &'static str,
    },
    /// Exact enumeration was requested beyond the composition cap.
    EnumerationCap {
        n: u32,
        cap: u32,
    },
    /// An interval table is missing rows for the listed outcomes.
    IncompleteTable {
        missing: Vec<u32>,
    },
    /// Brute-force enumeration would exceed the outcome-count cap.
    SizeCap {
        outcomes: u128,
        cap: u128,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what } => write!(f, "domain error: {what}"),
            Error::DegeneratePlan { m, alpha, m_l, m_u } => write!(
                f,
                "degenerate plan: (m, alpha) = ({m}, {alpha}) gives m_l = {m_l} >= m_u = {m_u}; \
                 need floor(m*alpha/2) + 1 < m + 1 - (floor(m*alpha/2) + 1)"
            ),
            Error::EmptySupport => write!(f, "discrete distribution has empty support"),
            Error::QuadratureNonConvergence { estimate, abs_err } => write!(
                f,
                "quadrature did not converge: estimate {estimate} with error bound {abs_err}"
            ),
            Error::UnsupportedDesign { what } => write!(f, "unsupported design: {what}"),
            Error::EnumerationCap { n, cap } => write!(
                f,
                "n = {n} exceeds the exact enumeration cap {cap}; use the Monte Carlo path"
            ),
            Error::IncompleteTable { missing } => {
                write!(f, "interval table is missing rows for y in {missing:?}")
            }
            Error::SizeCap { outcomes, cap } => write!(
                f,
                "exhaustive enumeration of {outcomes} outcomes exceeds the cap {cap}"
            ),
        }
    }
}

impl core::error::Error for Error {}
