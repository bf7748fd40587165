//! Adaptive Gauss-Kronrod quadrature.
//!
//! Integrands built from `normal_quantile(z)` on (0,1) diverge at the
//! endpoints; [`Domain::UnitNormalSub`] applies the substitution
//! `z = Φ(t)` so the integrand becomes `f(Φ(t))·φ(t)` on the real line,
//! truncated at the spec's tail cutoff (8.5 standard units leaves less
//! than 1e-16 of mass outside).

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use crate::special::{std_normal_cdf, std_normal_pdf};
use crate::Error;

/// Tolerances and budget for one integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Truncation point, in standard-normal units, for unbounded
    /// transformed domains.
    pub tail_cutoff: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            max_subdivisions: 2000,
            tail_cutoff: 8.5,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Domain {
                what: "quadrature tolerances must be positive",
            });
        }
        if self.tail_cutoff < 6.0 {
            return Err(Error::Domain {
                what: "tail cutoff must be at least 6 standard units",
            });
        }
        Ok(())
    }
}

/// Integration domain.
#[derive(Debug, Clone, Copy)]
pub enum Domain {
    /// A finite interval `[a, b]`.
    Interval(f64, f64),
    /// `(0,1)` via `z = Φ(t)`, for quantile-singular integrands.
    UnitNormalSub,
    /// The real line truncated at `[-cutoff, cutoff]`.
    TruncatedReal,
}

/// Outcome of one integration: estimate, error bound and whether the
/// tolerance was met within the subdivision budget.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub abs_err: f64,
    pub converged: bool,
    pub subdivisions: usize,
}

impl Quadrature {
    /// The estimate if converged, otherwise a non-convergence error that
    /// still carries the estimate; never a silent wrong value.
    pub fn into_value(self) -> Result<f64, Error> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::QuadratureNonConvergence {
                estimate: self.value,
                abs_err: self.abs_err,
            })
        }
    }
}

/// Integrate `f` over `domain`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, domain: Domain, spec: &QuadratureSpec) -> Quadrature {
    match domain {
        Domain::Interval(a, b) => adaptive(&f, &[a, b], spec),
        Domain::UnitNormalSub => {
            let c = spec.tail_cutoff;
            // Φ(t) rounds to exactly 1.0 well inside the truncation range;
            // clamp into the open interval so quantile-based integrands
            // stay defined (the weight φ(t) has already vanished there).
            let top = 1.0 - f64::EPSILON / 2.0;
            let g = |t: f64| {
                f(std_normal_cdf(t).clamp(f64::MIN_POSITIVE, top)) * std_normal_pdf(t)
            };
            // Seed with a few panels so the initial error estimate sees the
            // central mass as well as both tails.
            adaptive(&g, &[-c, -2.0, 0.0, 2.0, c], spec)
        }
        Domain::TruncatedReal => {
            let c = spec.tail_cutoff;
            adaptive(&f, &[-c, -2.0, 0.0, 2.0, c], spec)
        }
    }
}

/// Integrate over `[a, b]` split at the supplied interior breakpoints
/// (callers pass the known discontinuity locations of the integrand).
pub fn integrate_piecewise<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    interior: &[f64],
    spec: &QuadratureSpec,
) -> Quadrature {
    let mut pts = alloc::vec![a];
    for &x in interior {
        if x > a && x < b {
            pts.push(x);
        }
    }
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|u, v| (*u - *v).abs() <= 1e-15 * u.abs().max(1.0));
    adaptive(&f, &pts, spec)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, panels: &[f64], spec: &QuadratureSpec) -> Quadrature {
    let mut heap: BinaryHeap<Segment> = BinaryHeap::new();
    let mut value = 0.0;
    let mut err = 0.0;
    for w in panels.windows(2) {
        let (v, e) = gk15(f, w[0], w[1]);
        value += v;
        err += e;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value: v,
            err: e,
        });
    }
    let mut splits = 0usize;
    while err > spec.abs_tol.max(spec.rel_tol * value.abs()) {
        if splits >= spec.max_subdivisions {
            return Quadrature {
                value,
                abs_err: err,
                converged: false,
                subdivisions: splits,
            };
        }
        let worst = heap.pop().expect("heap never empty while err > 0");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval no longer splittable in f64; accept what we have.
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        value += v1 + v2 - worst.value;
        err += e1 + e2 - worst.err;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
        });
        splits += 1;
    }
    Quadrature {
        value,
        abs_err: err,
        converged: true,
        subdivisions: splits,
    }
}

// 15-point Kronrod extension of the 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);

    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv = [0.0f64; 14];

    for j in 0..3 {
        let idx = 2 * j + 1; // Gauss nodes sit at odd Kronrod indices
        let x = half * XGK[idx];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[idx] = f1;
        fv[7 + idx] = f2;
        res_g += WG[j] * (f1 + f2);
        res_k += WGK[idx] * (f1 + f2);
        res_abs += WGK[idx] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let idx = 2 * j;
        let x = half * XGK[idx];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[idx] = f1;
        fv[7 + idx] = f2;
        res_k += WGK[idx] * (f1 + f2);
        res_abs += WGK[idx] * (f1.abs() + f2.abs());
    }

    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[7 + j] - mean).abs());
    }

    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let raw = ((res_k - res_g) * half).abs();
    (value, rescale_error(raw, res_abs, res_asc))
}

// QUADPACK's empirical error rescaling.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err;
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = libm::pow(200.0 * scaled / res_asc, 1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}
