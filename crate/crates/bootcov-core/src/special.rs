//! Special functions: log-gamma, normal, beta and Student-t distributions.
//!
//! Everything here is deterministic scalar math on `f64`. The normal
//! quantile uses Wichura's PPND16 rational approximation (full double
//! precision); the regularized incomplete beta uses a Lentz continued
//! fraction; its inverse is a bisection-safeguarded Newton iteration.

use crate::Error;

const FRAC_1_SQRT_2PI: f64 = 0.39894228040143267793994605993438;
const SQRT_2: f64 = core::f64::consts::SQRT_2;
const PI: f64 = core::f64::consts::PI;

/// Natural log of the gamma function, `ln Γ(x)` for `x > 0`.
pub fn gamma_ln(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Normal density with mean `mu` and standard deviation `sigma`.
pub fn normal_pdf(x: f64, mu: f64, sigma: f64) -> f64 {
    let z = (x - mu) / sigma;
    FRAC_1_SQRT_2PI / sigma * libm::exp(-0.5 * z * z)
}

/// Normal CDF `Φ((x - mu)/sigma)`, evaluated through `erfc` so both tails
/// keep full relative accuracy.
pub fn normal_cdf(x: f64, mu: f64, sigma: f64) -> f64 {
    let z = (x - mu) / sigma;
    0.5 * libm::erfc(-z / SQRT_2)
}

pub fn std_normal_pdf(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * libm::exp(-0.5 * z * z)
}

pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

/// `ln Φ(z)`, stable deep into the lower tail.
pub fn std_normal_cdf_ln(z: f64) -> f64 {
    let c = 0.5 * libm::erfc(-z / SQRT_2);
    if c > 1e-290 {
        libm::log(c)
    } else {
        // Asymptotic ln Φ(z) ~ -z²/2 - ln(-z√(2π)) for z << 0.
        -0.5 * z * z - libm::log(-z * libm::sqrt(2.0 * PI))
    }
}

/// Inverse normal CDF: returns `z` with `Φ(z) = p`, then shifts by
/// `(mu, sigma)`. Errors at `p = 0` or `p = 1` (unbounded).
pub fn normal_quantile(p: f64, mu: f64, sigma: f64) -> Result<f64, Error> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain {
            what: "normal quantile requires p in (0,1)",
        });
    }
    Ok(mu + sigma * ppnd16(p))
}

pub fn std_normal_quantile(p: f64) -> Result<f64, Error> {
    normal_quantile(p, 0.0, 1.0)
}

/// Wichura (1988) algorithm AS 241, PPND16. Relative error below 1e-15
/// over the whole open unit interval.
fn ppnd16(p: f64) -> f64 {
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * poly(&PPND_A, r) / poly(&PPND_B, r);
    }
    let mut r = if q < 0.0 { p } else { 1.0 - p };
    r = libm::sqrt(-libm::log(r));
    let z = if r <= 5.0 {
        let r = r - 1.6;
        poly(&PPND_C, r) / poly(&PPND_D, r)
    } else {
        let r = r - 5.0;
        poly(&PPND_E, r) / poly(&PPND_F, r)
    };
    if q < 0.0 {
        -z
    } else {
        z
    }
}

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

const PPND_A: [f64; 8] = [
    3.3871328727963666080e0,
    1.3314166789178437745e2,
    1.9715909503065514427e3,
    1.3731693765509461125e4,
    4.5921953931549871457e4,
    6.7265770927008700853e4,
    3.3430575583588128105e4,
    2.5090809287301226727e3,
];
const PPND_B: [f64; 8] = [
    1.0,
    4.2313330701600911252e1,
    6.8718700749205790830e2,
    5.3941960214247511077e3,
    2.1213794301586595867e4,
    3.9307895800092710610e4,
    2.8729085735721942674e4,
    5.2264952788528545610e3,
];
const PPND_C: [f64; 8] = [
    1.42343711074968357734e0,
    4.63033784615654529590e0,
    5.76949722146069140550e0,
    3.64784832476320460504e0,
    1.27045825245236838258e0,
    2.41780725177450611770e-1,
    2.27238449892691845833e-2,
    7.74545014278341407640e-4,
];
const PPND_D: [f64; 8] = [
    1.0,
    2.05319162663775882187e0,
    1.67638483018380384940e0,
    6.89767334985100004550e-1,
    1.48103976427480074590e-1,
    1.51986665636164571966e-2,
    5.47593808499534494600e-4,
    1.05075007164441684324e-9,
];
const PPND_E: [f64; 8] = [
    6.65790464350110377720e0,
    5.46378491116411436990e0,
    1.78482653991729133580e0,
    2.96560571828504891230e-1,
    2.65321895265761230930e-2,
    1.24266094738807843860e-3,
    2.71155556874348757815e-5,
    2.01033439929228813265e-7,
];
const PPND_F: [f64; 8] = [
    1.0,
    5.99832206555887937690e-1,
    1.36929880922735805310e-1,
    1.48753612908506148525e-2,
    7.86869131145613259100e-4,
    1.84631831751005468180e-5,
    1.42151175831644588870e-7,
    2.04426310338993978564e-15,
];

/// `ln B(a, b)`.
pub fn beta_ln(a: f64, b: f64) -> f64 {
    gamma_ln(a) + gamma_ln(b) - gamma_ln(a + b)
}

/// Regularized incomplete beta `I_x(a, b)` for `x ∈ [0,1]`, `a, b > 0`.
pub fn beta_cdf(x: f64, a: f64, b: f64) -> Result<f64, Error> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain {
            what: "beta parameters must be positive",
        });
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain {
            what: "beta cdf argument must lie in [0,1]",
        });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let front = libm::exp(a * libm::log(x) + b * libm::log1p(-x) - beta_ln(a, b));
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(front * beta_cf(a, b, x) / a)
    } else {
        Ok(1.0 - front * beta_cf(b, a, 1.0 - x) / b)
    }
}

/// Lentz continued fraction for the incomplete beta.
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const FPMIN: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    const MAX_ITER: usize = 600;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Inverse of the regularized incomplete beta: `x` with `I_x(a, b) = p`.
pub fn beta_quantile(p: f64, a: f64, b: f64) -> Result<f64, Error> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain {
            what: "beta parameters must be positive",
        });
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain {
            what: "beta quantile requires p in (0,1)",
        });
    }
    let ln_beta = beta_ln(a, b);
    let mut x = beta_quantile_guess(p, a, b, ln_beta);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..100 {
        let f = beta_cdf(x, a, b)? - p;
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        if f.abs() < 1e-15 || hi - lo < 1e-16 * x.max(1e-300) {
            break;
        }
        let dens = libm::exp((a - 1.0) * libm::log(x) + (b - 1.0) * libm::log1p(-x) - ln_beta);
        let mut stepped = false;
        if dens.is_finite() && dens > 0.0 {
            let xn = x - f / dens;
            if xn > lo && xn < hi {
                x = xn;
                stepped = true;
            }
        }
        if !stepped {
            x = 0.5 * (lo + hi);
        }
    }
    Ok(x)
}

fn beta_quantile_guess(p: f64, a: f64, b: f64, ln_beta: f64) -> f64 {
    // Tail asymptotics keep Newton alive at extreme p.
    if p < 1e-6 {
        let x = libm::exp((libm::log(p) + libm::log(a) + ln_beta) / a);
        if x > 0.0 && x < 1.0 {
            return x;
        }
    }
    if p > 1.0 - 1e-6 {
        let x = 1.0 - libm::exp((libm::log(1.0 - p) + libm::log(b) + ln_beta) / b);
        if x > 0.0 && x < 1.0 {
            return x;
        }
    }
    if a >= 1.0 && b >= 1.0 {
        // Abramowitz & Stegun 26.5.22 via the normal quantile.
        let y = ppnd16(p);
        let al = (y * y - 3.0) / 6.0;
        let h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
        let w = y * libm::sqrt(al + h) / h
            - (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) * (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
        let x = a / (a + b * libm::exp(2.0 * w));
        x.clamp(1e-300, 1.0 - 1e-16)
    } else {
        let lna = libm::log(a / (a + b));
        let lnb = libm::log(b / (a + b));
        let t = libm::exp(a * lna) / a;
        let u = libm::exp(b * lnb) / b;
        let w = t + u;
        if p < t / w {
            libm::pow(a * w * p, 1.0 / a)
        } else {
            1.0 - libm::pow(b * w * (1.0 - p), 1.0 / b)
        }
        .clamp(1e-300, 1.0 - 1e-16)
    }
}

/// Student-t density with `df` degrees of freedom.
pub fn t_pdf(x: f64, df: u32) -> f64 {
    let v = df as f64;
    let norm = libm::exp(gamma_ln((v + 1.0) / 2.0) - gamma_ln(v / 2.0)) / libm::sqrt(v * PI);
    norm * libm::pow(1.0 + x * x / v, -(v + 1.0) / 2.0)
}

/// Student-t CDF via the incomplete beta identity.
pub fn t_cdf(x: f64, df: u32) -> f64 {
    let v = df as f64;
    let w = v / (v + x * x);
    let half_tail = 0.5 * beta_cdf(w, v / 2.0, 0.5).expect("w in [0,1], params positive");
    if x >= 0.0 {
        1.0 - half_tail
    } else {
        half_tail
    }
}

/// Student-t quantile: `x` with `t_cdf(x, df) = p`.
pub fn t_quantile(p: f64, df: u32) -> Result<f64, Error> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain {
            what: "t quantile requires p in (0,1)",
        });
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    let v = df as f64;
    let tail = if p > 0.5 { 2.0 * (1.0 - p) } else { 2.0 * p };
    let w = beta_quantile(tail, v / 2.0, 0.5)?;
    let t = libm::sqrt(v * (1.0 - w) / w);
    Ok(if p > 0.5 { t } else { -t })
}
