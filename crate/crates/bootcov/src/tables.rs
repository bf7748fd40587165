//! The table-areas and table-normal commands.

use anyhow::Result;
use bootcov_core::binom_one::{area_under, Center, OneSampleDesign};
use bootcov_core::mc::{simulate_nonparam, Estimator, McConfig, SampleFamily};
use bootcov_core::nonparam::{coverage_cpm, coverage_cpn, el_cpm_normal, el_cpn, CpnMode, ENUM_CAP};
use bootcov_core::normal::{
    a_factor, b_factor, coverage_cnu, coverage_cq_f64, el_cnm, t_interval_el, z_interval_el,
};
use bootcov_core::percentile::BootstrapPlan;
use bootcov_core::quad::QuadratureSpec;
use bootcov_core::Method;

use crate::csvio::{g17, to_csv};

/// Area under the coverage probability curve of the Wilson-centered
/// bootstrap interval at one `(n, m, alpha)`.
pub fn cwi_area(n: u64, m: u64, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    let plan = BootstrapPlan::new(m, alpha)?;
    let d = OneSampleDesign::new(n, plan, Center::Wilson)?;
    Ok(area_under(
        |p| d.coverage(p).expect("p in [0,1]"),
        &d.breakpoints(),
        spec,
    )?)
}

/// Rows `(n, m)`, one column per nominal level: the areas under the
/// `C_wi` coverage curve.
pub fn table_areas(n_list: &[u64], m_list: &[u64], alpha_list: &[f64]) -> Result<String> {
    let spec = QuadratureSpec::default();
    let mut header: Vec<String> = vec!["n".into(), "m".into()];
    for &alpha in alpha_list {
        header.push(format!("{}", 1.0 - alpha));
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut rows = Vec::new();
    for &n in n_list {
        for &m in m_list {
            let mut row = vec![n.to_string(), m.to_string()];
            for &alpha in alpha_list {
                row.push(g17(cwi_area(n, m, alpha, &spec)?));
            }
            rows.push(row);
        }
    }
    Ok(to_csv(&header_refs, &rows))
}

struct Cell {
    value: f64,
    method: &'static str,
    se: Option<f64>,
}

impl Cell {
    fn exact(value: f64) -> Self {
        Cell {
            value,
            method: "exact",
            se: None,
        }
    }
    fn quad(value: f64) -> Self {
        Cell {
            value,
            method: "quadrature",
            se: None,
        }
    }
    fn mc(value: f64, se: f64) -> Self {
        Cell {
            value,
            method: "mc",
            se: Some(se),
        }
    }
    fn from_eval(e: bootcov_core::EvalResult) -> Self {
        match e.method {
            Method::Exact => Cell::exact(e.value),
            Method::Quadrature { .. } => Cell::quad(e.value),
            Method::MonteCarlo { se, .. } => Cell::mc(e.value, se),
        }
    }
}

fn push_row(
    rows: &mut Vec<Vec<String>>,
    n: u64,
    m: Option<u64>,
    level: f64,
    interval: &str,
    cp: Cell,
    el: Cell,
) {
    rows.push(vec![
        n.to_string(),
        m.map(|m| m.to_string()).unwrap_or_default(),
        level.to_string(),
        interval.to_string(),
        g17(cp.value),
        cp.se.map(g17).unwrap_or_default(),
        cp.method.to_string(),
        g17(el.value),
        el.se.map(g17).unwrap_or_default(),
        el.method.to_string(),
    ]);
}

/// Long-form normal-mean table: one row per (n, m, level, interval) for
/// the five bootstrap intervals, plus one z-row and one t-row per
/// (n, level). Exact and quadrature entries are flagged as such;
/// simulated entries carry their standard errors.
pub fn table_normal(
    n_list: &[u64],
    m_list: &[u64],
    alpha_list: &[f64],
    sigma: f64,
    reps: u64,
    seed: u64,
) -> Result<String> {
    let spec = QuadratureSpec::default();
    let cfg = McConfig::new(reps, seed)?;
    let mut rows: Vec<Vec<String>> = Vec::new();
    for &n in n_list {
        for &alpha in alpha_list {
            let level = 1.0 - alpha;
            for &m in m_list {
                let plan = BootstrapPlan::new(m, alpha)?;
                let cq = coverage_cq_f64(&plan);

                let a = a_factor(n, m, alpha, &spec)?;
                push_row(
                    &mut rows,
                    n,
                    Some(m),
                    level,
                    "C_N",
                    Cell::exact(cq),
                    Cell::quad(a * sigma),
                );

                let (cp, el) = if n as u32 <= ENUM_CAP {
                    let cp = coverage_cpn(n as u32, &plan, 0.0, CpnMode::RaoBlackwell, &cfg)?;
                    let el = el_cpn(n as u32, &plan, sigma, &cfg)?;
                    (Cell::from_eval(cp), Cell::from_eval(el))
                } else {
                    let est = simulate_nonparam(
                        n,
                        Estimator::Mean,
                        SampleFamily::Normal { mu: 0.0, sigma },
                        &plan,
                        &cfg,
                    );
                    (
                        Cell::mc(est.coverage, est.coverage_se),
                        Cell::mc(est.el, est.el_se),
                    )
                };
                push_row(&mut rows, n, Some(m), level, "C_pN", cp, el);

                if n >= 2 {
                    let cnu = coverage_cnu(n, m, alpha, &spec)?;
                    let el = b_factor(n) * a * sigma;
                    push_row(
                        &mut rows,
                        n,
                        Some(m),
                        level,
                        "C_Nu",
                        Cell::quad(cnu),
                        Cell::quad(el),
                    );
                }

                if n % 2 == 1 {
                    let el = el_cnm(n, m, alpha, sigma, &spec)?;
                    push_row(
                        &mut rows,
                        n,
                        Some(m),
                        level,
                        "C_NM",
                        Cell::exact(cq),
                        Cell::quad(el),
                    );
                    let cpm = coverage_cpm(n, &plan)?;
                    let el = el_cpm_normal(n, &plan, sigma, &spec)?;
                    push_row(
                        &mut rows,
                        n,
                        Some(m),
                        level,
                        "C_pM",
                        Cell::exact(cpm),
                        Cell::quad(el),
                    );
                }
            }
            push_row(
                &mut rows,
                n,
                None,
                level,
                "z",
                Cell::exact(level),
                Cell::exact(z_interval_el(n, alpha, sigma)?),
            );
            if n >= 2 {
                push_row(
                    &mut rows,
                    n,
                    None,
                    level,
                    "t",
                    Cell::exact(level),
                    Cell::exact(t_interval_el(n, alpha, sigma)?),
                );
            }
        }
    }
    Ok(to_csv(
        &[
            "n",
            "m",
            "level",
            "interval",
            "cp",
            "cp_se",
            "cp_method",
            "el",
            "el_se",
            "el_method",
        ],
        &rows,
    ))
}
