//! The validate command: a registry of exact-vs-oracle pairings. Every
//! exact operation is checked against the brute-force enumerator on a
//! small instance (1e-12) and against the full-pipeline simulator on a
//! medium instance (3 standard errors), plus the structural properties
//! (coverage ceiling, zero-ICP bound, exact rational table).

use anyhow::Result;
use bootcov_core::binom_one::{wilson_coeffs, Center, OneSampleDesign};
use bootcov_core::binom_two::{
    coverage_cd, coverage_ctheta, el_cd, el_ctheta, surface_grid, DiffPoint, OddsPoint,
    SurfaceKind, TwoSampleDesign,
};
use bootcov_core::dist::DiscreteDist;
use bootcov_core::mc::{
    exhaustive_binom_one, exhaustive_binom_two, rep_rng, simulate_binom_one, simulate_binom_two,
    simulate_nonparam, simulate_normal_known, simulate_normal_unknown, Estimator, McConfig,
    SampleFamily, TwoSampleTarget,
};
use bootcov_core::nonparam::{
    coverage_cpm, coverage_cpn, coverage_cpn_n2, cpn_upper_bound, el_cpm, el_cpn, el_cpn_n2,
    mean_boot_dist_exact, CpnMode,
};
use bootcov_core::normal::{coverage_cnu, coverage_cq_f64, el_cnm, el_cnu, el_cq, QSpec};
use bootcov_core::percentile::{coverage_bracket, expected_width, BootstrapPlan};
use bootcov_core::quad::QuadratureSpec;
use bootcov_core::Rational;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Quick,
    Full,
}

#[derive(Debug, Clone)]
pub struct PairOutcome {
    pub name: &'static str,
    pub detail: String,
    pub pass: bool,
}

fn exact_pair(name: &'static str, diffs: &[f64]) -> PairOutcome {
    let worst = diffs.iter().fold(0.0f64, |a, d| a.max(d.abs()));
    PairOutcome {
        name,
        detail: format!("max |diff| = {worst:.2e} (tol 1e-12)"),
        pass: worst < 1e-12,
    }
}

/// Collects (exact, estimate, se) triples and grades by worst z-score.
struct ZPair {
    name: &'static str,
    worst: f64,
}

impl ZPair {
    fn new(name: &'static str) -> Self {
        ZPair { name, worst: 0.0 }
    }
    fn push(&mut self, exact: f64, estimate: f64, se: f64) {
        let z = (exact - estimate).abs() / se.max(1e-4);
        if z > self.worst {
            self.worst = z;
        }
    }
    fn outcome(self) -> PairOutcome {
        PairOutcome {
            name: self.name,
            detail: format!("max |z| = {:.2}", self.worst),
            pass: self.worst <= 3.0,
        }
    }
}

fn plan(m: u64, alpha: f64) -> BootstrapPlan {
    BootstrapPlan::new(m, alpha).expect("valid plan")
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<PairOutcome>> {
    let reps = match suite {
        Suite::Quick => 20_000,
        Suite::Full => 100_000,
    };
    let spec = QuadratureSpec::default();
    let mut out = Vec::new();

    // --- exhaustive enumeration pairings (1e-12) ---
    {
        let p = plan(2, 0.5);
        let d = OneSampleDesign::new(2, p, Center::Wald)?;
        let mut diffs = Vec::new();
        for point in [0.5, 0.37] {
            let (cov_ex, el_ex) = exhaustive_binom_one(2, Center::Wald, &p, point)?;
            diffs.push(d.coverage(point)? - cov_ex);
            diffs.push(d.el(point)? - el_ex);
        }
        out.push(exact_pair("cwa-vs-exhaustive(n=2,m=2)", &diffs));
    }
    {
        let p = plan(2, 0.5);
        let w = wilson_coeffs(2, p.alpha())?;
        let d = OneSampleDesign::new(2, p, Center::Wilson)?;
        let mut diffs = Vec::new();
        for k in 0..=2u64 {
            let at = w.a1 * k as f64 + w.b1; // exactly on an attained atom
            let (cov_ex, el_ex) = exhaustive_binom_one(2, Center::Wilson, &p, at)?;
            diffs.push(d.coverage(at)? - cov_ex);
            diffs.push(d.el(at)? - el_ex);
        }
        out.push(exact_pair("cwi-atoms-vs-exhaustive(n=2,m=2)", &diffs));
    }
    {
        let p = plan(5, 0.2);
        let design = TwoSampleDesign::new(2, 2, p)?;
        let point = DiffPoint::new(0.0, 0.5).map_err(anyhow::Error::from)?;
        let (cov_ex, el_ex) =
            exhaustive_binom_two(2, 2, TwoSampleTarget::Difference, &p, 0.0, 0.5)?;
        out.push(exact_pair(
            "cd-vs-exhaustive(2,2,m=5)",
            &[
                coverage_cd(&point, &design)? - cov_ex,
                el_cd(&point, &design)? - el_ex,
            ],
        ));
        let point = OddsPoint::new(1.0, 0.5).map_err(anyhow::Error::from)?;
        let (cov_ex, el_ex) =
            exhaustive_binom_two(2, 2, TwoSampleTarget::OddsRatio, &p, 1.0, 0.5)?;
        out.push(exact_pair(
            "ctheta-vs-exhaustive(2,2,m=5)",
            &[
                coverage_ctheta(&point, &design)? - cov_ex,
                el_ctheta(&point, &design)? - el_ex,
            ],
        ));
    }

    // --- one-sample vs full-pipeline Monte Carlo ---
    let one_sample_cases: &[(u64, u64)] = match suite {
        Suite::Quick => &[(3, 5)],
        Suite::Full => &[(3, 5), (5, 10)],
    };
    for ¢er in &[Center::Wald, Center::Wilson] {
        let mut pair = ZPair::new(match center {
            Center::Wald => "cwa-vs-mc",
            Center::Wilson => "cwi-vs-mc",
        });
        for (case_idx, &(n, m)) in one_sample_cases.iter().enumerate() {
            let p = plan(m, 0.2);
            let d = OneSampleDesign::new(n, p, center)?;
            let cfg = McConfig::new(reps, seed ^ (0x10 + case_idx as u64))?;
            for i in 1..=9u64 {
                let point = i as f64 / 10.0;
                let est = simulate_binom_one(n, center, &p, point, &cfg)?;
                pair.push(d.coverage(point)?, est.coverage, est.coverage_se);
                pair.push(d.el(point)?, est.el, est.el_se);
            }
        }
        out.push(pair.outcome());
    }

    // --- two-sample vs full-pipeline Monte Carlo ---
    {
        let p = plan(10, 0.2);
        let design = TwoSampleDesign::new(3, 4, p)?;
        let n_points = match suite {
            Suite::Quick => 2,
            Suite::Full => 5,
        };
        let mut rng = rep_rng(seed ^ 0x20, 0);
        let mut pair_d = ZPair::new("cd-vs-mc(3,4,m=10)");
        let mut pair_t = ZPair::new("ctheta-vs-mc(3,4,m=10)");
        for i in 0..n_points {
            let cfg = McConfig::new(reps, seed ^ (0x30 + i as u64))?;
            let dd: f64 = rng.gen_range(-0.6..0.6);
            let p2: f64 = if dd >= 0.0 {
                rng.gen_range(0.0..1.0 - dd)
            } else {
                rng.gen_range(-dd..1.0)
            };
            let point = DiffPoint::new(dd, p2).map_err(anyhow::Error::from)?;
            let est = simulate_binom_two(3, 4, TwoSampleTarget::Difference, &p, dd, p2, &cfg);
            pair_d.push(coverage_cd(&point, &design)?, est.coverage, est.coverage_se);
            pair_d.push(el_cd(&point, &design)?, est.el, est.el_se);

            let theta: f64 = rng.gen_range(0.2..5.0);
            let p2t: f64 = rng.gen_range(0.05..0.95);
            let point = OddsPoint::new(theta, p2t).map_err(anyhow::Error::from)?;
            let est = simulate_binom_two(3, 4, TwoSampleTarget::OddsRatio, &p, theta, p2t, &cfg);
            pair_t.push(
                coverage_ctheta(&point, &design)?,
                est.coverage,
                est.coverage_se,
            );
            pair_t.push(el_ctheta(&point, &design)?, est.el, est.el_se);
        }
        out.push(pair_d.outcome());
        out.push(pair_t.outcome());
    }

    // --- normal mean, known sigma, mean and median estimators ---
    {
        let p = plan(20, 0.2);
        let cfg = McConfig::new(reps, seed ^ 0x40)?;
        let est = simulate_normal_known(5, 1.0, Estimator::Mean, &p, 0.3, &cfg);
        let mut pair = ZPair::new("cq/el_cq-vs-mc(mean,n=5,m=20)");
        pair.push(coverage_cq_f64(&p), est.coverage, est.coverage_se);
        pair.push(
            el_cq(&QSpec::Mean { n: 5 }, &p, 1.0, &spec)?,
            est.el,
            est.el_se,
        );
        out.push(pair.outcome());

        let cfg = McConfig::new(reps, seed ^ 0x41)?;
        let est = simulate_normal_known(5, 1.0, Estimator::Median, &p, 0.3, &cfg);
        let mut pair = ZPair::new("cq/el_cnm-vs-mc(median,n=5,m=20)");
        pair.push(coverage_cq_f64(&p), est.coverage, est.coverage_se);
        pair.push(el_cnm(5, 20, 0.2, 1.0, &spec)?, est.el, est.el_se);
        out.push(pair.outcome());
    }

    // --- normal mean, unknown sigma ---
    {
        let p = plan(20, 0.2);
        let cfg = McConfig::new(reps, seed ^ 0x42)?;
        let est = simulate_normal_unknown(5, &p, -1.2, 2.0, &cfg);
        let mut pair = ZPair::new("cnu-vs-mc(n=5,m=20)");
        pair.push(coverage_cnu(5, 20, 0.2, &spec)?, est.coverage, est.coverage_se);
        pair.push(el_cnu(5, 20, 0.2, 2.0, &spec)?, est.el, est.el_se);
        out.push(pair.outcome());
    }

    // --- percentile median: distribution-free coverage on two families ---
    {
        let p = plan(20, 0.2);
        let cov = coverage_cpm(5, &p)?;
        let cfg = McConfig::new(reps, seed ^ 0x50)?;
        let est = simulate_nonparam(
            5,
            Estimator::Median,
            SampleFamily::Normal {
                mu: 0.0,
                sigma: 1.0,
            },
            &p,
            &cfg,
        );
        let mut pair = ZPair::new("cpm-vs-mc(normal,n=5,m=20)");
        pair.push(cov, est.coverage, est.coverage_se);
        let el = el_cpm(
            5,
            &p,
            |z| {
                bootcov_core::special::std_normal_quantile(z.clamp(1e-300, 1.0 - 1e-16)).unwrap()
            },
            &spec,
        )?;
        pair.push(el, est.el, est.el_se);
        out.push(pair.outcome());

        let cfg = McConfig::new(reps, seed ^ 0x51)?;
        let est = simulate_nonparam(
            5,
            Estimator::Median,
            SampleFamily::Laplace {
                mu: 0.0,
                scale: 1.0,
            },
            &p,
            &cfg,
        );
        let mut pair = ZPair::new("cpm-vs-mc(laplace,n=5,m=20)");
        pair.push(cov, est.coverage, est.coverage_se);
        let el = el_cpm(
            5,
            &p,
            |z| {
                // Laplace(0,1) quantile.
                if z < 0.5 {
                    (2.0 * z).max(1e-300).ln()
                } else {
                    -(2.0 * (1.0 - z)).max(1e-300).ln()
                }
            },
            &spec,
        )?;
        pair.push(el, est.el, est.el_se);
        out.push(pair.outcome());
    }

    // --- percentile mean: exact n=2, Rao-Blackwell, full pipeline ---
    {
        let p = plan(10, 0.2);
        let cfg = McConfig::new(100, seed)?;
        let n2_exact = coverage_cpn_n2(&p);
        let n2_enum = coverage_cpn(2, &p, 0.0, CpnMode::ExactEnum, &cfg)?;
        out.push(exact_pair(
            "cpn-n2-formula-vs-region-enum",
            &[n2_exact - n2_enum.value],
        ));

        let cfg = McConfig::new(reps, seed ^ 0x60)?;
        let rb = coverage_cpn(2, &p, 0.0, CpnMode::RaoBlackwell, &cfg)?;
        let el_rb = el_cpn(2, &p, 1.0, &cfg)?;
        let mut pair = ZPair::new("cpn-n2-vs-rao-blackwell-mc");
        pair.push(n2_exact, rb.value, rb.se().unwrap());
        pair.push(el_cpn_n2(&p, 1.0), el_rb.value, el_rb.se().unwrap());
        out.push(pair.outcome());

        let rb_cfg = McConfig::new(reps, seed ^ 0x61)?;
        let mc_cfg = McConfig::new(reps, seed ^ 0x62)?;
        let rb = coverage_cpn(3, &p, 0.0, CpnMode::RaoBlackwell, &rb_cfg)?;
        let mc = coverage_cpn(3, &p, 0.0, CpnMode::FullMc, &mc_cfg)?;
        let joint = (rb.se().unwrap().powi(2) + mc.se().unwrap().powi(2)).sqrt();
        let z = (rb.value - mc.value).abs() / joint;
        out.push(PairOutcome {
            name: "cpn-rao-blackwell-vs-full-mc(n=3,m=10)",
            detail: format!("|z| = {z:.2} (joint se {joint:.2e})"),
            pass: z <= 3.0,
        });

        // Every estimate respects the coverage ceiling.
        let mut worst = f64::NEG_INFINITY;
        let mut ok = true;
        for (n, est) in [(2u32, &rb), (3, &mc)] {
            let slack =
                est.value - cpn_upper_bound(if n == 2 { 3 } else { n }) - 3.0 * est.se().unwrap();
            worst = worst.max(slack);
            ok &= est.value <= cpn_upper_bound(n) + 3.0 * est.se().unwrap();
        }
        out.push(PairOutcome {
            name: "cpn-coverage-ceiling",
            detail: format!("max estimate-over-bound slack = {worst:.2e}"),
            pass: ok,
        });
    }

    // --- zero-ICP bound for the one-sample bootstrap ---
    {
        let d = OneSampleDesign::new(6, plan(20, 0.1), Center::Wald)?;
        let mut ok = true;
        let mut worst = f64::NEG_INFINITY;
        for k in 1..=8u32 {
            let p = 10f64.powi(-(k as i32));
            let excess = d.coverage(p)? - d.coverage_upper_bound(p);
            worst = worst.max(excess);
            ok &= excess <= 1e-14;
        }
        out.push(PairOutcome {
            name: "icp-bound-cwa(p=10^-k)",
            detail: format!("max coverage - (1-(1-p)^n) = {worst:.2e}"),
            pass: ok,
        });
    }

    // --- exact rational bootstrap-mean table ---
    {
        let values: Vec<Rational> = [0, 1, 5].iter().map(|&v| Rational::from_integer(v)).collect();
        let rows = mean_boot_dist_exact(&values)?;
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
        let pass = rows.len() == 10
            && rows.iter().zip(expect.iter()).all(|((v, w), (num, den, c))| {
                *v == Rational::new(*num, *den) && *w == Rational::new(*c, 27)
            });
        out.push(PairOutcome {
            name: "bootstrap-mean-pmf-exact-rationals(0,1,5)",
            detail: format!("{} support rows", rows.len()),
            pass,
        });
    }

    // --- order-statistic machinery vs direct sampling ---
    {
        let dist = DiscreteDist::from_rational(vec![
            (Rational::new(-2, 3), 0.25),
            (Rational::new(0, 1), 0.35),
            (Rational::new(5, 4), 0.4),
        ])
        .map_err(anyhow::Error::from)?;
        let p = plan(12, 0.3);
        let theta = 0.0;
        let exact_cov = coverage_bracket(&dist, theta, &p);
        let exact_el = expected_width(&dist, &p)?;
        let mut covered = 0u64;
        let mut w_sum = 0.0;
        let mut w2 = 0.0;
        let mut draws = vec![0.0f64; p.m() as usize];
        for rep in 0..reps {
            let mut rng = rep_rng(seed ^ 0x70, rep);
            for d in draws.iter_mut() {
                let u: f64 = rng.gen_range(0.0..1.0);
                let idx = dist.cum().partition_point(|&c| c < u);
                *d = dist.values()[idx.min(dist.len() - 1)];
            }
            draws.sort_unstable_by(f64::total_cmp);
            let lo = draws[p.m_l() as usize - 1];
            let hi = draws[p.m_u() as usize - 1];
            if lo <= theta && theta <= hi {
                covered += 1;
            }
            let w = hi - lo;
            w_sum += w;
            w2 += w * w;
        }
        let nf = reps as f64;
        let cov = covered as f64 / nf;
        let el = w_sum / nf;
        let mut pair = ZPair::new("order-stat-bracket-vs-sampling");
        pair.push(exact_cov, cov, (cov * (1.0 - cov) / nf).sqrt());
        pair.push(exact_el, el, ((w2 / nf - el * el).max(0.0) / nf).sqrt());
        out.push(pair.outcome());
    }

    // --- two-sample surfaces, qualitative (Full only) ---
    if suite == Suite::Full {
        let design = TwoSampleDesign::new(30, 60, plan(1000, 0.1))?;
        let frac_below = |kind| -> Result<f64> {
            let rows = surface_grid(&design, kind, 41, 41)?;
            let below = rows.iter().filter(|r| r.coverage < 0.9).count();
            Ok(below as f64 / rows.len() as f64)
        };
        let fd = frac_below(SurfaceKind::Diff)?;
        let ft = frac_below(SurfaceKind::Odds)?;
        out.push(PairOutcome {
            name: "surface-majority-below-nominal(30,60,m=1000)",
            detail: format!("below-0.9 fractions: C_d {fd:.3}, C_theta {ft:.3}"),
            pass: fd > 0.5 && ft > 0.5 && ft > fd,
        });
    }

    Ok(out)
}
