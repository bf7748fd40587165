use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use bootcov::compare::{compare_area, compare_cc, Family};
use bootcov::csvio::parse_interval_table;
use bootcov::curves::{coverage_curve, CurveDesign};
use bootcov::manifest::{write_output, RunManifest};
use bootcov::surface::{default_axis1, surface};
use bootcov::tables::{table_areas, table_normal};
use bootcov::validate::{run_suite, Suite};
use bootcov_core::binom_two::SurfaceKind;

/// Exact (or controlled Monte Carlo) coverage probability and expected
/// length of parametric and percentile bootstrap confidence intervals at
/// fixed sample size, emitted as CSV with a reproducibility manifest per
/// output file.
#[derive(Parser)]
#[command(name = "bootcov", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum DesignArg {
    Wald,
    Wilson,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    D,
    Theta,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Quick,
    Full,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact coverage and expected length of a one-sample bootstrap
    /// interval over a p-grid (CSV: p,coverage,el).
    CoverageCurve {
        #[arg(long, value_enum)]
        design: DesignArg,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        alpha: f64,
        /// Number of uniform grid points on [0,1].
        #[arg(long, default_value_t = 501)]
        grid: usize,
        /// Also evaluate at 10^-k and 1-10^-k, k = 1..8.
        #[arg(long, default_value_t = false)]
        boundary_approach: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Areas under the Wilson-centered bootstrap coverage curve, one row
    /// per (n, m), one column per nominal level.
    TableAreas {
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        m_list: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        alpha_list: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Coverage/length table for the normal-mean bootstrap intervals
    /// (C_N, C_pN, C_Nu, C_NM, C_pM) and the z/t comparators.
    TableNormal {
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        m_list: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        alpha_list: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        /// Replications for the simulated C_pN cells.
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Calibrate interval families to the same area under the coverage
    /// curve as C_wi at the reference level, then compare.
    CompareArea {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        alpha_ref: f64,
        /// Comma list of families: cwa,cwi,wald,wilson,agresti-coull,
        /// clopper-pearson.
        #[arg(long, value_delimiter = ',', default_value = "cwa,wald,wilson")]
        intervals: Vec<String>,
        /// Imported interval tables (CSV y,lower,upper), reported as-is.
        #[arg(long, value_delimiter = ',')]
        table_files: Vec<PathBuf>,
        /// Residual above this flags the calibration row.
        #[arg(long, default_value_t = 0.01)]
        warn_tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulated CP/EL of the percentile-mean interval next to the
    /// z-interval and the z*-interval matched to its confidence
    /// coefficient.
    CompareCc {
        #[arg(long)]
        n: u64,
        #[arg(long = "m", value_delimiter = ',', required = true)]
        m_list: Vec<u64>,
        #[arg(long = "alpha", value_delimiter = ',', required = true)]
        alpha_list: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Coverage/length surface of a two-sample interval over its
    /// parameter domain (CSV: axis1,p2,coverage,el).
    Surface {
        #[arg(long, value_enum)]
        which: WhichArg,
        #[arg(long)]
        n1: u64,
        #[arg(long)]
        n2: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        alpha: f64,
        /// First-axis points (default 101 for d, 100 log-spaced for theta).
        #[arg(long)]
        grid: Option<usize>,
        /// p2-axis points.
        #[arg(long, default_value_t = 101)]
        p2_grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the registered exact-vs-oracle pairings; exit 0 iff all pass.
    Validate {
        #[arg(long, value_enum, default_value_t = SuiteArg::Quick)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0x1CEB00DA)]
        seed: u64,
    },
}

fn run(cmd: Cmd) -> Result<ExitCode> {
    let started = Instant::now();
    match cmd {
        Cmd::CoverageCurve {
            design,
            n,
            m,
            alpha,
            grid,
            boundary_approach,
            out,
        } => {
            let d = match design {
                DesignArg::Wald => CurveDesign::Wald,
                DesignArg::Wilson => CurveDesign::Wilson,
            };
            let csv = coverage_curve(d, n, m, alpha, grid, boundary_approach)?;
            let params = json!({
                "design": match design { DesignArg::Wald => "wald", DesignArg::Wilson => "wilson" },
                "n": n, "m": m, "alpha": alpha, "grid": grid,
                "boundary_approach": boundary_approach,
            });
            write_output(
                &out,
                &csv,
                RunManifest::new("coverage-curve", params, vec![], &out),
                started,
            )?;
        }
        Cmd::TableAreas {
            n_list,
            m_list,
            alpha_list,
            out,
        } => {
            let csv = table_areas(&n_list, &m_list, &alpha_list)?;
            let params = json!({"n_list": n_list, "m_list": m_list, "alpha_list": alpha_list});
            write_output(
                &out,
                &csv,
                RunManifest::new("table-areas", params, vec![], &out),
                started,
            )?;
        }
        Cmd::TableNormal {
            n_list,
            m_list,
            alpha_list,
            sigma,
            reps,
            seed,
            out,
        } => {
            let csv = table_normal(&n_list, &m_list, &alpha_list, sigma, reps, seed)?;
            let params = json!({
                "n_list": n_list, "m_list": m_list, "alpha_list": alpha_list,
                "sigma": sigma, "reps": reps, "seed": seed,
            });
            write_output(
                &out,
                &csv,
                RunManifest::new("table-normal", params, vec![seed], &out),
                started,
            )?;
        }
        Cmd::CompareArea {
            n,
            m,
            alpha_ref,
            intervals,
            table_files,
            warn_tol,
            out,
        } => {
            let families = intervals
                .iter()
                .map(|s| Family::parse(s))
                .collect::<Result<Vec<_>>>()?;
            let mut tables = Vec::new();
            for path in &table_files {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let table = parse_interval_table(&text)
                    .with_context(|| format!("parsing {}", path.display()))?;
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                tables.push((name, table));
            }
            let csv = compare_area(n, m, alpha_ref, &families, &tables, warn_tol)?;
            let params = json!({
                "n": n, "m": m, "alpha_ref": alpha_ref, "intervals": intervals,
                "table_files": table_files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
                "warn_tol": warn_tol,
            });
            write_output(
                &out,
                &csv,
                RunManifest::new("compare-area", params, vec![], &out),
                started,
            )?;
        }
        Cmd::CompareCc {
            n,
            m_list,
            alpha_list,
            reps,
            seed,
            out,
        } => {
            let csv = compare_cc(n, &m_list, &alpha_list, reps, seed)?;
            let params = json!({
                "n": n, "m_list": m_list, "alpha_list": alpha_list,
                "reps": reps, "seed": seed,
            });
            write_output(
                &out,
                &csv,
                RunManifest::new("compare-cc", params, vec![seed], &out),
                started,
            )?;
        }
        Cmd::Surface {
            which,
            n1,
            n2,
            m,
            alpha,
            grid,
            p2_grid,
            out,
        } => {
            let kind = match which {
                WhichArg::D => SurfaceKind::Diff,
                WhichArg::Theta => SurfaceKind::Odds,
            };
            let axis1 = grid.unwrap_or_else(|| default_axis1(kind));
            let (csv, summary) = surface(kind, n1, n2, m, alpha, axis1, p2_grid)?;
            println!(
                "rows={} min_coverage={} frac_below_level={}",
                summary.rows, summary.min_coverage, summary.frac_below_level
            );
            let params = json!({
                "which": match which { WhichArg::D => "d", WhichArg::Theta => "theta" },
                "n1": n1, "n2": n2, "m": m, "alpha": alpha,
                "grid_axis1": axis1, "grid_p2": p2_grid,
                "min_coverage": summary.min_coverage,
                "frac_below_level": summary.frac_below_level,
            });
            write_output(
                &out,
                &csv,
                RunManifest::new("surface", params, vec![], &out),
                started,
            )?;
        }
        Cmd::Validate { suite, seed } => {
            let s = match suite {
                SuiteArg::Quick => Suite::Quick,
                SuiteArg::Full => Suite::Full,
            };
            let outcomes = run_suite(s, seed)?;
            let mut all_pass = true;
            for o in &outcomes {
                println!(
                    "{} {} — {}",
                    if o.pass { "PASS" } else { "FAIL" },
                    o.name,
                    o.detail
                );
                all_pass &= o.pass;
            }
            println!(
                "{} of {} pairings passed in {:.1}s",
                outcomes.iter().filter(|o| o.pass).count(),
                outcomes.len(),
                started.elapsed().as_secs_f64()
            );
            if !all_pass {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
