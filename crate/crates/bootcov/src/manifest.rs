//! Run manifests: every output file gets a sidecar JSON recording the
//! command, full parameter set, seeds, tool version, tolerances and wall
//! time, so any file can be reproduced from its manifest alone.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Result;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct Tolerances {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub tail_cutoff: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let spec = bootcov_core::quad::QuadratureSpec::default();
        Tolerances {
            abs_tol: spec.abs_tol,
            rel_tol: spec.rel_tol,
            max_subdivisions: spec.max_subdivisions,
            tail_cutoff: spec.tail_cutoff,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub seeds: Vec<u64>,
    pub tool_version: String,
    pub tolerances: Tolerances,
    pub wall_time_s: f64,
    pub output: String,
}

impl RunManifest {
    pub fn new(command: &str, parameters: Value, seeds: Vec<u64>, output: &Path) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters,
            seeds,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            tolerances: Tolerances::default(),
            wall_time_s: 0.0,
            output: output.display().to_string(),
        }
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// Write `content` to `out` and the manifest beside it, stamping the
/// elapsed wall time from `started`.
pub fn write_output(
    out: &Path,
    content: &str,
    mut manifest: RunManifest,
    started: Instant,
) -> Result<()> {
    manifest.wall_time_s = started.elapsed().as_secs_f64();
    std::fs::write(out, content)?;
    let json = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(manifest_path(out), json)?;
    Ok(())
}
