//! CSV formatting and parsing helpers.

use anyhow::{bail, Context, Result};
use bootcov_core::binom_one::IntervalTable;

/// 17-significant-digit formatting; round-trips any finite f64.
pub fn g17(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    format!("{x:.16e}")
}

/// Assemble a CSV document from a header and stringified rows.
pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Parse an interval table from its CSV form: header `y,lower,upper`,
/// one row per outcome `y = 0..n` with decimal real bounds.
pub fn parse_interval_table(text: &str) -> Result<IntervalTable> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().context("empty interval table file")?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols != ["y", "lower", "upper"] {
        bail!("interval table header must be `y,lower,upper`, got `{header}`");
    }
    let mut rows: Vec<(u32, f64, f64)> = Vec::new();
    for (idx, line) in lines.enumerate() {
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            bail!("row {}: expected 3 fields, got {}", idx + 2, parts.len());
        }
        let y: u32 = parts[0]
            .parse()
            .with_context(|| format!("row {}: bad y `{}`", idx + 2, parts[0]))?;
        let lo: f64 = parts[1]
            .parse()
            .with_context(|| format!("row {}: bad lower `{}`", idx + 2, parts[1]))?;
        let hi: f64 = parts[2]
            .parse()
            .with_context(|| format!("row {}: bad upper `{}`", idx + 2, parts[2]))?;
        rows.push((y, lo, hi));
    }
    let n = rows.iter().map(|r| r.0).max().context("no data rows")? as u64;
    IntervalTable::new(n, &rows).map_err(|e| anyhow::anyhow!("{e}"))
}

/// Render an interval table back to its CSV form.
pub fn interval_table_csv(table: &IntervalTable) -> String {
    let rows: Vec<Vec<String>> = (0..=table.n())
        .map(|y| {
            let (lo, hi) = table.bounds(y);
            vec![y.to_string(), g17(lo), g17(hi)]
        })
        .collect();
    to_csv(&["y", "lower", "upper"], &rows)
}
