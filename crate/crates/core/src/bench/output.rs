//! CSV output of convergence tables and error fields.
//!
//! Floats are written with Rust's shortest round-trip formatting, so parsing
//! a file back yields the emitted values bit for bit.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::kernel::Grid;

use super::study::ConvergenceRow;

fn fmt_rate(r: Option<f64>) -> String {
    r.map(|v| v.to_string()).unwrap_or_default()
}

fn fmt_runtime(t: f64, timing: bool) -> String {
    if timing {
        t.to_string()
    } else {
        String::new()
    }
}

/// `h,error_inf,rate,runtime_s`.
pub fn emit_csv(rows: &[ConvergenceRow], path: impl AsRef<Path>) -> Result<()> {
    emit_csv_with(rows, path, true)
}

/// As [`emit_csv`]; with `timing = false` the runtime column is left empty so
/// repeated runs produce identical bytes.
pub fn emit_csv_with(rows: &[ConvergenceRow], path: impl AsRef<Path>, timing: bool) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["h", "error_inf", "rate", "runtime_s"])?;
    for r in rows {
        w.write_record([r.h.to_string(), r.error_inf.to_string(), fmt_rate(r.rate), fmt_runtime(r.runtime_s, timing)])?;
    }
    w.flush()?;
    Ok(())
}

/// `<key>,h,error_inf,rate` for studies keyed by one parameter (γ or λ).
pub fn emit_keyed_csv(key: &str, table: &[(f64, Vec<ConvergenceRow>)], path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([key, "h", "error_inf", "rate"])?;
    for (k, rows) in table {
        for r in rows {
            w.write_record([k.to_string(), r.h.to_string(), r.error_inf.to_string(), fmt_rate(r.rate)])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Pointwise error field: `x,e` in 1D, `x,y,e` in 2D, interior nodes in
/// storage order.
pub fn emit_error_field(pointwise: &[f64], grid: &Grid, path: impl AsRef<Path>) -> Result<()> {
    let pts = grid.interior_points();
    if pts.len() != pointwise.len() {
        return Err(Error::SizeMismatch { expected: pts.len(), got: pointwise.len() });
    }
    let mut w = csv::Writer::from_path(path)?;
    if grid.dim() == 1 {
        w.write_record(["x", "e"])?;
    } else {
        w.write_record(["x", "y", "e"])?;
    }
    for (x, e) in pts.iter().zip(pointwise) {
        let mut rec: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        rec.push(e.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Plain-text rendering used by the command line.
pub fn write_table(out: &mut dyn Write, title: &str, rows: &[ConvergenceRow]) -> std::io::Result<()> {
    writeln!(out, "{title}")?;
    writeln!(out, "{:>12} {:>12} {:>8} {:>10}", "h", "error_inf", "rate", "time[s]")?;
    for r in rows {
        let rate = r.rate.map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into());
        writeln!(out, "{:>12} {:>12.4e} {:>8} {:>10.3}", format_h(r.h), r.error_inf, rate, r.runtime_s)?;
    }
    Ok(())
}

/// `1/n` when `h` is the reciprocal of an integer.
pub fn format_h(h: f64) -> String {
    let n = (1.0 / h).round();
    if n >= 1.0 && (1.0 / n - h).abs() <= 1e-14 * h {
        format!("1/{n}")
    } else {
        h.to_string()
    }
}
