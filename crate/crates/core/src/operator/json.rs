//! Operator JSON interchange: `{"dim": d, "entries": [[re, im], ...]}`, row-major,
//! reals written with 17 significant digits.

use std::fmt::Write;

use num_complex::Complex64;
use serde::Deserialize;

use super::{Ket, Operator};
use crate::error::{Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOperator {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

/// Formats a finite real with 17 significant digits.
pub fn format_real(x: f64) -> Result<String> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    Ok(format!("{x:.16e}"))
}

fn write_complex_array(out: &mut String, values: &[Complex64]) -> Result<()> {
    out.push('[');
    for (k, v) in values.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        write!(out, "[{},{}]", format_real(v.re)?, format_real(v.im)?).unwrap();
    }
    out.push(']');
    Ok(())
}

pub fn operator_to_json(op: &Operator) -> Result<String> {
    let mut out = format!("{{\"dim\":{},\"entries\":", op.dim());
    write_complex_array(&mut out, op.entries())?;
    out.push('}');
    Ok(out)
}

/// State vectors use the same layout with an `amplitudes` array.
pub fn ket_to_json(ket: &Ket) -> Result<String> {
    let mut out = format!("{{\"dim\":{},\"amplitudes\":", ket.dim());
    write_complex_array(&mut out, ket.amplitudes())?;
    out.push('}');
    Ok(out)
}

pub fn operator_from_json(text: &str) -> Result<Operator> {
    let raw: RawOperator = serde_json::from_str(text).map_err(|e| Error::Json {
        offset: byte_offset(text, e.line(), e.column()),
        message: e.to_string(),
    })?;
    let entries = raw.entries.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
    Operator::from_entries(raw.dim, entries)
}

/// serde_json reports 1-based line and column; convert to a byte offset.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let line_start: usize = text.split_inclusive('\n').take(line - 1).map(str::len).sum();
    (line_start + column.saturating_sub(1)).min(text.len())
}
