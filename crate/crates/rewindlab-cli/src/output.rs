use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use rewindlab::circuit::{CircuitShape, RecycleTarget};
use rewindlab::{FidelityResult, Method};

use crate::args::Format;

/// One output row. The CSV header and the JSON keys follow the field order.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub family: String,
    pub q: u32,
    pub n: usize,
    pub m: usize,
    pub target: String,
    pub method: String,
    /// Decimal value, 15 significant digits.
    pub value: String,
    /// `p/q` for exact methods, empty otherwise.
    pub exact: String,
    pub stderr: String,
    /// Seed of Monte Carlo rows, empty otherwise.
    pub seed: String,
}

impl Row {
    pub fn new(shape: CircuitShape, target: RecycleTarget, method: Method, r: &FidelityResult, seed: u64) -> Row {
        Row {
            family: shape.family.short().into(),
            q: shape.q.get(),
            n: shape.n,
            m: shape.m,
            target: target.to_string(),
            method: method.name().into(),
            value: sig15(r.to_f64()),
            exact: r.value.exact().map(|x| x.to_string()).unwrap_or_default(),
            stderr: r.stderr.map(sig15).unwrap_or_default(),
            seed: if method == Method::Mc { seed.to_string() } else { String::new() },
        }
    }
}

/// Fixed-point decimal with 15 significant digits.
pub fn sig15(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let e = v.abs().log10().floor() as i32;
    if !(-6..=15).contains(&e) {
        return format!("{v:.14e}");
    }
    format!("{:.*}", (14 - e).max(0) as usize, v)
}

pub fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn write_rows<T: Serialize>(out: &mut dyn Write, rows: &[T], format: Format) -> io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            writeln!(out)?;
        }
    }
    Ok(())
}
