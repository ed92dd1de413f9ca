//! Grid functions on disk: one text header line
//! `cmag-grid v1 n=<n> L=<L> f64-le re,im row-major x2-slow`
//! followed by `n * n` pairs of little-endian binary64 `(re, im)`.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use super::{Grid2D, GridFunction, NumopError};

const MAGIC: &str = "cmag-grid v1";
const LAYOUT: &str = "f64-le re,im row-major x2-slow";

pub fn write_grid_function(u: &GridFunction, mut out: impl Write) -> Result<(), NumopError> {
    let g = u.grid();
    writeln!(out, "{MAGIC} n={} L={:?} {LAYOUT}", g.n(), g.half_width())?;
    let mut bytes = Vec::with_capacity(16 * u.values().len());
    for v in u.values() {
        bytes.extend_from_slice(&v.re.to_le_bytes());
        bytes.extend_from_slice(&v.im.to_le_bytes());
    }
    out.write_all(&bytes)?;
    Ok(())
}

pub fn read_grid_function(mut input: impl BufRead) -> Result<GridFunction, NumopError> {
    let mut header = String::new();
    input.read_line(&mut header)?;
    let bad = || NumopError::Format(format!("unrecognized header {:?}", header.trim_end()));
    let rest = header.trim_end().strip_prefix(MAGIC).ok_or_else(bad)?;
    let mut n = None;
    let mut l = None;
    for field in rest.split_whitespace() {
        if let Some(v) = field.strip_prefix("n=") {
            n = v.parse::<usize>().ok();
        } else if let Some(v) = field.strip_prefix("L=") {
            l = v.parse::<f64>().ok();
        }
    }
    let grid = Grid2D::new(l.ok_or_else(bad)?, n.ok_or_else(bad)?)?;
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if bytes.len() != 16 * grid.len() {
        return Err(NumopError::Format(format!(
            "expected {} bytes of samples, found {}",
            16 * grid.len(),
            bytes.len()
        )));
    }
    let f = |b: &[u8]| f64::from_le_bytes(b.try_into().expect("8-byte chunk"));
    let values = bytes
        .chunks_exact(16)
        .map(|c| Complex64::new(f(&c[..8]), f(&c[8..])))
        .collect();
    GridFunction::new(grid, values)
}
