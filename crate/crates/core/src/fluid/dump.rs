//! Plain-text field dumps: a header line `nx ny hx hy t` followed by one
//! comma-separated row per grid line `y_j`, bottom wall first. Each row
//! repeats the first column at `x = L` so the file covers the closed domain.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};

use crate::error::{Error, Result};
use crate::grid::{Field, Grid2D};

/// Parsed contents of a field dump.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldDump {
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    pub t: f64,
    /// `values[j][i]`, `j = 0` at the wall.
    pub values: Vec<Vec<f64>>,
}

pub fn write_field<W: Write>(out: &mut W, grid: &Grid2D, field: &Field, t: f64) -> Result<()> {
    let nx = grid.nx();
    let mut s = String::new();
    writeln!(s, "{} {} {:e} {:e} {:e}", nx + 1, grid.n + 1, grid.hx, grid.hy, t).unwrap();
    for j in 0..=grid.top() {
        let row = field.row(j);
        for (i, v) in row.iter().chain(std::iter::once(&row[0])).enumerate() {
            if i > 0 {
                s.push(',');
            }
            write!(s, "{v:e}").unwrap();
        }
        s.push('\n');
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

pub fn read_field<R: Read>(input: R) -> Result<FieldDump> {
    let bad = |m: &str| Error::InvalidArgument(format!("malformed field dump: {m}"));
    let mut lines = BufReader::new(input).lines();
    let header = lines.next().ok_or_else(|| bad("missing header"))??;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 5 {
        return Err(bad("header needs five entries"));
    }
    let nx: usize = h[0].parse().map_err(|_| bad("nx"))?;
    let ny: usize = h[1].parse().map_err(|_| bad("ny"))?;
    let num = |k: usize| h[k].parse::<f64>().map_err(|_| bad("header value"));
    let (hx, hy, t) = (num(2)?, num(3)?, num(4)?);
    let mut values = Vec::with_capacity(ny);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| bad("value")))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != nx {
            return Err(bad("row length"));
        }
        values.push(row);
    }
    if values.len() != ny {
        return Err(bad("row count"));
    }
    Ok(FieldDump { nx, ny, hx, hy, t, values })
}
