//! Sampled functions as CSV with columns x, re, im.

use std::io::{Read, Write};

use dunkl_core::operators::{Grid1D, GridFunction1D};
use num_complex::Complex64;

use crate::HarnessError;

/// Reads samples on a midpoint grid; the grid is recovered from the x column.
pub fn read_grid_function<R: Read>(input: R, k: f64) -> Result<GridFunction1D, HarnessError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let mut xs = Vec::new();
    let mut values = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| HarnessError::Config(format!("csv line {}: {e}", i + 2)))?;
        let field = |j: usize| -> Result<f64, HarnessError> {
            match rec.get(j) {
                None if j == 2 => Ok(0.0),
                None => Err(HarnessError::Config(format!("csv line {}: missing column {j}", i + 2))),
                Some(s) => s
                    .parse::<f64>()
                    .map_err(|e| HarnessError::Config(format!("csv line {}: {s:?}: {e}", i + 2))),
            }
        };
        xs.push(field(0)?);
        values.push(Complex64::new(field(1)?, field(2)?));
    }
    let n = xs.len();
    if n < 2 {
        return Err(HarnessError::Config("need at least two samples".into()));
    }
    let dx = (xs[n - 1] - xs[0]) / (n - 1) as f64;
    let grid = Grid1D::new(n, n as f64 * dx / 2.0).map_err(|e| HarnessError::Config(e.to_string()))?;
    for (j, x) in xs.iter().enumerate() {
        if (x - grid.node(j)).abs() > 1e-9 * grid.half_width() {
            return Err(HarnessError::Config(format!(
                "x = {x} at row {j} is off the symmetric midpoint grid (expected {})",
                grid.node(j)
            )));
        }
    }
    GridFunction1D::new(grid, k, values).map_err(|e| HarnessError::Config(e.to_string()))
}

pub fn write_grid_function<W: Write>(f: &GridFunction1D, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| HarnessError::Compute(e.to_string());
    w.write_record(["x", "re", "im"]).map_err(io)?;
    for (x, v) in f.grid.nodes().iter().zip(&f.values) {
        w.write_record([x.to_string(), v.re.to_string(), v.im.to_string()]).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let grid = Grid1D::new(64, 3.0).unwrap();
        let f = GridFunction1D::from_fn(grid, 0.5, |x| Complex64::new(x.cos(), x / 3.0)).unwrap();
        let mut buf = Vec::new();
        write_grid_function(&f, &mut buf).unwrap();
        let back = read_grid_function(buf.as_slice(), 0.5).unwrap();
        assert_eq!(back.grid.len(), 64);
        assert!((back.grid.half_width() - 3.0).abs() < 1e-12);
        assert!(back.sup_distance(&f) < 1e-15);
    }

    #[test]
    fn rejects_an_offset_grid() {
        let text: String = (0..64).map(|j| format!("{j},1,0\n")).collect();
        let err = read_grid_function(format!("x,re,im\n{text}").as_bytes(), 0.0).unwrap_err();
        assert!(err.to_string().contains("midpoint grid"), "{err}");
    }
}
