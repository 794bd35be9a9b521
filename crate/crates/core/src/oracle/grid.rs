use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Samples of a function on a uniform grid over an interval or a box.
///
/// Values are stored row-major with the last axis fastest; every axis carries
/// `n` samples including both endpoints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    lo: Vec<f64>,
    hi: Vec<f64>,
    n: usize,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, n: usize, values: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::Argument("box corners must have the same nonzero dimension".into()));
        }
        if n < 2 {
            return Err(Error::Argument(format!("need at least 2 samples per axis, got {n}")));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite()) {
            return Err(Error::Argument("every axis needs finite lo < hi".into()));
        }
        let len = n
            .checked_pow(lo.len() as u32)
            .ok_or_else(|| Error::GridTooLarge(format!("{n}^{} samples", lo.len())))?;
        if values.len() != len {
            return Err(Error::Argument(format!("expected {len} values, got {}", values.len())));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Argument(format!("value {i} is not finite")));
        }
        Ok(Self { lo, hi, n, values })
    }

    pub fn interval(a: f64, b: f64, values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        Self::new(vec![a], vec![b], n, values)
    }

    pub fn sample_interval(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Argument(format!("need at least 2 samples, got {n}")));
        }
        let h = (b - a) / (n - 1) as f64;
        let values = (0..n).map(|i| f(if i == n - 1 { b } else { a + h * i as f64 })).collect();
        Self::interval(a, b, values)
    }

    pub fn sample_box(lo: &[f64], hi: &[f64], n: usize, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let d = lo.len();
        let len = n
            .checked_pow(d as u32)
            .filter(|&l| l <= 200_000_000)
            .ok_or_else(|| Error::GridTooLarge(format!("{n}^{d} samples")))?;
        let mut values = Vec::with_capacity(len);
        let mut x = vec![0.0; d];
        let mut idx = vec![0usize; d];
        for _ in 0..len {
            for k in 0..d {
                x[k] = lo[k] + (hi[k] - lo[k]) * idx[k] as f64 / (n - 1) as f64;
            }
            values.push(f(&x));
            for k in (0..d).rev() {
                idx[k] += 1;
                if idx[k] < n {
                    break;
                }
                idx[k] = 0;
            }
        }
        Self::new(lo.to_vec(), hi.to_vec(), n, values)
    }

    /// Same grid, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.lo.clone(), self.hi.clone(), self.n, values)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn step(&self, axis: usize) -> f64 {
        (self.hi[axis] - self.lo[axis]) / (self.n - 1) as f64
    }

    /// Step of the first axis.
    pub fn h(&self) -> f64 {
        self.step(0)
    }

    /// Coordinate of sample `i` along the first axis.
    pub fn x(&self, i: usize) -> f64 {
        if i == self.n - 1 {
            self.hi[0]
        } else {
            self.lo[0] + self.h() * i as f64
        }
    }

    /// Index of the sample nearest to `x` on a one-dimensional grid.
    pub fn index_of(&self, x: f64) -> usize {
        (((x - self.lo[0]) / self.h()).round().max(0.0) as usize).min(self.n - 1)
    }

    /// Coordinates of the flat index `flat`.
    pub fn point(&self, mut flat: usize) -> Vec<f64> {
        let d = self.dim();
        let mut x = vec![0.0; d];
        for k in (0..d).rev() {
            let i = flat % self.n;
            flat /= self.n;
            x[k] = self.lo[k] + self.step(k) * i as f64;
        }
        x
    }

    pub(crate) fn require_1d(&self) -> Result<()> {
        if self.dim() == 1 {
            Ok(())
        } else {
            Err(Error::Argument(format!("expected a one-dimensional grid, got dimension {}", self.dim())))
        }
    }

    pub(crate) fn require_cubic(&self) -> Result<f64> {
        let h = self.step(0);
        for k in 1..self.dim() {
            if (self.step(k) - h).abs() > 1e-12 * h {
                return Err(Error::Argument("box grids must have equal steps on every axis".into()));
            }
        }
        Ok(h)
    }

    /// Writes `x,value` rows (or `x0,..,x{d-1},value`) with a header line.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let d = self.dim();
        let mut header: Vec<String> = if d == 1 {
            vec!["x".into()]
        } else {
            (0..d).map(|k| format!("x{k}")).collect()
        };
        header.push("value".into());
        wtr.write_record(&header)?;
        for (i, v) in self.values.iter().enumerate() {
            let mut row: Vec<String> = self.point(i).iter().map(|x| format!("{x:e}")).collect();
            row.push(format!("{v:e}"));
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Reads what [`GridFunction::write_csv`] writes.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
        let cols = rdr.headers()?.len();
        if cols < 2 {
            return Err(Error::Parse("expected at least two columns".into()));
        }
        let d = cols - 1;
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|s| s.parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|_| Error::Parse(format!("row {} is not numeric", i + 2)))?;
            if row.len() != cols {
                return Err(Error::Parse(format!("row {} has {} columns", i + 2, row.len())));
            }
            rows.push(row);
        }
        let n = (rows.len() as f64).powf(1.0 / d as f64).round() as usize;
        if n < 2 || n.pow(d as u32) != rows.len() {
            return Err(Error::Parse(format!("{} rows do not form a {d}-dimensional grid", rows.len())));
        }
        let lo = rows[0][..d].to_vec();
        let hi = rows[rows.len() - 1][..d].to_vec();
        let g = Self::new(lo, hi, n, rows.iter().map(|r| r[d]).collect())?;
        for (i, r) in rows.iter().enumerate() {
            let p = g.point(i);
            for k in 0..d {
                if (p[k] - r[k]).abs() > 1e-9 * (1.0 + p[k].abs()) {
                    return Err(Error::Parse(format!("row {} is off the uniform grid", i + 2)));
                }
            }
        }
        Ok(g)
    }

    pub fn to_csv_path(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}
