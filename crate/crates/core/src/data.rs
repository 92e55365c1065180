//! Column-major data matrices and their CSV representation (header `X1..Xp`).

use crate::error::{Error, Result};
use crate::graph::NodeId;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    cols: Vec<Vec<f64>>,
}

impl DataMatrix {
    pub fn from_columns(cols: Vec<Vec<f64>>) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::DimensionMismatch("no columns".into()));
        }
        let n = cols[0].len();
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        Ok(DataMatrix { cols })
    }

    pub fn n(&self) -> usize {
        self.cols[0].len()
    }

    pub fn p(&self) -> u32 {
        self.cols.len() as u32
    }

    /// Column of variable `j` (1-based).
    pub fn col(&self, j: NodeId) -> &[f64] {
        &self.cols[(j - 1) as usize]
    }

    pub fn row(&self, r: usize) -> Vec<f64> {
        self.cols.iter().map(|c| c[r]).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let p = self.p();
        for j in 1..=p {
            if j > 1 {
                s.push(',');
            }
            write!(s, "X{j}").unwrap();
        }
        s.push('\n');
        for r in 0..self.n() {
            for j in 0..p as usize {
                if j > 0 {
                    s.push(',');
                }
                write!(s, "{}", self.cols[j][r]).unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty CSV".into()))?;
        let names: Vec<&str> = header.split(',').map(str::trim).collect();
        for (k, name) in names.iter().enumerate() {
            let expected = format!("X{}", k + 1);
            if *name != expected {
                return Err(Error::Parse(format!(
                    "expected header column {expected}, found {name}"
                )));
            }
        }
        let p = names.len();
        let mut cols: Vec<Vec<f64>> = vec![Vec::new(); p];
        for (lineno, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != p {
                return Err(Error::Parse(format!(
                    "row {}: expected {p} fields, found {}",
                    lineno + 2,
                    fields.len()
                )));
            }
            for (j, field) in fields.iter().enumerate() {
                let v: f64 = field.trim().parse().map_err(|_| {
                    Error::Parse(format!("row {}: invalid number {field:?}", lineno + 2))
                })?;
                if !v.is_finite() {
                    return Err(Error::Parse(format!(
                        "row {}: non-finite value {field:?}",
                        lineno + 2
                    )));
                }
                cols[j].push(v);
            }
        }
        DataMatrix::from_columns(cols)
    }
}
