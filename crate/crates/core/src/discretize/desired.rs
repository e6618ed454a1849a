use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::la::{compress_dense, DenseMatrix, LowRankMatrix};

use super::config::TimeGrid;
use super::mesh::Mesh2D;

/// Source of the desired state `Y_d`.
#[derive(Debug, Clone, PartialEq)]
pub enum DesiredState {
    /// First component of the split-domain field; zero on `{x₁ ≤ x₂}`.
    Ex1,
    /// `sin(πx₁)·sin(πx₂)`.
    Ex2Slice,
    /// Whitespace-separated `n × m_T` table.
    File(PathBuf),
}

impl FromStr for DesiredState {
    type Err = Error;

    /// Accepts `ex1`, `ex2`, `ex2-slice` or `file:PATH`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ex1" => Ok(Self::Ex1),
            "ex2" | "ex2-slice" => Ok(Self::Ex2Slice),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(Self::File(PathBuf::from(p))),
                _ => Err(Error::UnknownExample(s.to_string())),
            },
        }
    }
}

pub fn ex1_value(x1: f64, x2: f64) -> f64 {
    if x1 > x2 {
        (2.0 * PI * x1).sin() + 2.0 * PI * (2.0 * PI * x1).cos() * (x1 - x2)
    } else {
        0.0
    }
}

pub fn ex2_value(x1: f64, x2: f64) -> f64 {
    (PI * x1).sin() * (PI * x2).sin()
}

/// Samples `Y_d` at the mesh nodes (rows) for every time step (columns).
pub fn sample_desired_state(
    example: &DesiredState,
    mesh: &Mesh2D,
    grid: &TimeGrid,
) -> Result<DenseMatrix> {
    let n = mesh.n_nodes();
    let m_t = grid.steps();
    let profile = |f: fn(f64, f64) -> f64| {
        let column: Vec<f64> = mesh.nodes.iter().map(|&[x1, x2]| f(x1, x2)).collect();
        DenseMatrix::from_fn(n, m_t, |i, _| column[i])
    };
    match example {
        DesiredState::Ex1 => Ok(profile(ex1_value)),
        DesiredState::Ex2Slice => Ok(profile(ex2_value)),
        DesiredState::File(path) => read_table(path, n, m_t),
    }
}

/// Reads an `n_rows × n_cols` whitespace-separated table.
pub fn read_table(path: impl AsRef<Path>, n_rows: usize, n_cols: usize) -> Result<DenseMatrix> {
    let path = path.as_ref();
    let err = |line: usize, message: String| Error::TableParse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let reader = BufReader::new(File::open(path)?);
    let mut out = DenseMatrix::zeros(n_rows, n_cols);
    let mut row = 0;
    let mut last_line = 0;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if row == n_rows {
            return Err(err(lineno, format!("more than the expected {n_rows} rows")));
        }
        let values = trimmed
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| err(lineno, format!("invalid number `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != n_cols {
            return Err(err(
                lineno,
                format!("expected {n_cols} columns, found {}", values.len()),
            ));
        }
        for (j, v) in values.into_iter().enumerate() {
            out[(row, j)] = v;
        }
        row += 1;
    }
    if row != n_rows {
        return Err(err(
            last_line,
            format!("expected {n_rows} rows, found {row}"),
        ));
    }
    Ok(out)
}

/// Minimal-rank factors with `‖Y₁Y₂ᵀ − yd‖_F ≤ tol·‖yd‖_F`.
pub fn lowrank_desired(yd: &DenseMatrix, tol: f64) -> LowRankMatrix {
    compress_dense(yd, tol, usize::MAX)
}
