use nalgebra::Schur;

use crate::error::{Error, Result};
use crate::la::DenseMatrix;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 100;

/// Real Schur decomposition `a = q · t · qᵀ`.
///
/// `t` is quasi-upper-triangular: everything below the first subdiagonal is
/// exactly zero, and every nonzero subdiagonal entry starts a 2×2 block
/// holding a complex-conjugate eigenvalue pair. Two consecutive nonzero
/// subdiagonal entries never occur.
pub fn real_schur(a: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "Schur decomposition of a {}x{} matrix",
            n,
            a.ncols()
        )));
    }
    if n == 0 {
        return Ok((DenseMatrix::zeros(0, 0), DenseMatrix::zeros(0, 0)));
    }
    let max_iter = MAX_SWEEPS_PER_EIGENVALUE * n;
    let schur =
        Schur::try_new(a.clone(), f64::EPSILON, max_iter).ok_or(Error::SchurNoConvergence { n })?;
    let (q, mut t) = schur.unpack();

    for j in 0..n {
        for i in j + 2..n {
            t[(i, j)] = 0.0;
        }
    }
    // Any leftover adjacent subdiagonals mean the iteration stalled.
    let scale = t.norm();
    for i in 1..n {
        if t[(i, i - 1)].abs() <= f64::EPSILON * scale {
            t[(i, i - 1)] = 0.0;
        }
    }
    for i in 2..n {
        if t[(i, i - 1)] != 0.0 && t[(i - 1, i - 2)] != 0.0 {
            return Err(Error::SchurNoConvergence { n });
        }
    }
    Ok((q, t))
}

/// Diagonal block boundaries of a quasi-triangular matrix as (start, size).
pub fn diagonal_blocks(t: &DenseMatrix) -> Vec<(usize, usize)> {
    let n = t.nrows();
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            blocks.push((i, 2));
            i += 2;
        } else {
            blocks.push((i, 1));
            i += 1;
        }
    }
    blocks
}

/// Eigenvalues (re, im) of a quasi-triangular matrix read off its diagonal blocks.
pub fn quasi_triangular_eigenvalues(t: &DenseMatrix) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(t.nrows());
    for (s, size) in diagonal_blocks(t) {
        if size == 1 {
            out.push((t[(s, s)], 0.0));
        } else {
            let (a, b, c, d) = (t[(s, s)], t[(s, s + 1)], t[(s + 1, s)], t[(s + 1, s + 1)]);
            out.extend(eig2(a, b, c, d));
        }
    }
    out
}

pub(crate) fn eig2(a: f64, b: f64, c: f64, d: f64) -> [(f64, f64); 2] {
    let half_tr = 0.5 * (a + d);
    let disc = 0.25 * (a - d) * (a - d) + b * c;
    if disc >= 0.0 {
        let r = disc.sqrt();
        [(half_tr + r, 0.0), (half_tr - r, 0.0)]
    } else {
        let r = (-disc).sqrt();
        [(half_tr, r), (half_tr, -r)]
    }
}
