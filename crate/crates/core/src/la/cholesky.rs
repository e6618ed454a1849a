//! Up-looking sparse Cholesky factorization with a minimum-degree ordering.

use crate::error::{Error, Result};
use crate::la::ordering::minimum_degree;
use crate::la::SparseMatrix;

/// `P A Pᵀ = L Lᵀ` with `L` stored by columns, diagonal first.
#[derive(Debug, Clone)]
pub struct SparseCholesky {
    n: usize,
    perm: Vec<usize>,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

const SYMMETRY_TOL: f64 = 1e-12;

impl SparseCholesky {
    /// Factorizes a symmetric positive definite matrix.
    pub fn factorize(a: &SparseMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Cholesky needs a square matrix, got {}x{}",
                a.n_rows(),
                a.n_cols()
            )));
        }
        if let Some((row, col)) = a.asymmetry(SYMMETRY_TOL) {
            return Err(Error::NotSymmetric { row, col });
        }
        let perm = minimum_degree(a);
        Self::factorize_with_ordering(a, perm)
    }

    pub fn factorize_with_ordering(a: &SparseMatrix, perm: Vec<usize>) -> Result<Self> {
        let n = a.n_rows();
        assert_eq!(perm.len(), n);
        let c = a.permute_symmetric(&perm);
        let parent = etree(&c);

        // Column counts from the row patterns of L.
        let mut counts = vec![1usize; n];
        let mut stack = vec![0usize; n];
        let mut mark = vec![usize::MAX; n];
        for k in 0..n {
            let top = ereach(&c, k, &parent, &mut stack, &mut mark);
            for &i in &stack[top..] {
                counts[i] += 1;
            }
        }
        let mut col_ptr = vec![0usize; n + 1];
        for j in 0..n {
            col_ptr[j + 1] = col_ptr[j] + counts[j];
        }
        let nnz = col_ptr[n];
        let mut row_idx = vec![0usize; nnz];
        let mut values = vec![0.0; nnz];
        // next free slot in each column; slot 0 is reserved for the diagonal
        let mut next: Vec<usize> = col_ptr[..n].iter().map(|&p| p + 1).collect();

        let mut x = vec![0.0; n];
        mark.iter_mut().for_each(|m| *m = usize::MAX);
        for k in 0..n {
            let top = ereach(&c, k, &parent, &mut stack, &mut mark);
            let (cols, vals) = c.row(k);
            for (&i, &v) in cols.iter().zip(vals) {
                if i <= k {
                    x[i] = v;
                }
            }
            let diag = x[k];
            let mut d = diag;
            x[k] = 0.0;
            for &i in &stack[top..] {
                let lki = x[i] / values[col_ptr[i]];
                x[i] = 0.0;
                for p in col_ptr[i] + 1..next[i] {
                    x[row_idx[p]] -= values[p] * lki;
                }
                d -= lki * lki;
                let p = next[i];
                next[i] += 1;
                row_idx[p] = k;
                values[p] = lki;
            }
            // pivots at roundoff level relative to the diagonal mean the
            // matrix is singular in working precision
            if !(d > n as f64 * f64::EPSILON * diag.abs()) || !d.is_finite() {
                return Err(Error::NotPositiveDefinite {
                    column: perm[k],
                    pivot: d,
                });
            }
            row_idx[col_ptr[k]] = k;
            values[col_ptr[k]] = d.sqrt();
        }
        Ok(Self {
            n,
            perm,
            col_ptr,
            row_idx,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Number of stored entries of `L`.
    pub fn factor_nnz(&self) -> usize {
        self.values.len()
    }

    /// Dense copy of the triangular factor (for tests).
    pub fn factor_dense(&self) -> crate::la::DenseMatrix {
        let mut l = crate::la::DenseMatrix::zeros(self.n, self.n);
        for j in 0..self.n {
            for p in self.col_ptr[j]..self.col_ptr[j + 1] {
                l[(self.row_idx[p], j)] = self.values[p];
            }
        }
        l
    }

    /// Overwrites `b` with `A⁻¹ b`.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        // L y = Pb
        for j in 0..self.n {
            let start = self.col_ptr[j];
            y[j] /= self.values[start];
            let yj = y[j];
            for p in start + 1..self.col_ptr[j + 1] {
                y[self.row_idx[p]] -= self.values[p] * yj;
            }
        }
        // Lᵀ z = y
        for j in (0..self.n).rev() {
            let start = self.col_ptr[j];
            let mut s = y[j];
            for p in start + 1..self.col_ptr[j + 1] {
                s -= self.values[p] * y[self.row_idx[p]];
            }
            y[j] = s / self.values[start];
        }
        for (k, &p) in self.perm.iter().enumerate() {
            b[p] = y[k];
        }
    }
}

/// Elimination tree of a symmetric matrix, using its lower triangle by rows.
fn etree(c: &SparseMatrix) -> Vec<usize> {
    let n = c.n_rows();
    let mut parent = vec![usize::MAX; n];
    let mut ancestor = vec![usize::MAX; n];
    for k in 0..n {
        for &j in c.row(k).0 {
            if j >= k {
                break;
            }
            let mut i = j;
            while i != usize::MAX && i < k {
                let next = ancestor[i];
                ancestor[i] = k;
                if next == usize::MAX {
                    parent[i] = k;
                }
                i = next;
            }
        }
    }
    parent
}

/// Nonzero pattern of row `k` of `L` (excluding the diagonal), in topological
/// order, written to `stack[top..]`. `mark` uses `k` as the visit stamp.
fn ereach(
    c: &SparseMatrix,
    k: usize,
    parent: &[usize],
    stack: &mut [usize],
    mark: &mut [usize],
) -> usize {
    let n = c.n_rows();
    let mut top = n;
    mark[k] = k;
    let mut path = Vec::new();
    for &j in c.row(k).0 {
        if j >= k {
            break;
        }
        let mut i = j;
        path.clear();
        while mark[i] != k {
            path.push(i);
            mark[i] = k;
            i = parent[i];
        }
        while let Some(p) = path.pop() {
            top -= 1;
            stack[top] = p;
        }
    }
    top
}
