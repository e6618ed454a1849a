//! Left-looking sparse LU with partial pivoting (Gilbert–Peierls).

use crate::error::{Error, Result};
use crate::la::ordering::minimum_degree;
use crate::la::SparseMatrix;

/// `P A Q = L U` with unit lower `L` and upper `U`, both stored by columns.
///
/// `L` keeps its unit diagonal as the first entry of each column, `U` keeps
/// the pivot as the last entry of each column.
#[derive(Debug, Clone)]
pub struct SparseLu {
    n: usize,
    /// row_perm_inv[i] = pivot position of original row i
    row_perm_inv: Vec<usize>,
    /// col_perm[k] = original column eliminated at step k
    col_perm: Vec<usize>,
    l_ptr: Vec<usize>,
    l_idx: Vec<usize>,
    l_val: Vec<f64>,
    u_ptr: Vec<usize>,
    u_idx: Vec<usize>,
    u_val: Vec<f64>,
}

impl SparseLu {
    pub fn factorize(a: &SparseMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "LU needs a square matrix, got {}x{}",
                a.n_rows(),
                a.n_cols()
            )));
        }
        let q = minimum_degree(a);
        Self::factorize_with_ordering(a, q)
    }

    pub fn factorize_with_ordering(a: &SparseMatrix, col_perm: Vec<usize>) -> Result<Self> {
        let n = a.n_rows();
        // CSR of Aᵀ is CSC of A
        let csc = a.transpose();
        let singular_tol = (n.max(1) as f64) * f64::EPSILON * a.max_abs();

        let mut pinv = vec![usize::MAX; n];
        let mut l_ptr = vec![0usize];
        let mut l_idx = Vec::with_capacity(4 * a.nnz());
        let mut l_val = Vec::with_capacity(4 * a.nnz());
        let mut u_ptr = vec![0usize];
        let mut u_idx = Vec::with_capacity(4 * a.nnz());
        let mut u_val = Vec::with_capacity(4 * a.nnz());

        let mut x = vec![0.0; n];
        let mut xi = vec![0usize; n];
        let mut marked = vec![false; n];
        let mut dfs_stack: Vec<(usize, usize)> = Vec::new();

        for (k, &col) in col_perm.iter().enumerate() {
            let (rows, vals) = csc.row(col);

            // pattern of x = L \ A(:, col) in topological order: xi[top..]
            let mut top = n;
            for &r in rows {
                if !marked[r] {
                    top = dfs(
                        r,
                        &l_ptr,
                        &l_idx,
                        &pinv,
                        &mut marked,
                        &mut xi,
                        top,
                        &mut dfs_stack,
                    );
                }
            }
            for &i in &xi[top..] {
                marked[i] = false;
                x[i] = 0.0;
            }
            for (&r, &v) in rows.iter().zip(vals) {
                x[r] = v;
            }
            for &j in &xi[top..] {
                let jj = pinv[j];
                if jj == usize::MAX {
                    continue;
                }
                // unit diagonal stored first
                let xj = x[j];
                for p in l_ptr[jj] + 1..l_ptr[jj + 1] {
                    x[l_idx[p]] -= l_val[p] * xj;
                }
            }

            let mut pivot_row = usize::MAX;
            let mut best = -1.0;
            for &i in &xi[top..] {
                if pinv[i] == usize::MAX {
                    if x[i].abs() > best {
                        best = x[i].abs();
                        pivot_row = i;
                    }
                } else {
                    u_idx.push(pinv[i]);
                    u_val.push(x[i]);
                }
            }
            if pivot_row == usize::MAX || best <= singular_tol {
                return Err(Error::Singular { column: col });
            }
            // prefer the diagonal when it is as large as the best candidate
            if pinv[col] == usize::MAX && x[col].abs() >= best {
                pivot_row = col;
            }
            let pivot = x[pivot_row];
            u_idx.push(k);
            u_val.push(pivot);
            u_ptr.push(u_idx.len());
            pinv[pivot_row] = k;

            l_idx.push(pivot_row);
            l_val.push(1.0);
            for &i in &xi[top..] {
                if pinv[i] == usize::MAX {
                    l_idx.push(i);
                    l_val.push(x[i] / pivot);
                }
                x[i] = 0.0;
            }
            l_ptr.push(l_idx.len());
        }
        for r in &mut l_idx {
            *r = pinv[*r];
        }
        Ok(Self {
            n,
            row_perm_inv: pinv,
            col_perm,
            l_ptr,
            l_idx,
            l_val,
            u_ptr,
            u_idx,
            u_val,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn column_permutation(&self) -> &[usize] {
        &self.col_perm
    }

    pub fn factor_nnz(&self) -> usize {
        self.l_val.len() + self.u_val.len()
    }

    /// Overwrites `b` with `A⁻¹ b`.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        let mut y = vec![0.0; self.n];
        for (i, &bi) in b.iter().enumerate() {
            y[self.row_perm_inv[i]] = bi;
        }
        for j in 0..self.n {
            let yj = y[j];
            for p in self.l_ptr[j] + 1..self.l_ptr[j + 1] {
                y[self.l_idx[p]] -= self.l_val[p] * yj;
            }
        }
        for j in (0..self.n).rev() {
            let last = self.u_ptr[j + 1] - 1;
            y[j] /= self.u_val[last];
            let yj = y[j];
            for p in self.u_ptr[j]..last {
                y[self.u_idx[p]] -= self.u_val[p] * yj;
            }
        }
        for (k, &c) in self.col_perm.iter().enumerate() {
            b[c] = y[k];
        }
    }

    /// Overwrites `b` with `A⁻ᵀ b`.
    pub fn solve_transpose_in_place(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        let mut y: Vec<f64> = self.col_perm.iter().map(|&c| b[c]).collect();
        // Uᵀ z = y (forward, Uᵀ lower triangular)
        for j in 0..self.n {
            let last = self.u_ptr[j + 1] - 1;
            let mut s = y[j];
            for p in self.u_ptr[j]..last {
                s -= self.u_val[p] * y[self.u_idx[p]];
            }
            y[j] = s / self.u_val[last];
        }
        // Lᵀ w = z (backward, unit diagonal)
        for j in (0..self.n).rev() {
            let mut s = y[j];
            for p in self.l_ptr[j] + 1..self.l_ptr[j + 1] {
                s -= self.l_val[p] * y[self.l_idx[p]];
            }
            y[j] = s;
        }
        for (i, bi) in b.iter_mut().enumerate() {
            *bi = y[self.row_perm_inv[i]];
        }
    }
}

/// Depth-first search in the graph of `L` (node `j` links to the rows of
/// column `pinv[j]`), pushing finished nodes onto `xi[..top]`.
#[allow(clippy::too_many_arguments)]
fn dfs(
    start: usize,
    l_ptr: &[usize],
    l_idx: &[usize],
    pinv: &[usize],
    marked: &mut [bool],
    xi: &mut [usize],
    mut top: usize,
    stack: &mut Vec<(usize, usize)>,
) -> usize {
    let children = |j: usize| -> (usize, usize) {
        match pinv[j] {
            usize::MAX => (0, 0),
            jj => (l_ptr[jj] + 1, l_ptr[jj + 1]),
        }
    };
    marked[start] = true;
    stack.clear();
    stack.push((start, children(start).0));
    while let Some(&(j, mut next)) = stack.last() {
        let end = children(j).1;
        let mut child = None;
        while next < end {
            let i = l_idx[next];
            next += 1;
            if !marked[i] {
                child = Some(i);
                break;
            }
        }
        stack.last_mut().unwrap().1 = next;
        if let Some(i) = child {
            marked[i] = true;
            stack.push((i, children(i).0));
        } else {
            stack.pop();
            top -= 1;
            xi[top] = j;
        }
    }
    top
}
