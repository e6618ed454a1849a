//! Bartels–Stewart solver for small dense Sylvester equations.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::la::schur::{diagonal_blocks, eig2, real_schur};
use crate::la::DenseMatrix;

/// Relative gap below which `λ(ta) + λ(tb)` counts as zero.
const SEPARATION_TOL: f64 = 1e3 * f64::EPSILON;

/// Solves `ta · Y + Y · tbᵀ = c` by Bartels–Stewart on the real Schur forms
/// of `ta` and `tb`.
///
/// Fails with [`Error::SylvesterSingular`] when an eigenvalue of `ta` nearly
/// cancels an eigenvalue of `tb`.
pub fn solve_sylvester_dense(
    ta: &DenseMatrix,
    tb: &DenseMatrix,
    c: &DenseMatrix,
) -> Result<DenseMatrix> {
    let (p, q) = (ta.nrows(), tb.nrows());
    if ta.ncols() != p || tb.ncols() != q || c.shape() != (p, q) {
        return Err(Error::DimensionMismatch(format!(
            "Sylvester equation with {}x{} left, {}x{} right and {}x{} data",
            ta.nrows(),
            ta.ncols(),
            tb.nrows(),
            tb.ncols(),
            c.nrows(),
            c.ncols()
        )));
    }
    if p == 0 || q == 0 {
        return Ok(DenseMatrix::zeros(p, q));
    }
    let (qa, sa) = real_schur(ta)?;
    let (qb, sb) = real_schur(tb)?;
    let ct = qa.transpose() * c * &qb;
    let y = solve_quasi_triangular(&sa, &sb, ct, ta.norm() + tb.norm())?;
    Ok(&qa * y * qb.transpose())
}

/// Solves `sa · Y + Y · sbᵀ = c` for quasi-upper-triangular `sa`, `sb`.
fn solve_quasi_triangular(
    sa: &DenseMatrix,
    sb: &DenseMatrix,
    c: DenseMatrix,
    scale: f64,
) -> Result<DenseMatrix> {
    let (p, q) = (sa.nrows(), sb.nrows());
    let a_blocks = diagonal_blocks(sa);
    let b_blocks = diagonal_blocks(sb);
    let mut y = DenseMatrix::zeros(p, q);

    for &(j0, bj) in b_blocks.iter().rev() {
        let tail = j0 + bj;
        // F = C_J − Y_{:, J+} · sb[J, J+]ᵀ
        let mut f = c.columns(j0, bj).into_owned();
        if tail < q {
            let coupling = sb.view((j0, tail), (bj, q - tail));
            f -= y.columns(tail, q - tail) * coupling.transpose();
        }
        let b_eigs = block_eigs(sb, j0, bj);

        for &(i0, bi) in a_blocks.iter().rev() {
            let itail = i0 + bi;
            let mut rhs = f.rows(i0, bi).into_owned();
            if itail < p {
                let coupling = sa.view((i0, itail), (bi, p - itail));
                rhs -= coupling * y.view((itail, j0), (p - itail, bj));
            }
            for &(lr, li) in &block_eigs(sa, i0, bi) {
                for &(mr, mi) in &b_eigs {
                    let gap = ((lr + mr).powi(2) + (li + mi).powi(2)).sqrt();
                    if gap <= SEPARATION_TOL * scale {
                        return Err(Error::SylvesterSingular { re: lr, im: li });
                    }
                }
            }
            let z = solve_small(sa, i0, bi, sb, j0, bj, &rhs)?;
            y.view_mut((i0, j0), (bi, bj)).copy_from(&z);
        }
    }
    Ok(y)
}

fn block_eigs(t: &DenseMatrix, s: usize, size: usize) -> Vec<(f64, f64)> {
    if size == 1 {
        vec![(t[(s, s)], 0.0)]
    } else {
        eig2(t[(s, s)], t[(s, s + 1)], t[(s + 1, s)], t[(s + 1, s + 1)]).to_vec()
    }
}

/// Solves `A_II Z + Z B_JJᵀ = rhs` for blocks of size at most 2×2 via its
/// Kronecker form `(I ⊗ A_II + B_JJ ⊗ I) vec Z = vec rhs`.
fn solve_small(
    sa: &DenseMatrix,
    i0: usize,
    bi: usize,
    sb: &DenseMatrix,
    j0: usize,
    bj: usize,
    rhs: &DenseMatrix,
) -> Result<DenseMatrix> {
    if bi == 1 && bj == 1 {
        let d = sa[(i0, i0)] + sb[(j0, j0)];
        return Ok(DenseMatrix::from_element(1, 1, rhs[(0, 0)] / d));
    }
    let m = bi * bj;
    let mut k = DMatrix::<f64>::zeros(m, m);
    for jb in 0..bj {
        for ib in 0..bi {
            let row = ib + jb * bi;
            for ia in 0..bi {
                k[(row, ia + jb * bi)] += sa[(i0 + ib, i0 + ia)];
            }
            for ja in 0..bj {
                k[(row, ib + ja * bi)] += sb[(j0 + jb, j0 + ja)];
            }
        }
    }
    let b = DVector::from_column_slice(rhs.as_slice());
    let sol = k.lu().solve(&b).ok_or_else(|| {
        let e = block_eigs(sa, i0, bi)[0];
        Error::SylvesterSingular { re: e.0, im: e.1 }
    })?;
    Ok(DenseMatrix::from_column_slice(bi, bj, sol.as_slice()))
}
