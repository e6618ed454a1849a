use std::time::Instant;

use crate::error::{Error, Result};
use crate::la::{
    mgs_orthonormalize, solve_sylvester_dense, truncated_svd, DenseMatrix, LowRankMatrix,
};
use crate::reformulate::SylvesterProblem;

use super::report::SolveReport;
use super::residual::{relative, residual_norm};

/// Column range of the newest basis block, split into the part generated by
/// the operator (`forward`) and the part generated by its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct NewestBlock {
    start: usize,
    forward: usize,
    inverse: usize,
}

/// One side of the two-sided extended Krylov space.
#[derive(Debug, Clone)]
struct Side {
    basis: DenseMatrix,
    /// Operator applied to every basis column.
    image: DenseMatrix,
    projected: DenseMatrix,
    newest: NewestBlock,
}

impl Side {
    fn new(
        seed: &DenseMatrix,
        apply: impl Fn(&DenseMatrix) -> DenseMatrix,
        apply_inv: impl Fn(&DenseMatrix) -> DenseMatrix,
    ) -> Self {
        let forward = mgs_orthonormalize(seed, None);
        let inverse = mgs_orthonormalize(&apply_inv(&forward), Some(&forward));
        let basis = concat(&forward, &inverse);
        let image = apply(&basis);
        let projected = basis.transpose() * &image;
        Self {
            newest: NewestBlock {
                start: 0,
                forward: forward.ncols(),
                inverse: inverse.ncols(),
            },
            basis,
            image,
            projected,
        }
    }

    fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Appends the images of the newest block; returns the number of new columns.
    fn extend(
        &mut self,
        apply: impl Fn(&DenseMatrix) -> DenseMatrix,
        apply_inv: impl Fn(&DenseMatrix) -> DenseMatrix,
    ) -> usize {
        let NewestBlock {
            start,
            forward,
            inverse,
        } = self.newest;
        let old = self.dim();
        // the forward images are already stored
        let fwd_raw = self.image.columns(start, forward).into_owned();
        let inv_raw = apply_inv(&self.basis.columns(start + forward, inverse).into_owned());
        let fwd = mgs_orthonormalize(&fwd_raw, Some(&self.basis));
        let with_fwd = concat(&self.basis, &fwd);
        let inv = mgs_orthonormalize(&inv_raw, Some(&with_fwd));
        let added = concat(&fwd, &inv);
        let k = added.ncols();
        if k == 0 {
            self.newest = NewestBlock {
                start: old,
                forward: 0,
                inverse: 0,
            };
            return 0;
        }
        let new_image = apply(&added);
        let basis = concat(&with_fwd, &inv);
        let image = concat(&self.image, &new_image);

        let mut projected = DenseMatrix::zeros(old + k, old + k);
        projected
            .view_mut((0, 0), (old, old))
            .copy_from(&self.projected);
        projected
            .view_mut((0, old), (old + k, k))
            .copy_from(&(basis.transpose() * &new_image));
        projected
            .view_mut((old, 0), (k, old))
            .copy_from(&(added.transpose() * self.image.columns(0, old)));

        self.basis = basis;
        self.image = image;
        self.projected = projected;
        self.newest = NewestBlock {
            start: old,
            forward: fwd.ncols(),
            inverse: inv.ncols(),
        };
        k
    }
}

fn concat(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.columns_mut(0, a.ncols()).copy_from(a);
    out.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    out
}

/// Iteration state: orthonormal bases `U` (left, with `A`, `A⁻¹`) and `W`
/// (right, with `Bᵀ`, `B⁻ᵀ`), their projections and the latest projected
/// solution.
#[derive(Debug, Clone)]
pub struct KpikState {
    left: Side,
    right: Side,
    r1_proj: DenseMatrix,
    r2_proj: DenseMatrix,
    coefficients: DenseMatrix,
    rhs_norm: f64,
    sweeps: usize,
    history: Vec<f64>,
}

impl KpikState {
    /// Left basis `U` (`n × p`).
    pub fn u(&self) -> &DenseMatrix {
        &self.left.basis
    }

    /// Right basis `W` (`2m_T × q`).
    pub fn w(&self) -> &DenseMatrix {
        &self.right.basis
    }

    /// `UᵀAU`.
    pub fn projected_a(&self) -> &DenseMatrix {
        &self.left.projected
    }

    /// `WᵀBᵀW`.
    pub fn projected_b(&self) -> &DenseMatrix {
        &self.right.projected
    }

    /// Projected solution `Y` (`p × q`) of the latest sweep, so that the
    /// current iterate is `U·Y·Wᵀ`.
    pub fn coefficients(&self) -> &DenseMatrix {
        &self.coefficients
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn history(&self) -> &[f64] {
        &self.history
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.left.dim(), self.right.dim())
    }

    /// Current iterate as factors `(U·Y, W)`.
    pub fn iterate(&self) -> LowRankMatrix {
        LowRankMatrix::new(self.u() * &self.coefficients, self.w().clone())
            .expect("conformal factors")
    }
}

/// Seeds `U` from `[R₁, A⁻¹R₁]` and `W` from `[R₂, B⁻ᵀR₂]`.
pub fn skpik_init(problem: &SylvesterProblem) -> Result<KpikState> {
    let left = Side::new(
        problem.r1(),
        |x| problem.apply_a(x),
        |x| problem.apply_a_inv(x),
    );
    let right = Side::new(
        problem.r2(),
        |x| problem.apply_bt(x),
        |x| problem.apply_bt_inv(x),
    );
    if left.newest.forward == 0 || right.newest.forward == 0 {
        return Err(Error::EmptyBasis);
    }
    let r1_proj = left.basis.transpose() * problem.r1();
    let r2_proj = right.basis.transpose() * problem.r2();
    let coefficients = DenseMatrix::zeros(left.dim(), right.dim());
    Ok(KpikState {
        left,
        right,
        r1_proj,
        r2_proj,
        coefficients,
        rhs_norm: problem.rhs_norm(),
        sweeps: 0,
        history: Vec::new(),
    })
}

/// One sweep: extend both bases (except on the first sweep), solve the
/// projected equation `T_A·Y + Y·T_Bᵀ = (UᵀR₁)(WᵀR₂)ᵀ` and record the residual.
pub fn skpik_sweep(state: &mut KpikState, problem: &SylvesterProblem) -> Result<f64> {
    if state.sweeps > 0 {
        let added_left = state
            .left
            .extend(|x| problem.apply_a(x), |x| problem.apply_a_inv(x));
        let added_right = state
            .right
            .extend(|x| problem.apply_bt(x), |x| problem.apply_bt_inv(x));
        if added_left == 0 && added_right == 0 {
            return Err(Error::Stagnation {
                sweeps: state.sweeps,
            });
        }
        if added_left > 0 {
            state.r1_proj = state.left.basis.transpose() * problem.r1();
        }
        if added_right > 0 {
            state.r2_proj = state.right.basis.transpose() * problem.r2();
        }
    }
    let rhs = &state.r1_proj * state.r2_proj.transpose();
    state.coefficients =
        solve_sylvester_dense(&state.left.projected, &state.right.projected, &rhs)?;

    // X = U·(W·Yᵀ)ᵀ; reuse the stored A·U
    let x2 = state.w() * state.coefficients.transpose();
    let btx2 = problem.apply_bt(&x2);
    let absolute = residual_norm(
        &state.left.image,
        state.u(),
        &x2,
        &btx2,
        problem.r1(),
        problem.r2(),
    );
    let res = relative(absolute, state.rhs_norm);
    state.history.push(res);
    state.sweeps += 1;
    Ok(res)
}

/// Runs sweeps until the relative residual is at most `tol` or `max_sweeps`
/// is reached, then recompresses `(U·Y, W)` to singular values `≥ trunc_tol`.
///
/// Non-convergence and basis stagnation return the last iterate with
/// `converged = false`.
pub fn skpik_solve(
    problem: &SylvesterProblem,
    tol: f64,
    trunc_tol: f64,
    max_sweeps: usize,
) -> Result<(LowRankMatrix, SolveReport)> {
    let start = Instant::now();
    let (n, q) = (problem.n(), problem.n_cols());
    let rhs_norm = problem.rhs_norm();
    if rhs_norm == 0.0 {
        return Ok((
            LowRankMatrix::zeros(n, q),
            SolveReport {
                rank: 0,
                iterations: 0,
                residual: 0.0,
                seconds: start.elapsed().as_secs_f64(),
                history: vec![],
                subspace_dims: (0, 0),
                converged: true,
                absolute_residual: true,
                stagnated: false,
                step_iterations: vec![],
            },
        ));
    }
    let mut state = skpik_init(problem)?;
    let mut stagnated = false;
    while state.sweeps < max_sweeps {
        match skpik_sweep(&mut state, problem) {
            Ok(res) if res <= tol => break,
            Ok(_) => {}
            Err(Error::Stagnation { .. }) => {
                stagnated = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let x = truncated_svd(&state.iterate(), trunc_tol);
    let residual = super::residual::factored_residual(x.left(), x.right(), problem)?;
    let report = SolveReport {
        rank: x.rank(),
        iterations: state.sweeps,
        residual,
        seconds: start.elapsed().as_secs_f64(),
        history: state.history.clone(),
        subspace_dims: state.dims(),
        converged: residual <= tol,
        absolute_residual: false,
        stagnated,
        step_iterations: vec![],
    };
    Ok((x, report))
}
