use std::time::Instant;

use crate::discretize::{ProblemConfig, SpaceOperators, TimeGrid};
use crate::error::{Error, Result};
use crate::la::{
    compress_dense, sparse_spd_factorize, LowRankMatrix, SparseFactorization, SparseMatrix,
};
use crate::reformulate::time_difference;
use crate::skpik::SolveReport;

use super::joint_rank;
use super::lowrank_vector::LowRankVector;
use super::minres::{minres, MinresOptions, MinresSpace};
use super::schur_hat::SchurHatApprox;

/// Default cap on the rank of each block of an iterate.
pub const DEFAULT_MAX_RANK: usize = 50;

/// The reduced optimality system `[[τ𝓜, √β𝓝ᵀ], [√β𝓝, −τ𝓜]]` acting on
/// factored iterates, preconditioned by `blockdiag(τ𝓜, βŜ)`.
#[derive(Debug, Clone)]
pub struct LowRankKktSpace {
    mass: SparseMatrix,
    stiffness: SparseMatrix,
    time_diff: SparseMatrix,
    mass_factor: SparseFactorization,
    schur: SchurHatApprox,
    tau: f64,
    sigma: f64,
    beta: f64,
    trunc_tol: f64,
    max_rank: usize,
}

impl LowRankKktSpace {
    pub fn new(
        ops: &SpaceOperators,
        config: &ProblemConfig,
        grid: &TimeGrid,
        trunc_tol: f64,
        max_rank: usize,
    ) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            mass: ops.mass.clone(),
            stiffness: ops.stiffness.clone(),
            time_diff: time_difference(grid.steps()),
            mass_factor: sparse_spd_factorize(&ops.mass)?,
            schur: SchurHatApprox::new(ops, config, grid)?,
            tau: grid.tau(),
            sigma: config.effective_sigma(),
            beta: config.beta,
            trunc_tol,
            max_rank,
        })
    }

    pub fn schur(&self) -> &SchurHatApprox {
        &self.schur
    }

    /// Operator application before compression.
    pub fn apply_exact(&self, v: &LowRankVector) -> LowRankVector {
        let (y1, y2) = (v.state.left(), v.state.right());
        let (z1, z2) = (v.multiplier.left(), v.multiplier.right());
        let sb = self.beta.sqrt();
        let (my, ky) = (self.mass.mul_dense(y1), self.stiffness.mul_dense(y1));
        let (mz, kz) = (self.mass.mul_dense(z1), self.stiffness.mul_dense(z1));
        let piece = |l, r| LowRankMatrix::new(l, r).expect("conformal factors");
        // τMY + √β(τKZ + σMZC)
        let state = LowRankMatrix::stack(&[
            (self.tau, &piece(my.clone(), y2.clone())),
            (sb * self.tau, &piece(kz, z2.clone())),
            (
                sb * self.sigma,
                &piece(mz.clone(), self.time_diff.mul_transpose_dense(z2)),
            ),
        ])
        .expect("blocks conform");
        // √β(τKY + σMYCᵀ) − τMZ
        let multiplier = LowRankMatrix::stack(&[
            (sb * self.tau, &piece(ky, y2.clone())),
            (sb * self.sigma, &piece(my, self.time_diff.mul_dense(y2))),
            (-self.tau, &piece(mz, z2.clone())),
        ])
        .expect("blocks conform");
        LowRankVector { state, multiplier }
    }
}

impl MinresSpace for LowRankKktSpace {
    type Vector = LowRankVector;

    fn apply(&self, v: &LowRankVector) -> LowRankVector {
        let out = self.apply_exact(v);
        LowRankVector::combine(&[(1.0, &out)], self.trunc_tol, self.max_rank)
            .expect("blocks conform")
    }

    fn precondition(&self, v: &LowRankVector) -> LowRankVector {
        let state = LowRankMatrix::new(
            self.mass_factor.solve_dense(v.state.left()) / self.tau,
            v.state.right().clone(),
        )
        .expect("conformal factors");
        let multiplier = if v.multiplier.rank() == 0 {
            v.multiplier.clone()
        } else {
            let dense = self.schur.apply_inverse(&v.multiplier.to_dense()) / self.beta;
            compress_dense(&dense, self.trunc_tol, self.max_rank)
        };
        LowRankVector { state, multiplier }
    }

    fn dot(&self, a: &LowRankVector, b: &LowRankVector) -> f64 {
        a.dot(b)
    }

    fn combine(&self, terms: &[(f64, &LowRankVector)]) -> LowRankVector {
        LowRankVector::combine(terms, self.trunc_tol, self.max_rank).expect("blocks conform")
    }

    fn zero_like(&self, v: &LowRankVector) -> LowRankVector {
        LowRankVector::zeros(v.n(), v.m_t())
    }

    fn residual_norm(&self, rhs: &LowRankVector, x: &LowRankVector) -> f64 {
        LowRankVector::stack(&[(1.0, rhs), (-1.0, &self.apply_exact(x))])
            .expect("blocks conform")
            .norm()
    }
}

/// Right-hand side `[τ𝓜 vec Y_d; 0]` in factored form.
pub fn lowrank_rhs(
    ops: &SpaceOperators,
    grid: &TimeGrid,
    desired: &LowRankMatrix,
) -> LowRankVector {
    LowRankVector {
        state: LowRankMatrix::new(
            ops.mass.mul_dense(desired.left()) * grid.tau(),
            desired.right().clone(),
        )
        .expect("conformal factors"),
        multiplier: LowRankMatrix::zeros(ops.n(), grid.steps()),
    }
}

/// Low-rank preconditioned MINRES on the reduced optimality system.
///
/// Every linear combination is recompressed to relative accuracy
/// `config.trunc_tol` with at most `max_rank` terms per block. Stops when
/// the true relative residual is `≤ tol` or after `config.max_iterations`.
/// The reported rank is that of `[Y, Λ/√β]` after truncating singular values
/// below `config.trunc_tol`.
pub fn lrminres_solve(
    ops: &SpaceOperators,
    config: &ProblemConfig,
    grid: &TimeGrid,
    desired: &LowRankMatrix,
    tol: f64,
    max_rank: usize,
) -> Result<(LowRankVector, SolveReport)> {
    lrminres_solve_observed(ops, config, grid, desired, tol, max_rank, |_, _| {})
}

/// [`lrminres_solve`] with a hook that sees every iterate.
pub fn lrminres_solve_observed(
    ops: &SpaceOperators,
    config: &ProblemConfig,
    grid: &TimeGrid,
    desired: &LowRankMatrix,
    tol: f64,
    max_rank: usize,
    observer: impl FnMut(usize, &LowRankVector),
) -> Result<(LowRankVector, SolveReport)> {
    let start = Instant::now();
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if (desired.n_rows(), desired.n_cols()) != (ops.n(), grid.steps()) {
        return Err(Error::DimensionMismatch(format!(
            "desired state is {}x{}, expected {}x{}",
            desired.n_rows(),
            desired.n_cols(),
            ops.n(),
            grid.steps()
        )));
    }
    let space = LowRankKktSpace::new(ops, config, grid, config.trunc_tol, max_rank)?;
    let rhs = lowrank_rhs(ops, grid, desired);
    let outcome = minres(
        &space,
        &rhs,
        MinresOptions {
            tol,
            max_iterations: config.max_iterations,
        },
        observer,
    )?;
    let x = outcome.solution;
    let report = SolveReport {
        rank: joint_rank(&x.state, &x.multiplier, config.trunc_tol),
        iterations: outcome.iterations,
        residual: outcome.residual,
        seconds: start.elapsed().as_secs_f64(),
        history: outcome.history,
        subspace_dims: (0, 0),
        converged: outcome.converged,
        absolute_residual: rhs.norm() == 0.0,
        stagnated: false,
        step_iterations: vec![],
    };
    Ok((x, report))
}
