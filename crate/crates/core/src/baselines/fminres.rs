use std::time::Instant;

use nalgebra::DVector;

use crate::discretize::{ProblemConfig, SpaceOperators, TimeGrid};
use crate::error::{Error, Result};
use crate::la::{sparse_spd_factorize, DenseMatrix, SparseFactorization, SparseMatrix};
use crate::skpik::SolveReport;

use super::joint_rank_dense;
use super::minres::{minres, MinresOptions, MinresOutcome, MinresSpace};

/// One time step's saddle system `[[τM, 0, N], [0, τβM, −τM], [N, −τM, 0]]`
/// with `N = σM + τK`, on unknowns `(y, u, λ)`. Preconditioned by
/// `diag(τM, τβM, Ŝ)` with `Ŝ⁻¹ = τ D⁻¹ M D⁻¹` and `D = N + (τ/√β)M`.
#[derive(Debug, Clone)]
pub struct StepSystem {
    mass: SparseMatrix,
    coupled: SparseMatrix,
    mass_factor: SparseFactorization,
    schur_factor: SparseFactorization,
    tau: f64,
    beta: f64,
    sigma: f64,
}

impl StepSystem {
    pub fn new(ops: &SpaceOperators, config: &ProblemConfig, grid: &TimeGrid) -> Result<Self> {
        config.validate()?;
        let tau = grid.tau();
        let sigma = config.effective_sigma();
        let coupled = SparseMatrix::linear_combination(tau, &ops.stiffness, sigma, &ops.mass)?;
        let schur_block =
            SparseMatrix::linear_combination(1.0, &coupled, tau / config.beta.sqrt(), &ops.mass)?;
        let schur_factor = sparse_spd_factorize(&schur_block).map_err(|e| {
            Error::InvalidConfig(format!(
                "per-step Schur block σM + τK + (τ/√β)M is not positive definite: {e}"
            ))
        })?;
        Ok(Self {
            mass_factor: sparse_spd_factorize(&ops.mass)?,
            mass: ops.mass.clone(),
            coupled,
            schur_factor,
            tau,
            beta: config.beta,
            sigma,
        })
    }

    pub fn n(&self) -> usize {
        self.mass.n_rows()
    }

    /// Right-hand side `[τM y_d; 0; σM y_prev]`.
    pub fn rhs(&self, desired: &[f64], previous_state: &[f64]) -> DVector<f64> {
        let n = self.n();
        let mut out = DVector::zeros(3 * n);
        let md = self.mass.mul_vec(desired);
        let mp = self.mass.mul_vec(previous_state);
        for i in 0..n {
            out[i] = self.tau * md[i];
            out[2 * n + i] = self.sigma * mp[i];
        }
        out
    }

    /// The step matrix as a dense array (tests and small problems only).
    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.n();
        let m = self.mass.to_dense();
        let c = self.coupled.to_dense();
        let mut out = DenseMatrix::zeros(3 * n, 3 * n);
        out.view_mut((0, 0), (n, n)).copy_from(&(&m * self.tau));
        out.view_mut((0, 2 * n), (n, n)).copy_from(&c);
        out.view_mut((n, n), (n, n))
            .copy_from(&(&m * (self.tau * self.beta)));
        out.view_mut((n, 2 * n), (n, n))
            .copy_from(&(&m * -self.tau));
        out.view_mut((2 * n, 0), (n, n)).copy_from(&c);
        out.view_mut((2 * n, n), (n, n))
            .copy_from(&(&m * -self.tau));
        out
    }
}

impl MinresSpace for StepSystem {
    type Vector = DVector<f64>;

    fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        let n = self.n();
        let (y, u, l) = (
            &v.as_slice()[..n],
            &v.as_slice()[n..2 * n],
            &v.as_slice()[2 * n..],
        );
        let (my, mu, ml) = (
            self.mass.mul_vec(y),
            self.mass.mul_vec(u),
            self.mass.mul_vec(l),
        );
        let (ny, nl) = (self.coupled.mul_vec(y), self.coupled.mul_vec(l));
        let mut out = DVector::zeros(3 * n);
        for i in 0..n {
            out[i] = self.tau * my[i] + nl[i];
            out[n + i] = self.tau * self.beta * mu[i] - self.tau * ml[i];
            out[2 * n + i] = ny[i] - self.tau * mu[i];
        }
        out
    }

    fn precondition(&self, v: &DVector<f64>) -> DVector<f64> {
        let n = self.n();
        let mut out = v.clone();
        let s = out.as_mut_slice();
        self.mass_factor.solve_in_place(&mut s[..n]);
        self.mass_factor.solve_in_place(&mut s[n..2 * n]);
        let third = &mut s[2 * n..];
        self.schur_factor.solve_in_place(third);
        let mut w = self.mass.mul_vec(third);
        self.schur_factor.solve_in_place(&mut w);
        third.copy_from_slice(&w);
        for x in &mut s[..n] {
            *x /= self.tau;
        }
        for x in &mut s[n..2 * n] {
            *x /= self.tau * self.beta;
        }
        for x in &mut s[2 * n..] {
            *x *= self.tau;
        }
        out
    }

    fn dot(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        a.dot(b)
    }

    fn combine(&self, terms: &[(f64, &DVector<f64>)]) -> DVector<f64> {
        let mut out = DVector::zeros(3 * self.n());
        for &(alpha, v) in terms {
            out.axpy(alpha, v, 1.0);
        }
        out
    }

    fn zero_like(&self, v: &DVector<f64>) -> DVector<f64> {
        DVector::zeros(v.len())
    }
}

/// Solves one step to relative residual `tol`.
pub fn fminres_step(
    system: &StepSystem,
    desired: &[f64],
    previous_state: &[f64],
    tol: f64,
    max_iterations: usize,
) -> Result<MinresOutcome<DVector<f64>>> {
    let rhs = system.rhs(desired, previous_state);
    minres(
        system,
        &rhs,
        MinresOptions {
            tol,
            max_iterations,
        },
        |_, _| {},
    )
}

/// Sequential step-by-step solve. Returns the `3n × m_T` trajectory whose
/// column `m` stacks `(y_m, u_m, λ_m)`.
///
/// Each step only sees the previous state; the adjoint's backward coupling is
/// ignored, so for `m_T > 1` this is a heuristic and not the all-at-once
/// optimum. `iterations` is the total count; see
/// [`SolveReport::average_iterations`]. The reported residual is the largest
/// per-step relative residual.
pub fn fminres_solve(
    ops: &SpaceOperators,
    config: &ProblemConfig,
    grid: &TimeGrid,
    desired: &DenseMatrix,
    tol: f64,
) -> Result<(DenseMatrix, SolveReport)> {
    let start = Instant::now();
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let (n, m_t) = (ops.n(), grid.steps());
    if desired.shape() != (n, m_t) {
        return Err(Error::DimensionMismatch(format!(
            "desired state is {}x{}, expected {n}x{m_t}",
            desired.nrows(),
            desired.ncols()
        )));
    }
    let system = StepSystem::new(ops, config, grid)?;
    let mut trajectory = DenseMatrix::zeros(3 * n, m_t);
    let mut step_iterations = Vec::with_capacity(m_t);
    let mut history = Vec::with_capacity(m_t);
    let mut previous = vec![0.0; n];
    for m in 0..m_t {
        let outcome = fminres_step(
            &system,
            desired.column(m).as_slice(),
            &previous,
            tol,
            config.max_iterations,
        )?;
        if !outcome.converged {
            return Err(Error::StepNotConverged {
                step: m + 1,
                residual: outcome.residual,
            });
        }
        trajectory.set_column(m, &outcome.solution);
        previous.copy_from_slice(&outcome.solution.as_slice()[..n]);
        step_iterations.push(outcome.iterations);
        history.push(outcome.residual);
    }
    let state = trajectory.rows(0, n).into_owned();
    let multiplier = trajectory.rows(2 * n, n) / config.beta.sqrt();
    let report = SolveReport {
        rank: joint_rank_dense(&state, &multiplier, config.trunc_tol),
        iterations: step_iterations.iter().sum(),
        residual: history.iter().copied().fold(0.0, f64::max),
        seconds: start.elapsed().as_secs_f64(),
        history,
        subspace_dims: (0, 0),
        converged: true,
        absolute_residual: desired.norm() == 0.0,
        stagnated: false,
        step_iterations,
    };
    Ok((trajectory, report))
}
