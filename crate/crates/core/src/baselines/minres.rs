//! Preconditioned MINRES over an abstract vector space.

use crate::error::{Error, Result};

/// Operations MINRES needs from its vectors, operator and preconditioner.
pub trait MinresSpace {
    type Vector: Clone;

    fn apply(&self, v: &Self::Vector) -> Self::Vector;

    /// Applies the inverse of the (symmetric positive definite) preconditioner.
    fn precondition(&self, v: &Self::Vector) -> Self::Vector;

    fn dot(&self, a: &Self::Vector, b: &Self::Vector) -> f64;

    /// `Σ αᵢ·vᵢ`; implementations may compress the result.
    fn combine(&self, terms: &[(f64, &Self::Vector)]) -> Self::Vector;

    fn zero_like(&self, v: &Self::Vector) -> Self::Vector;

    fn norm(&self, v: &Self::Vector) -> f64 {
        self.dot(v, v).max(0.0).sqrt()
    }

    /// `‖rhs − A x‖`. Override when `combine` is lossy.
    fn residual_norm(&self, rhs: &Self::Vector, x: &Self::Vector) -> f64 {
        self.norm(&self.combine(&[(1.0, rhs), (-1.0, &self.apply(x))]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinresOptions {
    /// Target for `‖b − A x‖ / ‖b‖`.
    pub tol: f64,
    pub max_iterations: usize,
}

#[derive(Debug, Clone)]
pub struct MinresOutcome<V> {
    pub solution: V,
    pub iterations: usize,
    /// Preconditioned residual estimate `|η| / γ₁` after every iteration.
    pub history: Vec<f64>,
    /// True relative residual of the returned solution.
    pub residual: f64,
    pub converged: bool,
}

/// MINRES with zero initial guess (Elman–Silvester–Wathen recurrence).
///
/// The cheap preconditioned estimate triggers a check of the true Euclidean
/// residual; iteration continues until that one is below `tol` as well.
/// `observer` sees every iterate.
pub fn minres<S: MinresSpace>(
    space: &S,
    rhs: &S::Vector,
    options: MinresOptions,
    mut observer: impl FnMut(usize, &S::Vector),
) -> Result<MinresOutcome<S::Vector>> {
    let rhs_norm = space.norm(rhs);
    let mut x = space.zero_like(rhs);
    if rhs_norm == 0.0 {
        return Ok(MinresOutcome {
            solution: x,
            iterations: 0,
            history: vec![],
            residual: 0.0,
            converged: true,
        });
    }
    let true_residual = |x: &S::Vector| space.residual_norm(rhs, x) / rhs_norm;

    let mut v_prev = space.zero_like(rhs);
    let mut v = rhs.clone();
    let mut z = space.precondition(&v);
    let gamma1_sq = space.dot(&z, &v);
    if !(gamma1_sq > 0.0) {
        return Err(Error::IndefinitePreconditioner(gamma1_sq));
    }
    let gamma1 = gamma1_sq.sqrt();
    let (mut gamma_prev, mut gamma) = (1.0, gamma1);
    let mut eta = gamma1;
    let (mut s_prev, mut s) = (0.0, 0.0);
    let (mut c_prev, mut c) = (1.0, 1.0);
    let mut w_prev = space.zero_like(rhs);
    let mut w = space.zero_like(rhs);
    let mut history = Vec::new();
    let mut residual = 1.0;

    for j in 1..=options.max_iterations {
        let zj = space.combine(&[(1.0 / gamma, &z)]);
        let az = space.apply(&zj);
        let delta = space.dot(&az, &zj);
        let v_next = space.combine(&[
            (1.0, &az),
            (-delta / gamma, &v),
            (-gamma / gamma_prev, &v_prev),
        ]);
        let z_next = space.precondition(&v_next);
        let gamma_next_sq = space.dot(&z_next, &v_next);
        if gamma_next_sq < 0.0 {
            return Err(Error::IndefinitePreconditioner(gamma_next_sq));
        }
        let gamma_next = gamma_next_sq.sqrt();

        let alpha0 = c * delta - c_prev * s * gamma;
        let alpha1 = alpha0.hypot(gamma_next);
        let alpha2 = s * delta + c_prev * c * gamma;
        let alpha3 = s_prev * gamma;
        let (c_next, s_next) = (alpha0 / alpha1, gamma_next / alpha1);

        let w_next = space.combine(&[
            (1.0 / alpha1, &zj),
            (-alpha3 / alpha1, &w_prev),
            (-alpha2 / alpha1, &w),
        ]);
        x = space.combine(&[(1.0, &x), (c_next * eta, &w_next)]);
        eta *= -s_next;
        observer(j, &x);

        let estimate = eta.abs() / gamma1;
        history.push(estimate);
        if estimate <= options.tol || gamma_next == 0.0 {
            residual = true_residual(&x);
            if residual <= options.tol || gamma_next == 0.0 {
                return Ok(MinresOutcome {
                    solution: x,
                    iterations: j,
                    history,
                    residual,
                    converged: residual <= options.tol,
                });
            }
        }

        v_prev = std::mem::replace(&mut v, v_next);
        z = z_next;
        w_prev = std::mem::replace(&mut w, w_next);
        gamma_prev = std::mem::replace(&mut gamma, gamma_next);
        s_prev = std::mem::replace(&mut s, s_next);
        c_prev = std::mem::replace(&mut c, c_next);
    }
    if history.last().is_some_and(|&e| e > options.tol) {
        residual = true_residual(&x);
    }
    Ok(MinresOutcome {
        solution: x,
        iterations: options.max_iterations,
        history,
        residual,
        converged: residual <= options.tol,
    })
}
