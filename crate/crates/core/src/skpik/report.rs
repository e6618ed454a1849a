/// Outcome summary shared by all solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    /// Rank of the returned (truncated) solution.
    pub rank: usize,
    /// Sweeps for SKPIK, MINRES steps for the baselines.
    pub iterations: usize,
    /// Final relative residual (absolute when the RHS vanishes).
    pub residual: f64,
    pub seconds: f64,
    /// Residual after every iteration.
    pub history: Vec<f64>,
    /// Left and right subspace dimensions `(p, q)`; zero for the baselines.
    pub subspace_dims: (usize, usize),
    pub converged: bool,
    /// Set when the RHS is zero and `residual` is an absolute norm.
    pub absolute_residual: bool,
    /// Set when the Krylov bases stopped growing before convergence.
    pub stagnated: bool,
    /// Per-time-step iteration counts of sequential solvers; empty otherwise.
    pub step_iterations: Vec<usize>,
}

impl SolveReport {
    /// Mean of `step_iterations` when present, else `iterations`.
    pub fn average_iterations(&self) -> f64 {
        if self.step_iterations.is_empty() {
            self.iterations as f64
        } else {
            self.step_iterations.iter().sum::<usize>() as f64 / self.step_iterations.len() as f64
        }
    }
}
