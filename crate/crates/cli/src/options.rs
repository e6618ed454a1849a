use serde::Deserialize;
use skpik_core::baselines::DEFAULT_MAX_RANK;
use skpik_core::discretize::{ProblemConfig, Regularization, RegularizationKind};

use crate::error::CliResult;

/// Model and solver settings shared by `solve` flags and sweep specs.
#[derive(Debug, Clone, PartialEq, clap::Args, Deserialize)]
#[serde(default)]
pub struct ModelOptions {
    /// Reluctivity ν.
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,
    /// Spectral shift s (default: 0 when --ereg > 0, else ν).
    #[arg(long)]
    pub shift: Option<f64>,
    /// Regularization ε.
    #[arg(long, default_value_t = 1e-6)]
    pub ereg: f64,
    /// Regularization kind: 0 none, 2 conductivity floor, 3 elliptic (εM added to K).
    #[arg(long, default_value_t = 3)]
    pub reg: u32,
    /// Relative residual tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Truncation tolerance for low-rank iterates.
    #[arg(long, default_value_t = 1e-10)]
    pub trunc_tol: f64,
    /// Iteration cap (sweeps for skpik, MINRES steps otherwise).
    #[arg(long, default_value_t = 500)]
    pub max_it: usize,
    /// Final time T; τ = T / mT.
    #[arg(long, default_value_t = 1.0)]
    pub final_time: f64,
    /// Rank cap per block for lrminres iterates.
    #[arg(long, default_value_t = DEFAULT_MAX_RANK)]
    pub k_max: usize,
}

impl Default for ModelOptions {
    fn default() -> Self {
        Self {
            nu: 1.0,
            shift: None,
            ereg: 1e-6,
            reg: 3,
            tol: 1e-6,
            trunc_tol: 1e-10,
            max_it: 500,
            final_time: 1.0,
            k_max: DEFAULT_MAX_RANK,
        }
    }
}

impl ModelOptions {
    /// Validated configuration for one `(σ, β)` point.
    pub fn config(&self, sigma: f64, beta: f64) -> CliResult<ProblemConfig> {
        let config = ProblemConfig {
            sigma,
            beta,
            nu: self.nu,
            regularization: Regularization {
                kind: RegularizationKind::from_index(self.reg)?,
                epsilon: self.ereg,
            },
            shift: self.shift,
            tol: self.tol,
            trunc_tol: self.trunc_tol,
            max_iterations: self.max_it,
        };
        config.validate()?;
        Ok(config)
    }
}
