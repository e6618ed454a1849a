use crate::error::{Error, Result};

/// Which regularization of the state equation is applied.
///
/// Kind 1 (an abstract exact operator) has no operational definition and is
/// rejected by [`RegularizationKind::from_index`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularizationKind {
    /// Kind 0: no regularization.
    None,
    /// Kind 2: conductivity replaced by `max(σ, ε)`.
    Conductivity,
    /// Kind 3: `ε·M` added to the stiffness matrix.
    Elliptic,
}

impl RegularizationKind {
    pub fn from_index(i: u32) -> Result<Self> {
        match i {
            0 => Ok(Self::None),
            2 => Ok(Self::Conductivity),
            3 => Ok(Self::Elliptic),
            1 => Err(Error::InvalidConfig(
                "regularization kind 1 (exact operator) is not supported; use 0, 2 or 3".into(),
            )),
            other => Err(Error::InvalidConfig(format!(
                "unknown regularization kind {other}; use 0, 2 or 3"
            ))),
        }
    }

    pub fn index(self) -> u32 {
        match self {
            Self::None => 0,
            Self::Conductivity => 2,
            Self::Elliptic => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regularization {
    pub kind: RegularizationKind,
    pub epsilon: f64,
}

impl Default for Regularization {
    fn default() -> Self {
        Self {
            kind: RegularizationKind::Elliptic,
            epsilon: 1e-6,
        }
    }
}

/// Uniform time grid on `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    steps: usize,
    final_time: f64,
}

impl TimeGrid {
    pub fn new(steps: usize, final_time: f64) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidConfig(
                "number of time steps must be at least 1".into(),
            ));
        }
        if !(final_time > 0.0) || !final_time.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "final time must be positive, got {final_time}"
            )));
        }
        Ok(Self { steps, final_time })
    }

    /// `m_T` steps on `[0, 1]`.
    pub fn unit(steps: usize) -> Result<Self> {
        Self::new(steps, 1.0)
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    pub fn tau(&self) -> f64 {
        self.final_time / self.steps as f64
    }
}

/// Scalar problem data and solver tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    /// Conductivity σ ≥ 0.
    pub sigma: f64,
    /// Control cost β > 0.
    pub beta: f64,
    /// Reluctivity ν > 0.
    pub nu: f64,
    pub regularization: Regularization,
    /// Spectral shift `s`; `None` picks [`ProblemConfig::default_shift`].
    pub shift: Option<f64>,
    pub tol: f64,
    pub trunc_tol: f64,
    pub max_iterations: usize,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        Self {
            sigma: 1.0,
            beta: 1e-4,
            nu: 1.0,
            regularization: Regularization::default(),
            shift: None,
            tol: 1e-6,
            trunc_tol: 1e-10,
            max_iterations: 500,
        }
    }
}

impl ProblemConfig {
    pub fn new(sigma: f64, beta: f64) -> Self {
        Self {
            sigma,
            beta,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return bad(format!("beta must be positive, got {}", self.beta));
        }
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return bad(format!("sigma must be non-negative, got {}", self.sigma));
        }
        if !(self.nu > 0.0) || !self.nu.is_finite() {
            return bad(format!("nu must be positive, got {}", self.nu));
        }
        if !(self.regularization.epsilon >= 0.0) {
            return bad(format!(
                "regularization epsilon must be non-negative, got {}",
                self.regularization.epsilon
            ));
        }
        if let Some(s) = self.shift {
            if !(s >= 0.0) || !s.is_finite() {
                return bad(format!("shift must be non-negative, got {s}"));
            }
        }
        if !(self.tol > 0.0) {
            return bad(format!("tolerance must be positive, got {}", self.tol));
        }
        if !(self.trunc_tol >= 0.0) {
            return bad(format!(
                "truncation tolerance must be non-negative, got {}",
                self.trunc_tol
            ));
        }
        if self.max_iterations == 0 {
            return bad("maximum iteration count must be at least 1".into());
        }
        if self.effective_sigma() == 0.0
            && self.stiffness_regularization() == 0.0
            && self.shift() == 0.0
        {
            return bad(
                "sigma = 0 needs elliptic regularization (ereg > 0) or a positive shift".into(),
            );
        }
        Ok(())
    }

    /// Non-fatal remarks about the parameters.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.beta < 1e-12 {
            out.push(format!(
                "beta = {:e} is below 1e-12; the reformulated system divides by sqrt(beta) and may be badly scaled",
                self.beta
            ));
        }
        out
    }

    /// Conductivity entering `M_σ = R(σ)·M`.
    pub fn effective_sigma(&self) -> f64 {
        match self.regularization.kind {
            RegularizationKind::Conductivity => self.sigma.max(self.regularization.epsilon),
            _ => self.sigma,
        }
    }

    /// Coefficient of `M` added to the stiffness matrix.
    pub fn stiffness_regularization(&self) -> f64 {
        match self.regularization.kind {
            RegularizationKind::Elliptic => self.regularization.epsilon,
            _ => 0.0,
        }
    }

    /// 0 when the regularized stiffness is already definite, ν otherwise.
    pub fn default_shift(&self) -> f64 {
        if self.stiffness_regularization() > 0.0 {
            0.0
        } else {
            self.nu
        }
    }

    pub fn shift(&self) -> f64 {
        self.shift.unwrap_or_else(|| self.default_shift())
    }
}
