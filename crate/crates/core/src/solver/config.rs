use crate::error::{Error, Result};
use crate::spectral::DEFAULT_IMAG_TOL;

/// Parameters of the proximal alternating minimisation.
///
/// Defaults: `α1 = α2 = β = μ = ε = 1e-5`, `ρ1 = ρ2 = ρ3 = 5e-6`,
/// `N = 200`, rank 30, and `v = 2p − 1` when `v` is left unset.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Transform length; `None` means `2p − 1`.
    pub v: Option<usize>,
    /// Factor rank `q`, the same for every spectral slice.
    pub rank: usize,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
    pub mu: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
    /// Stop once `‖C^{k+1} − C^k‖² / ‖C^{k+1}‖² ≤ epsilon`.
    pub epsilon: f64,
    pub max_iter: usize,
    pub seed: u64,
    /// Augmented-Lagrangian passes per C update.
    pub inner_iters: usize,
    /// Compute spectral slices `0..=v/2` only and mirror the rest.
    pub exploit_symmetry: bool,
    /// Reject a C update that would break sufficient decrease.
    pub monotone_safeguard: bool,
    pub imag_tol: f64,
    /// Relative normal-equation residual above which a factor solve is
    /// reported as ill-conditioned.
    pub solve_residual_limit: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            v: None,
            rank: 30,
            alpha1: 1e-5,
            alpha2: 1e-5,
            beta: 1e-5,
            mu: 1e-5,
            rho1: 5e-6,
            rho2: 5e-6,
            rho3: 5e-6,
            epsilon: 1e-5,
            max_iter: 200,
            seed: 0,
            inner_iters: 1,
            exploit_symmetry: true,
            monotone_safeguard: true,
            imag_tol: DEFAULT_IMAG_TOL,
            solve_residual_limit: 1e-6,
        }
    }
}

impl SolverConfig {
    /// The TV-free variant: `α1 = α2 = 0` and the `β`, `μ` machinery off.
    pub fn without_tv(mut self) -> Self {
        self.alpha1 = 0.0;
        self.alpha2 = 0.0;
        self.beta = 0.0;
        self.mu = 0.0;
        self
    }

    pub fn with_v(mut self, v: usize) -> Self {
        self.v = Some(v);
        self
    }

    pub fn with_rank(mut self, rank: usize) -> Self {
        self.rank = rank;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn transform_len(&self, p: usize) -> usize {
        self.v.unwrap_or(2 * p - 1)
    }

    /// True when the TV splitting is disabled.
    pub fn tv_disabled(&self) -> bool {
        self.alpha1 == 0.0 && self.alpha2 == 0.0 && self.beta == 0.0 && self.mu == 0.0
    }

    pub fn rho_min(&self) -> f64 {
        self.rho1.min(self.rho2).min(self.rho3)
    }

    pub fn validate(&self, dims: (usize, usize, usize)) -> Result<()> {
        let (m, n, p) = dims;
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        let v = self.transform_len(p);
        if v < p {
            return Err(Error::TransformTooShort { v, p });
        }
        if self.rank == 0 || self.rank > m.min(n) {
            return bad(format!("rank {} must lie in 1..={}", self.rank, m.min(n)));
        }
        for (name, x) in [("alpha1", self.alpha1), ("alpha2", self.alpha2)] {
            if !(x >= 0.0 && x.is_finite()) {
                return bad(format!("{name} must be nonnegative, got {x}"));
            }
        }
        for (name, x) in [("rho1", self.rho1), ("rho2", self.rho2), ("rho3", self.rho3), ("epsilon", self.epsilon)] {
            if !(x > 0.0 && x.is_finite()) {
                return bad(format!("{name} must be positive, got {x}"));
            }
        }
        if !self.tv_disabled() {
            for (name, x) in [("beta", self.beta), ("mu", self.mu)] {
                if !(x > 0.0 && x.is_finite()) {
                    return bad(format!("{name} must be positive when TV is enabled, got {x}"));
                }
            }
        }
        if self.max_iter == 0 || self.inner_iters == 0 {
            return bad("max_iter and inner_iters must be positive".into());
        }
        Ok(())
    }
}
