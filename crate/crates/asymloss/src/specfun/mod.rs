//! Gamma-family special functions and their inverses.
//!
//! Everything downstream — densities, loss expectations, the optimal
//! correction — reduces to the regularized incomplete gamma pair and the
//! error function, so this module is the numerical bedrock of the crate.
//!
//! | Function | Description |
//! |----------|-------------|
//! | [`ln_gamma`] | ln Γ(a) for a > 0 |
//! | [`reg_lower_gamma`] | P(a, x) = γ(a, x)/Γ(a) |
//! | [`reg_upper_gamma`] | Q(a, x) = Γ(a, x)/Γ(a) |
//! | [`reg_gamma_pair`] | (P, Q) computed together |
//! | [`inv_reg_lower_gamma`] | x with P(a, x) = p |
//! | [`erf`] | error function |
//! | [`erf_inv`] | inverse error function |
//!
//! All functions are pure and reject NaN/inf inputs with a domain error
//! instead of propagating NaN.

mod erf;
mod incgamma;
mod lgamma;

pub use erf::{erf, erf_inv};
pub use incgamma::{
    inv_reg_lower_gamma, inv_reg_lower_gamma_acc, reg_gamma_pair, reg_lower_gamma,
    reg_upper_gamma,
};
pub use lgamma::ln_gamma;

pub(crate) use lgamma::ln_gamma_unchecked;

use crate::error::{Error, Result};

/// Convergence controls for iterative evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    /// Relative step tolerance for root refinement.
    pub rel_tol: f64,
    /// Iteration cap for series, continued fractions, and root solves.
    pub max_iter: usize,
}

impl Accuracy {
    /// Validated constructor: 0 < rel_tol < 1e-6 and max_iter ≥ 1.
    pub fn new(rel_tol: f64, max_iter: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1e-6) {
            return Err(Error::Domain(format!(
                "rel_tol must lie in (0, 1e-6), got {rel_tol}"
            )));
        }
        if max_iter < 1 {
            return Err(Error::Domain("max_iter must be at least 1".into()));
        }
        Ok(Self { rel_tol, max_iter })
    }
}

impl Default for Accuracy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_iter: 200,
        }
    }
}
