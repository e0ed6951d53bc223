//! Optimal additive correction of point forecasts under asymmetric linear
//! loss, for prediction errors following a zero-mean generalized Gaussian
//! law.
//!
//! Given the error distribution (shape `a`, scale `b`) and per-unit loss
//! slopes `k1` (over-prediction) and `k2` (under-prediction), the crate
//! computes the shift `C` minimizing the expected loss of the corrected
//! prediction, the minimized expected loss, the loss reduction, and the
//! variance of the loss at the optimum — all in closed form through the
//! incomplete gamma functions, with a seeded Monte Carlo estimator and a
//! numerical-inequality suite serving as independent checks.
//!
//! Modules, bottom up:
//! - [`specfun`]: log-gamma, regularized incomplete gamma pair and inverse,
//!   erf and its inverse.
//! - [`gnd`]: the error law — density, CDF, moments, seeded sampling.
//! - [`loss`]: the asymmetric piecewise-linear loss and closed forms for
//!   mean, variance, and derivative of the shifted loss.
//! - [`optimizer`]: the optimal correction and its reporting quantities.
//! - [`montecarlo`]: streaming loss-statistics estimator (the sampling
//!   oracle for every closed form).
//! - [`fit`]: moment-matching estimation of (a, b) from residuals.
//! - [`verification`]: the gamma-function inequalities and sign patterns
//!   behind the variance-reduction guarantee, as runnable checks.
//! - [`report`], [`cli`]: serializable reports and the command-line front
//!   end used by the `asymloss` binary.

pub mod cli;
pub mod error;
pub mod fit;
pub mod gnd;
pub mod loss;
pub mod montecarlo;
pub mod optimizer;
pub mod report;
pub mod specfun;
pub mod verification;

pub use error::{Error, Result};
pub use fit::{fit_moments, summarize, MomentSummary};
pub use gnd::GndParams;
pub use loss::LossParams;
pub use montecarlo::LossStats;
pub use optimizer::Correction;
