//! Moment-matching estimation of the error-law parameters (a, b) from
//! observed residuals.
//!
//! The dimensionless ratio r(a) = Γ(3a)Γ(a)/Γ(2a)² equals
//! E(Z²) / E|Z|² and is strictly increasing in a, so inverting it on the
//! sample moments identifies the shape; the scale then follows from
//! E|Z| = b Γ(2a)/Γ(a). The ratio tends to 4/3 as a → 0, which is the hard
//! lower admissibility bound: lighter-tailed residuals are outside the
//! family.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gnd::{GndParams, MAX_SHAPE};
use crate::specfun::ln_gamma_unchecked;

/// Smallest shape the inversion brackets; r(1e-3) − 4/3 ≈ 2e-6, so the
/// excluded sliver of the family is numerically indistinguishable from the
/// a → 0 limit anyway.
pub const MIN_SHAPE: f64 = 1e-3;

/// Exact sample moments of a residual series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub n: u64,
    /// Sample mean — diagnostic only, the model fixes the mean at zero.
    pub mean: f64,
    /// Sample mean of |z|.
    pub mean_abs: f64,
    /// Sample mean of z².
    pub second_moment: f64,
}

/// Compute exact sample moments.
///
/// Rejects fewer than 2 values, non-finite entries, and all-zero input.
pub fn summarize(residuals: &[f64]) -> Result<MomentSummary> {
    if residuals.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 residuals, got {}",
            residuals.len()
        )));
    }
    let mut sum = 0.0;
    let mut sum_abs = 0.0;
    let mut sum_sq = 0.0;
    for (i, &z) in residuals.iter().enumerate() {
        if !z.is_finite() {
            return Err(Error::InvalidInput(format!(
                "residual {} is not finite: {z}",
                i + 1
            )));
        }
        sum += z;
        sum_abs += z.abs();
        sum_sq += z * z;
    }
    if sum_abs == 0.0 {
        return Err(Error::InvalidInput(
            "degenerate residuals: all values are zero".into(),
        ));
    }
    let n = residuals.len() as f64;
    Ok(MomentSummary {
        n: residuals.len() as u64,
        mean: sum / n,
        mean_abs: sum_abs / n,
        second_moment: sum_sq / n,
    })
}

/// ln r(a) = ln Γ(3a) + ln Γ(a) − 2 ln Γ(2a).
fn ln_moment_ratio(a: f64) -> f64 {
    ln_gamma_unchecked(3.0 * a) + ln_gamma_unchecked(a) - 2.0 * ln_gamma_unchecked(2.0 * a)
}

/// The admissible open interval of the moment ratio, (r(MIN_SHAPE),
/// r(MAX_SHAPE)).
pub fn moment_ratio_bounds() -> (f64, f64) {
    (
        ln_moment_ratio(MIN_SHAPE).exp(),
        ln_moment_ratio(MAX_SHAPE).exp(),
    )
}

/// Verified once per process: r must be strictly increasing across the
/// bisection domain before the solver is trusted.
fn monotonicity_check() -> &'static std::result::Result<(), String> {
    static CHECK: OnceLock<std::result::Result<(), String>> = OnceLock::new();
    CHECK.get_or_init(|| {
        let lo = MIN_SHAPE.ln();
        let hi = MAX_SHAPE.ln();
        let mut last = f64::NEG_INFINITY;
        for i in 0..=400 {
            let la = lo + (hi - lo) * (i as f64) / 400.0;
            let r = ln_moment_ratio(la.exp());
            if r <= last {
                return Err(format!(
                    "moment ratio not strictly increasing near a = {}",
                    la.exp()
                ));
            }
            last = r;
        }
        Ok(())
    })
}

/// Invert the moment ratio on a summary to recover (a, b).
///
/// Bisection on ln a over [ln MIN_SHAPE, ln MAX_SHAPE]; the ratio is
/// checked for strict monotonicity on a dense grid once per process before
/// the result of any bisection is trusted.
pub fn fit_moments(s: &MomentSummary) -> Result<GndParams> {
    if !(s.mean_abs > 0.0) || !s.mean_abs.is_finite() {
        return Err(Error::InvalidInput(format!(
            "mean_abs must be positive and finite, got {}",
            s.mean_abs
        )));
    }
    if !(s.second_moment > 0.0) || !s.second_moment.is_finite() {
        return Err(Error::InvalidInput(format!(
            "second_moment must be positive and finite, got {}",
            s.second_moment
        )));
    }
    if let Err(msg) = monotonicity_check() {
        return Err(Error::Internal(msg.clone()));
    }

    let target = s.second_moment / (s.mean_abs * s.mean_abs);
    let ln_target = target.ln();
    let (r_lo, r_hi) = moment_ratio_bounds();
    if target <= r_lo {
        return Err(Error::OutOfFamily(format!(
            "moment ratio {target:.6} is at or below the family's light-tail \
             limit 4/3; the residuals are lighter-tailed than any admissible shape"
        )));
    }
    if target >= r_hi {
        return Err(Error::OutOfFamily(format!(
            "moment ratio {target:.6} exceeds r({MAX_SHAPE}) = {r_hi:.6e}; the \
             residuals are heavier-tailed than the supported shape range"
        )));
    }

    let mut lo = MIN_SHAPE.ln();
    let mut hi = MAX_SHAPE.ln();
    while hi - lo > 1e-14 * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if ln_moment_ratio(mid.exp()) < ln_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = (0.5 * (lo + hi)).exp();
    let b = s.mean_abs * (ln_gamma_unchecked(a) - ln_gamma_unchecked(2.0 * a)).exp();
    GndParams::new(a, b)
}

/// Diagnostic for residuals whose sample mean is implausibly far from the
/// model's zero mean: |mean| > 4·sqrt(second_moment/n).
pub fn mean_bias_warning(s: &MomentSummary) -> Option<String> {
    let threshold = 4.0 * (s.second_moment / s.n as f64).sqrt();
    if s.mean.abs() > threshold {
        Some(format!(
            "sample mean {:.6e} exceeds 4 standard errors ({:.6e}); the zero-mean \
             assumption looks violated",
            s.mean, threshold
        ))
    } else {
        None
    }
}
