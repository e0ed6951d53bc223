//! The zero-mean generalized Gaussian error law.
//!
//! Density (2 a b Γ(a))⁻¹ exp(−|z/b|^(1/a)) with shape `a` and scale `b`:
//! a = 1 is Laplace(0, b), a = 1/2 is Normal(0, b²/2), larger `a` means
//! heavier tails. This shape/scale pair is the canonical form throughout
//! the crate; [`to_exponent_convention`] / [`from_exponent_convention`]
//! translate to the common "exponent β" parameterization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{ln_gamma_unchecked, reg_lower_gamma};

/// Largest admissible shape; moments need Γ(3a), which must stay inside the
/// range where `ln_gamma` holds its accuracy (3a ≤ 150 < 170).
pub const MAX_SHAPE: f64 = 50.0;

/// ln(f64::MAX), the overflow guard threshold for log-space quantities.
pub(crate) const LN_MAX: f64 = 709.782712893384;

/// Samples generated per chunk; sub-streams are derived per chunk index so
/// results do not depend on how chunks are scheduled across threads.
pub(crate) const CHUNK: usize = 1 << 16;

/// Validated shape/scale pair of the error law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GndParams {
    a: f64,
    b: f64,
}

/// Absolute and second moments of the law (the mean is zero by
/// construction, so `variance == second_moment`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GndMoments {
    /// E|Z| = b Γ(2a)/Γ(a), in units of z.
    pub mean_abs: f64,
    /// E(Z²) = b² Γ(3a)/Γ(a), in units of z².
    pub second_moment: f64,
    /// Var Z, equal to the second moment for the zero-mean law.
    pub variance: f64,
}

impl GndParams {
    /// Validates a > 0, b > 0, both finite, and a ≤ [`MAX_SHAPE`].
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || a <= 0.0 {
            return Err(Error::Domain(format!("shape a must be positive, got {a}")));
        }
        if a > MAX_SHAPE {
            return Err(Error::Domain(format!(
                "shape a = {a} exceeds the supported maximum {MAX_SHAPE}"
            )));
        }
        if !b.is_finite() || b <= 0.0 {
            return Err(Error::Domain(format!("scale b must be positive, got {b}")));
        }
        Ok(Self { a, b })
    }

    pub fn shape(&self) -> f64 {
        self.a
    }

    pub fn scale(&self) -> f64 {
        self.b
    }

    /// Probability density at z.
    pub fn pdf(&self, z: f64) -> Result<f64> {
        if !z.is_finite() {
            return Err(Error::Domain(format!("pdf requires finite z, got {z}")));
        }
        let x = transform_abs_ratio(z, self.a, self.b);
        let ln_norm = -(std::f64::consts::LN_2 + self.a.ln() + self.b.ln()
            + ln_gamma_unchecked(self.a));
        Ok((ln_norm - x).exp())
    }

    /// Cumulative distribution function at z, composed from the
    /// regularized lower incomplete gamma:
    /// F(z) = 1/2 + sgn(z) P(a, (|z|/b)^(1/a)) / 2.
    pub fn cdf(&self, z: f64) -> Result<f64> {
        if !z.is_finite() {
            return Err(Error::Domain(format!("cdf requires finite z, got {z}")));
        }
        let x = transform_abs_ratio(z, self.a, self.b);
        let p = reg_lower_gamma(self.a, x)?;
        Ok(if z >= 0.0 {
            0.5 + 0.5 * p
        } else {
            0.5 - 0.5 * p
        })
    }

    /// Exact absolute and second moments, through log-gamma ratios.
    pub fn moments(&self) -> Result<GndMoments> {
        let lg_a = ln_gamma_unchecked(self.a);
        let ln_mean_abs = self.b.ln() + ln_gamma_unchecked(2.0 * self.a) - lg_a;
        let ln_second = 2.0 * self.b.ln() + ln_gamma_unchecked(3.0 * self.a) - lg_a;
        if ln_second >= LN_MAX || ln_mean_abs >= LN_MAX {
            return Err(Error::Overflow(format!(
                "moments overflow at a = {}, b = {}",
                self.a, self.b
            )));
        }
        let second_moment = ln_second.exp();
        Ok(GndMoments {
            mean_abs: ln_mean_abs.exp(),
            second_moment,
            variance: second_moment,
        })
    }

    /// Draw n samples deterministically from (seed, n).
    ///
    /// If T ~ Gamma(shape a, scale 1) and S is an independent uniform sign,
    /// then S · b · T^a has exactly this law, so the sampler is exact and
    /// can serve as an oracle. Generation is chunked; chunk i uses the
    /// sub-stream seeded by `seed ^ i`, and output order is fixed by chunk
    /// index, so the result is identical for any number of worker threads.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut out = vec![0.0; n];
        self.sample_into(seed, &mut out);
        out
    }

    /// Fill `out` with samples; see [`GndParams::sample`].
    pub fn sample_into(&self, seed: u64, out: &mut [f64]) {
        let params = *self;
        out.par_chunks_mut(CHUNK).enumerate().for_each(|(idx, chunk)| {
            params.fill_chunk(seed, idx as u64, chunk);
        });
    }

    /// Generate one chunk of the stream.
    pub(crate) fn fill_chunk(&self, seed: u64, chunk_index: u64, out: &mut [f64]) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ chunk_index);
        let gamma = Gamma::new(self.a, 1.0).expect("shape validated at construction");
        for slot in out.iter_mut() {
            let t: f64 = gamma.sample(&mut rng);
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            *slot = sign * (self.b * t.powf(self.a));
        }
    }
}

/// |z/b|^(1/a), evaluated in log space so extreme shapes cannot silently
/// overflow; saturates at f64::MAX (where P and Q have long converged to
/// their limits) and is exactly 0 at z = 0.
pub(crate) fn transform_abs_ratio(z: f64, a: f64, b: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    let t = (z.abs().ln() - b.ln()) / a;
    if t >= LN_MAX {
        f64::MAX
    } else {
        t.exp()
    }
}

/// Translate (a, b) to the exponent convention (β, α) with density
/// ∝ exp(−|z/α|^β): β = 1/a, α = b.
pub fn to_exponent_convention(p: &GndParams) -> (f64, f64) {
    (1.0 / p.shape(), p.scale())
}

/// Build params from the exponent convention (β, α); see
/// [`to_exponent_convention`].
pub fn from_exponent_convention(beta: f64, alpha: f64) -> Result<GndParams> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::Domain(format!(
            "exponent beta must be positive, got {beta}"
        )));
    }
    GndParams::new(1.0 / beta, alpha)
}
