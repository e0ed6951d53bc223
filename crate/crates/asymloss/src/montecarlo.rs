//! Seeded Monte Carlo estimator of the shifted-loss mean and variance.
//!
//! This is the sampling oracle the closed forms are validated against. The
//! stream is the same chunked, per-index-seeded stream as
//! [`GndParams::sample`], moments are accumulated one pass per chunk
//! (count/mean/M2/M3/M4), and chunk accumulators are merged in index order
//! — so results are bit-identical for any worker-thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gnd::{GndParams, CHUNK};
use crate::loss::{loss, LossParams};

/// Moment estimates of the loss sample with their standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossStats {
    pub n: u64,
    /// Sample mean of L(Z_i + c).
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// sqrt(variance / n).
    pub mean_stderr: f64,
    /// Asymptotic stderr of the sample variance, sqrt((m4 − variance²)/n);
    /// falls back to the normal-theory value when the fourth-moment
    /// estimate degenerates at tiny n.
    pub variance_stderr: f64,
    /// Seed the estimate was produced from.
    pub seed: u64,
}

/// One-pass central-moment accumulator with order-stable pairwise merging.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        let n1 = self.n as f64;
        self.n += 1;
        let n = self.n as f64;
        let delta = x - self.mean;
        let delta_n = delta / n;
        let delta_n2 = delta_n * delta_n;
        let term = delta * delta_n * n1;
        self.m4 += term * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * self.m2
            - 4.0 * delta_n * self.m3;
        self.m3 += term * delta_n * (n - 2.0) - 3.0 * delta_n * self.m2;
        self.m2 += term;
        self.mean += delta_n;
    }

    fn merge(self, other: Moments) -> Moments {
        if other.n == 0 {
            return self;
        }
        if self.n == 0 {
            return other;
        }
        let n1 = self.n as f64;
        let n2 = other.n as f64;
        let n = n1 + n2;
        let delta = other.mean - self.mean;
        let d2 = delta * delta;
        let mean = self.mean + delta * n2 / n;
        let m2 = self.m2 + other.m2 + d2 * n1 * n2 / n;
        let m3 = self.m3
            + other.m3
            + delta * d2 * n1 * n2 * (n1 - n2) / (n * n)
            + 3.0 * delta * (n1 * other.m2 - n2 * self.m2) / n;
        let m4 = self.m4
            + other.m4
            + d2 * d2 * n1 * n2 * (n1 * n1 - n1 * n2 + n2 * n2) / (n * n * n)
            + 6.0 * d2 * (n1 * n1 * other.m2 + n2 * n2 * self.m2) / (n * n)
            + 4.0 * delta * (n1 * other.m3 - n2 * self.m3) / n;
        Moments {
            n: self.n + other.n,
            mean,
            m2,
            m3,
            m4,
        }
    }
}

/// Estimate mean and variance of L(Z + c) from n seeded draws.
///
/// Deterministic in (c, params, slopes, n, seed); requires n ≥ 2.
pub fn estimate_loss_stats(
    c: f64,
    p: &GndParams,
    k: &LossParams,
    n: usize,
    seed: u64,
) -> Result<LossStats> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "loss statistics need at least 2 samples, got {n}"
        )));
    }
    if !c.is_finite() {
        return Err(Error::Domain(format!("shift must be finite, got {c}")));
    }

    let chunks = n.div_ceil(CHUNK);
    let per_chunk: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|idx| {
            let len = CHUNK.min(n - idx * CHUNK);
            let mut buf = vec![0.0; len];
            p.fill_chunk(seed, idx as u64, &mut buf);
            let mut acc = Moments::default();
            for z in buf {
                acc.push(loss(z + c, k));
            }
            acc
        })
        .collect();

    // merge strictly in chunk order, independent of scheduling
    let total = per_chunk.into_iter().fold(Moments::default(), Moments::merge);

    let nf = total.n as f64;
    let variance = total.m2 / (nf - 1.0);
    let m4 = total.m4 / nf;
    let excess = m4 - variance * variance;
    let variance_stderr = if excess > 0.0 {
        (excess / nf).sqrt()
    } else {
        // fourth-moment estimate can dip below variance^2 for tiny n;
        // fall back to the normal-theory stderr of s^2
        variance * (2.0 / (nf - 1.0)).sqrt()
    };
    Ok(LossStats {
        n: total.n,
        mean: total.mean,
        variance,
        mean_stderr: (variance / nf).sqrt(),
        variance_stderr,
        seed,
    })
}
