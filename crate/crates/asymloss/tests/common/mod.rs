//! Shared oracles for the integration tests.
//!
//! Everything here is an independent route to the quantities the library
//! computes in closed form: adaptive Simpson quadrature of the defining
//! integrals, and the Laplace/Gauss special-case formulas. None of it
//! calls the closed-form production paths it is used to check.

#![allow(dead_code)]

use asymloss::specfun::{erf, erf_inv};

/// Adaptive Simpson quadrature with Richardson correction.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64) -> f64 {
    fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, m, fa, flm, fm);
        let right = simpson(m, b, fm, frm, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(lo);
    let fb = f(hi);
    let fm = f(0.5 * (lo + hi));
    let whole = simpson(lo, hi, fa, fm, fb);
    recurse(f, lo, hi, fa, fm, fb, whole, tol, 55)
}

/// Quadrature split at interior kink points.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    kinks: &[f64],
    tol: f64,
) -> f64 {
    let mut points: Vec<f64> = kinks.iter().copied().filter(|&k| lo < k && k < hi).collect();
    points.push(lo);
    points.push(hi);
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points
        .windows(2)
        .map(|w| integrate(f, w[0], w[1], tol))
        .sum()
}

/// Density of the generalized Gaussian law, written out independently of
/// the library (direct powf, no log-space massaging).
pub fn gnd_density(z: f64, a: f64, b: f64) -> f64 {
    let norm = 2.0 * a * b * gamma_fn(a);
    (-(z.abs() / b).powf(1.0 / a)).exp() / norm
}

/// Γ(a) for moderate a, via the product over the integer recurrence and
/// the Stirling series — deliberately not the library's Lanczos.
pub fn gamma_fn(a: f64) -> f64 {
    // push the argument above 20 where the Stirling series is accurate
    let mut shift = 1.0;
    let mut x = a;
    while x < 20.0 {
        shift *= x;
        x += 1.0;
    }
    let series = 1.0 + 1.0 / (12.0 * x) + 1.0 / (288.0 * x * x) - 139.0 / (51840.0 * x * x * x)
        - 571.0 / (2_488_320.0 * x * x * x * x);
    let stirling = (2.0 * std::f64::consts::PI / x).sqrt() * (x / std::f64::consts::E).powf(x);
    stirling * series / shift
}

/// The asymmetric piecewise-linear loss.
pub fn loss_fn(z: f64, k1: f64, k2: f64) -> f64 {
    if z >= 0.0 {
        k1 * z
    } else {
        -k2 * z
    }
}

/// E[L(Z+c)] by direct quadrature of the defining integral.
pub fn expected_loss_quadrature(c: f64, a: f64, b: f64, k1: f64, k2: f64) -> f64 {
    let reach = b * 60f64.powf(a) + c.abs();
    integrate_piecewise(
        &|z: f64| loss_fn(z + c, k1, k2) * gnd_density(z, a, b),
        -reach,
        reach,
        &[0.0, -c],
        1e-11,
    )
}

/// Var[L(Z+c)] by direct quadrature.
pub fn variance_loss_quadrature(c: f64, a: f64, b: f64, k1: f64, k2: f64) -> f64 {
    let reach = b * 60f64.powf(a) + c.abs();
    let second = integrate_piecewise(
        &|z: f64| {
            let l = loss_fn(z + c, k1, k2);
            l * l * gnd_density(z, a, b)
        },
        -reach,
        reach,
        &[0.0, -c],
        1e-11,
    );
    let first = expected_loss_quadrature(c, a, b, k1, k2);
    second - first * first
}

fn sgn(v: f64) -> f64 {
    if v >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Closed-form optimal correction for the Laplace case (shape a = 1):
/// C = −sgn(k2−k1) b ln(1 − |k2−k1|/(k1+k2)).
pub fn laplace_correction(b: f64, k1: f64, k2: f64) -> f64 {
    let r = (k2 - k1).abs() / (k1 + k2);
    -sgn(k2 - k1) * b * (1.0 - r).ln()
}

/// Closed-form optimal correction for the Gauss case (shape a = 1/2):
/// C = sgn(k2−k1) b erf_inv(|k2−k1|/(k1+k2)).
pub fn gauss_correction(b: f64, k1: f64, k2: f64) -> f64 {
    let r = (k2 - k1).abs() / (k1 + k2);
    sgn(k2 - k1) * b * erf_inv(r).unwrap()
}

/// Laplace-case expected loss: L(c) + (k1+k2) b exp(−|c/b|) / 2.
pub fn laplace_expected_loss(c: f64, b: f64, k1: f64, k2: f64) -> f64 {
    loss_fn(c, k1, k2) + 0.5 * (k1 + k2) * b * (-(c / b).abs()).exp()
}

/// Laplace-case variance of the shifted loss.
///
/// Reduction of the general incomplete-gamma expression at shape 1; note
/// the sign only multiplies the b(k1−k2) part, not L(c) — verified against
/// 50-digit quadrature on both sides of c = 0.
pub fn laplace_variance(c: f64, b: f64, k1: f64, k2: f64) -> f64 {
    let s = sgn(c);
    let e = (-(c / b).abs()).exp();
    let ksum = k1 + k2;
    (k1 * k1 + k2 * k2 + s * (k1 * k1 - k2 * k2)) * b * b
        - ksum * (loss_fn(c, k1, k2) + s * b * (k1 - k2)) * b * e
        - 0.25 * ksum * ksum * b * b * e * e
}

/// Gauss-case expected loss:
/// (k1−k2)c/2 + (k1+k2)c erf(c/b)/2 + (k1+k2) b exp(−c²/b²)/(2√π).
pub fn gauss_expected_loss(c: f64, b: f64, k1: f64, k2: f64) -> f64 {
    let ksum = k1 + k2;
    0.5 * (k1 - k2) * c
        + 0.5 * ksum * c * erf(c / b).unwrap()
        + 0.5 * ksum * b * (-(c * c) / (b * b)).exp() / std::f64::consts::PI.sqrt()
}

/// Gauss-case variance of the shifted loss.
pub fn gauss_variance(c: f64, b: f64, k1: f64, k2: f64) -> f64 {
    let ksum = k1 + k2;
    let ksq = k1 * k1 + k2 * k2;
    let e = erf(c / b).unwrap();
    let g = (-(c * c) / (b * b)).exp();
    let pi = std::f64::consts::PI;
    0.25 * ksq * b * b + 0.25 * ksum * ksum * c * c + 0.25 * (k1 * k1 - k2 * k2) * b * b * e
        - 0.25 * ksum * ksum * c * c * e * e
        - 0.5 * ksum * ksum * b * c * e * g / pi.sqrt()
        - 0.25 * ksum * ksum * b * b * g * g / pi
}
