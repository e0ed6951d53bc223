//! Closed forms against independent adaptive quadrature of the defining
//! integrals.

mod common;

use asymloss::gnd::GndParams;
use asymloss::loss::{expected_loss, variance_loss, LossParams};
use common::*;

#[test]
fn density_normalizes_to_one() {
    // tail cut at u = 60 in the transformed variable, i.e. |z| <= 60^a b
    for &a in &[0.3, 0.5, 1.0, 2.0, 4.0] {
        let b = 1.3;
        let p = GndParams::new(a, b).unwrap();
        let reach = b * 60f64.powf(a);
        let total = integrate_piecewise(
            &|z: f64| p.pdf(z).unwrap(),
            -reach,
            reach,
            &[0.0],
            1e-11,
        );
        assert!(
            (total - 1.0).abs() <= 1e-8,
            "normalization at a = {a}: {total}"
        );
    }
}

#[test]
fn cdf_matches_quadrature_of_density() {
    for &(a, b) in &[(0.5, 1.0), (1.0, 2.0), (2.0, 0.7), (0.35, 1.5)] {
        let p = GndParams::new(a, b).unwrap();
        for &u in &[-2.0, -0.8, -0.1, 0.3, 1.0, 2.5] {
            let z = u * b;
            let tail = integrate_piecewise(&|t: f64| p.pdf(t).unwrap(), 0.0, z.abs(), &[], 1e-12);
            let want = if z >= 0.0 { 0.5 + tail } else { 0.5 - tail };
            let got = p.cdf(z).unwrap();
            assert!(
                (got - want).abs() <= 1e-9,
                "cdf at (a={a}, b={b}, z={z}): {got} vs {want}"
            );
        }
    }
}

#[test]
fn moments_match_quadrature() {
    for &(a, b) in &[(0.5, 1.0), (1.0, 1.0), (2.0, 3.0)] {
        let p = GndParams::new(a, b).unwrap();
        let m = p.moments().unwrap();
        let reach = b * 60f64.powf(a);
        let mean_abs = 2.0 * integrate(&|z: f64| z * p.pdf(z).unwrap(), 0.0, reach, 1e-12);
        let second = 2.0 * integrate(&|z: f64| z * z * p.pdf(z).unwrap(), 0.0, reach, 1e-12);
        assert!(
            (m.mean_abs - mean_abs).abs() <= 1e-8 * mean_abs,
            "mean_abs at (a={a}, b={b}): {} vs {mean_abs}",
            m.mean_abs
        );
        assert!(
            (m.second_moment - second).abs() <= 1e-8 * second,
            "second moment at (a={a}, b={b}): {} vs {second}",
            m.second_moment
        );
    }
}

#[test]
fn expected_loss_matches_fresh_quadrature() {
    // parameter tuples deliberately different from the frozen references
    let tuples = [
        (0.77, 1.3, 0.6, 2.5, 0.8),
        (-1.1, 0.45, 2.2, 1.0, 6.0),
        (0.0, 2.5, 1.0, 3.0, 3.0),
        (2.4, 0.9, 1.4, 0.3, 11.0),
    ];
    for (c, a, b, k1, k2) in tuples {
        let p = GndParams::new(a, b).unwrap();
        let k = LossParams::new(k1, k2).unwrap();
        let closed = expected_loss(c, &p, &k).unwrap();
        let quad = expected_loss_quadrature(c, a, b, k1, k2);
        assert!(
            (closed - quad).abs() <= 1e-8 * quad,
            "E at (c={c},a={a},b={b},k1={k1},k2={k2}): closed {closed} vs quad {quad}"
        );
    }
}

#[test]
fn variance_matches_fresh_quadrature() {
    let tuples = [
        (0.77, 1.3, 0.6, 2.5, 0.8),
        (-1.1, 0.45, 2.2, 1.0, 6.0),
        (2.4, 0.9, 1.4, 0.3, 11.0),
    ];
    for (c, a, b, k1, k2) in tuples {
        let p = GndParams::new(a, b).unwrap();
        let k = LossParams::new(k1, k2).unwrap();
        let closed = variance_loss(c, &p, &k).unwrap();
        let quad = variance_loss_quadrature(c, a, b, k1, k2);
        assert!(
            (closed - quad).abs() <= 1e-7 * quad,
            "Var at (c={c},a={a},b={b},k1={k1},k2={k2}): closed {closed} vs quad {quad}"
        );
    }
}

#[test]
fn worked_example_formulas_agree_with_generic_closed_forms() {
    // Laplace (a = 1) and Gauss (a = 1/2) have elementary expressions for
    // the shifted-loss mean and variance; the generic incomplete-gamma
    // route must reproduce them.
    for &(c, b, k1, k2) in &[
        (0.4, 1.0, 1.0, 3.0),
        (-0.9, 2.0, 5.0, 2.0),
        (0.0, 0.5, 2.0, 2.0),
        (1.7, 1.3, 0.4, 9.0),
    ] {
        let lap = GndParams::new(1.0, b).unwrap();
        let k = LossParams::new(k1, k2).unwrap();
        let e = expected_loss(c, &lap, &k).unwrap();
        let e_ref = laplace_expected_loss(c, b, k1, k2);
        assert!((e - e_ref).abs() <= 1e-12 * e_ref, "Laplace E: {e} vs {e_ref}");
        let v = variance_loss(c, &lap, &k).unwrap();
        let v_ref = laplace_variance(c, b, k1, k2);
        assert!(
            (v - v_ref).abs() <= 1e-10 * v_ref.abs(),
            "Laplace Var: {v} vs {v_ref}"
        );

        let gau = GndParams::new(0.5, b).unwrap();
        let e = expected_loss(c, &gau, &k).unwrap();
        let e_ref = gauss_expected_loss(c, b, k1, k2);
        assert!((e - e_ref).abs() <= 1e-12 * e_ref, "Gauss E: {e} vs {e_ref}");
        let v = variance_loss(c, &gau, &k).unwrap();
        let v_ref = gauss_variance(c, b, k1, k2);
        assert!(
            (v - v_ref).abs() <= 1e-10 * v_ref.abs(),
            "Gauss Var: {v} vs {v_ref}"
        );
    }
}
