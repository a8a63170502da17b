//! `J_ν` against contour and line quadrature, which share no code with the
//! series, asymptotic and ODE paths.

use linnik_core::specfun::{
    bessel_j, bessel_kernel, sonine_hankel_quadrature, sonine_line_quadrature, log_gamma,
    PrecisionConfig,
};
use linnik_core::Complex64;
use std::f64::consts::PI;

fn check(nu: Complex64, u: f64, rel: f64) {
    let cfg = PrecisionConfig::default();
    let j = bessel_j(nu, u, &cfg).unwrap();
    let (q, err) = sonine_hankel_quadrature(nu, u, 1e-11).unwrap();
    let d = (j - q).norm();
    assert!(d <= 10.0 * err + rel * q.norm(), "ν={nu}, u={u}: J={j}, quadrature={q} ± {err:e}");
}

#[test]
fn real_orders_across_methods() {
    for nu in [0.0, 0.5, 2.0, 3.5, 4.0, 7.25] {
        for u in [0.3, 5.0, 29.0, 31.0, 100.0, 628.3] {
            check(Complex64::new(nu, 0.0), u, 1e-9);
        }
    }
}

#[test]
fn first_lattice_points_of_the_bessel_block() {
    // J_4 at 2π√(λN) for λ = 2, N = 100 and 200
    check(Complex64::new(4.0, 0.0), 2.0 * PI * 200f64.sqrt(), 1e-10);
    check(Complex64::new(4.0, 0.0), 20.0 * PI, 1e-10);
}

#[test]
fn complex_order_at_the_first_zero() {
    // ν = k + 3/2 + iγ₁; the arc integral loses about πγ/2 / ln 10 ≈ 10 digits
    let nu = Complex64::new(3.5, 14.1347);
    let cfg = PrecisionConfig::default();
    for u in [10.0, 100.0, 628.3] {
        let j = bessel_j(nu, u, &cfg).unwrap();
        let (q, err) = sonine_hankel_quadrature(nu, u, 1e-12).unwrap();
        let d = (j - q).norm();
        assert!(d <= 10.0 * err + 1e-6 * q.norm(), "u={u}: J={j}, quadrature={q} ± {err:e}");
    }
}

#[test]
fn kernel_matches_line_integral() {
    let cfg = PrecisionConfig::default();
    for (nu, u) in [(Complex64::new(2.5, 0.0), 12.0), (Complex64::new(3.5, 6.0), 40.0)] {
        let (line, err) = sonine_line_quadrature(nu, u, 1.0, 1e-10).unwrap();
        let j = bessel_j(nu, u, &cfg).unwrap();
        assert!((line - j).norm() <= 10.0 * err + 1e-8 * j.norm(), "ν={nu}: {line} vs {j}");
        // F_ν(u) = Γ(ν+1)(2/u)^ν J_ν(u)
        let f = bessel_kernel(nu, u, &cfg).unwrap().value;
        let lg = log_gamma(nu + 1.0).unwrap();
        let from_line = line * (lg + nu * (2.0 / u).ln()).exp();
        assert!((f - from_line).norm() <= 1e-7 * f.norm().max(1e-300) + 10.0 * err * (lg + nu * (2.0 / u).ln()).exp().norm());
    }
}
