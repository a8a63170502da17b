//! Quadrature oracles for `J_ν(u)` taken from the Sonine contour integral
//! `J_ν(u) = (u/2)^ν/(2πi) ∫ e^{s − u²/(4s)} s^{−ν−1} ds`.
//!
//! Two contours are offered. Collapsing the loop onto the negative axis and
//! the unit circle yields Schläfli's real integrals; a vertical line `Re s = a`
//! gives an independent check that the value does not depend on the contour.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::quad::integrate;
use super::SpecFunError;

const MAX_PANELS: usize = 40_000;

/// `J_ν(u) = (1/π)∫_0^π cos(νθ − u sin θ) dθ − (sin νπ/π)∫_0^∞ e^{−u sinh t − νt} dt`.
///
/// Returns the value and an absolute error estimate. Accurate for real or
/// moderately complex `ν`; large `|Im ν|` cancels catastrophically and
/// shows up as a large error estimate.
pub fn sonine_hankel_quadrature(
    nu: Complex64,
    u: f64,
    tol: f64,
) -> Result<(Complex64, f64), SpecFunError> {
    if !(u > 0.0) {
        return Err(SpecFunError::Domain(format!("contour quadrature needs u > 0, got {u}")));
    }
    let panels = ((u + nu.norm()) / 2.0).ceil() as usize + 4;
    let small = 1e-3 * tol;
    let arc = integrate(
        |th| (nu * th - u * th.sin()).cos(),
        0.0,
        PI,
        panels,
        0.0,
        small,
        MAX_PANELS,
    );
    let mut value = arc.value / PI;
    let mut err = arc.error / PI;

    let s = (nu * PI).sin();
    if s.norm() > 0.0 {
        // cut the ray once the integrand is negligible
        let target = (1.0 / small).ln() + 5.0;
        let mut t_max = 1.0;
        while u * f64::sinh(t_max) + nu.re * t_max < target {
            t_max *= 1.5;
            if t_max > 1e4 {
                return Err(SpecFunError::Domain("ray integral does not decay".into()));
            }
        }
        let ray = integrate(
            |t| (-(u * t.sinh()) - nu * t).exp(),
            0.0,
            t_max,
            8,
            0.0,
            small,
            MAX_PANELS,
        );
        let tail = (-target).exp();
        value -= s / PI * ray.value;
        err += s.norm() / PI * (ray.error + tail);
    }
    err += 4.0 * f64::EPSILON * (arc.value.norm() / PI + value.norm());
    Ok((value, err))
}

/// The Sonine integral along `Re s = a`, truncated at `|Im s| = T` with `T`
/// chosen from the power decay `|s|^{−Re ν − 1}`; needs `Re ν > 0`.
pub fn sonine_line_quadrature(
    nu: Complex64,
    u: f64,
    a: f64,
    tol: f64,
) -> Result<(Complex64, f64), SpecFunError> {
    if !(nu.re > 0.0) || !(a > 0.0) || !(u >= 0.0) {
        return Err(SpecFunError::Domain(format!(
            "line quadrature needs Re ν > 0, a > 0, u ≥ 0 (ν = {nu}, a = {a}, u = {u})"
        )));
    }
    let alpha = nu.re;
    let growth = a + PI * nu.im.abs() / 2.0;
    // ∫_T^∞ |s|^{−α−1} dt ≤ T^{−α}/α on each side
    let t_max = ((growth.exp() / (alpha * tol * 1e-2)).ln() / alpha).exp().clamp(50.0, 2e5);
    let q = u * u / 4.0;
    let panels = (t_max / 2.0).ceil() as usize;
    let line = integrate(
        |t| {
            let s = Complex64::new(a, t);
            (s - q / s - (nu + 1.0) * s.ln()).exp()
        },
        -t_max,
        t_max,
        panels,
        0.0,
        1e-3 * tol,
        MAX_PANELS * 4,
    );
    let pref = (nu * (u / 2.0).ln()).exp() / (2.0 * PI);
    let tail = 2.0 * growth.exp() * t_max.powf(-alpha) / alpha;
    let value = pref * line.value;
    let err = pref.norm() * (line.error + tail) + 4.0 * f64::EPSILON * value.norm();
    Ok((value, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_order_closed_form() {
        for u in [0.5, 4.0, 30.0] {
            let (v, e) = sonine_hankel_quadrature(Complex64::new(0.5, 0.0), u, 1e-12).unwrap();
            let exact = (2.0 / (PI * u)).sqrt() * u.sin();
            assert!((v.re - exact).abs() < 1e-11, "u={u}");
            assert!(e < 1e-10);
        }
    }

    #[test]
    fn contours_agree() {
        let nu = Complex64::new(4.0, 0.0);
        let (h, _) = sonine_hankel_quadrature(nu, 3.0, 1e-12).unwrap();
        let (l, e) = sonine_line_quadrature(nu, 3.0, 1.0, 1e-12).unwrap();
        assert!((h - l).norm() < 1e-10, "{h} vs {l} (err {e})");
    }

    #[test]
    fn domain_checks() {
        assert!(sonine_hankel_quadrature(Complex64::new(1.0, 0.0), 0.0, 1e-8).is_err());
        assert!(sonine_line_quadrature(Complex64::new(-0.5, 0.0), 1.0, 1.0, 1e-8).is_err());
        assert!(sonine_line_quadrature(Complex64::new(1.0, 0.0), 1.0, 0.0, 1e-8).is_err());
    }
}
