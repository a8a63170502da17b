//! Truncated generating functions on the half-plane `Re z > 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{sieve_von_mangoldt, ArithmeticError, LambdaTable, LinnikTable};
use crate::parallel::ComplexNeumaier;

/// Minimum `cutoff²·a` accepted by the theta-type series.
const THETA_CUTOFF_FLOOR: f64 = 40.0;

/// `z = a + iy` with `a > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexPoint {
    pub a: f64,
    pub y: f64,
}

impl ComplexPoint {
    pub fn new(a: f64, y: f64) -> Result<Self, ArithmeticError> {
        if !(a > 0.0) || !a.is_finite() || !y.is_finite() {
            return Err(ArithmeticError::Domain(format!("need a > 0 and finite y, got a = {a}, y = {y}")));
        }
        Ok(Self { a, y })
    }

    pub fn from_complex(z: Complex64) -> Result<Self, ArithmeticError> {
        Self::new(z.re, z.im)
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.a, self.y)
    }
}

/// A truncated series together with a bound on the discarded tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: Complex64,
    pub cutoff: usize,
    pub tail_bound: f64,
}

/// Bound for `Σ_{m>C} log(m) e^{-ma}` using `log(C+j) ≤ log(C+1) + (j−1)/(C+1)`.
fn s_tilde_tail(cutoff: usize, a: f64) -> f64 {
    let c1 = cutoff as f64 + 1.0;
    let q = (-a).exp();
    let one_minus = -(-a).exp_m1();
    let lead = (-a * c1).exp();
    lead * (c1.ln() / one_minus + q / (c1 * one_minus * one_minus))
}

/// `S̃(z) = Σ_{m≤C} Λ(m) e^{-mz}` with a tail bound.
pub fn s_tilde(lambda: &LambdaTable, z: ComplexPoint, cutoff: usize) -> Result<SeriesValue, ArithmeticError> {
    if lambda.limit() < cutoff {
        return Err(ArithmeticError::TableTooShort { have: lambda.limit(), need: cutoff });
    }
    let zc = z.z();
    let mut acc = ComplexNeumaier::new();
    for m in lambda.prime_powers().take_while(|&m| m <= cutoff) {
        acc.add(lambda.get(m) * (-(m as f64) * zc).exp());
    }
    Ok(SeriesValue { value: acc.value(), cutoff, tail_bound: s_tilde_tail(cutoff, z.a) })
}

/// Smallest cutoff whose `S̃` tail bound is below `tol`.
pub fn s_tilde_cutoff(a: f64, tol: f64) -> usize {
    let mut c = ((tol.recip().ln().max(1.0)) / a).ceil() as usize;
    while s_tilde_tail(c, a) > tol {
        c += (c / 8).max(1);
    }
    c
}

/// `S̃(z)` with the cutoff chosen from `(a, tol)`; builds its own `Λ` table.
pub fn s_tilde_auto(z: ComplexPoint, tol: f64) -> Result<SeriesValue, ArithmeticError> {
    let c = s_tilde_cutoff(z.a, tol);
    let lambda = sieve_von_mangoldt(c as u64)?;
    s_tilde(&lambda, z, c)
}

fn omega2_tail(cutoff: usize, a: f64) -> f64 {
    let c1 = cutoff as f64 + 1.0;
    (-c1 * c1 * a).exp() / -(-(2.0 * c1) * a).exp_m1()
}

/// `ω₂(z) = Σ_{1≤m≤C} e^{-m²z}`. Requires `C²·a ≥ 40`.
pub fn omega2(z: ComplexPoint, cutoff: usize) -> Result<SeriesValue, ArithmeticError> {
    let c = cutoff as f64;
    if c * c * z.a < THETA_CUTOFF_FLOOR {
        return Err(ArithmeticError::CutoffTooSmall { cutoff, a: z.a, required: THETA_CUTOFF_FLOOR });
    }
    let zc = z.z();
    let mut acc = ComplexNeumaier::new();
    for m in 1..=cutoff {
        let m2 = (m * m) as f64;
        acc.add((-m2 * zc).exp());
    }
    Ok(SeriesValue { value: acc.value(), cutoff, tail_bound: omega2_tail(cutoff, z.a) })
}

fn theta_cutoff(a: f64, tol: f64) -> usize {
    let mut c = (THETA_CUTOFF_FLOOR / a).sqrt().ceil() as usize;
    while omega2_tail(c, a) > tol {
        c += 1;
    }
    c
}

/// `ω₂(z)` with the cutoff chosen from `(a, tol)`.
pub fn omega2_auto(z: ComplexPoint, tol: f64) -> Result<SeriesValue, ArithmeticError> {
    omega2(z, theta_cutoff(z.a, tol))
}

/// `θ₃(z) = Σ_{m∈ℤ} e^{-m²z} = 1 + 2ω₂(z)`; the `m < 0` half is folded into the factor 2.
pub fn theta3(z: ComplexPoint, cutoff: usize) -> Result<SeriesValue, ArithmeticError> {
    let w = omega2(z, cutoff)?;
    Ok(SeriesValue { value: 1.0 + 2.0 * w.value, cutoff, tail_bound: 2.0 * w.tail_bound })
}

pub fn theta3_auto(z: ComplexPoint, tol: f64) -> Result<SeriesValue, ArithmeticError> {
    theta3(z, theta_cutoff(z.a, tol))
}

/// Relative residual of `θ₃(z) = (π/z)^{1/2} θ₃(π²/z)`.
pub fn theta_modular_residual(z: ComplexPoint) -> Result<f64, ArithmeticError> {
    let zc = z.z();
    let lhs = theta3_auto(z, 1e-18)?.value;
    let w = ComplexPoint::from_complex(PI * PI / zc)?;
    let rhs = (PI / zc).sqrt() * theta3_auto(w, 1e-18)?.value;
    Ok((lhs - rhs).norm() / lhs.norm())
}

/// Both sides of `S̃(z)·ω₂(z)² = Σ_n r_Q(n) e^{-nz}` truncated at `n ≤ C`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GeneratingIdentity {
    pub convolution: Complex64,
    pub product: Complex64,
    pub residual: f64,
    pub bound: f64,
}

/// Compare the truncated `r_Q` series against the product of generating
/// functions. The bound combines the `r_Q` tail (`r_Q(n) ≤ (π/4)·n·log n`)
/// with the propagated tails of `S̃` and `ω₂`.
pub fn generating_identity(
    lambda: &LambdaTable,
    rq: &LinnikTable,
    z: ComplexPoint,
    cutoff: usize,
) -> Result<GeneratingIdentity, ArithmeticError> {
    if rq.limit() < cutoff {
        return Err(ArithmeticError::TableTooShort { have: rq.limit(), need: cutoff });
    }
    let zc = z.z();
    let mut acc = ComplexNeumaier::new();
    for n in 1..=cutoff {
        let r = rq.get(n);
        if r != 0.0 {
            acc.add(r * (-(n as f64) * zc).exp());
        }
    }
    let convolution = acc.value();

    let mut rq_tail = 0.0;
    let mut n = cutoff + 1;
    loop {
        let nf = n as f64;
        let t = 0.25 * PI * nf * nf.ln() * (-nf * z.a).exp();
        rq_tail += t;
        if t < 1e-30 * rq_tail.max(f64::MIN_POSITIVE) || n > cutoff + 100_000_000 {
            break;
        }
        n += 1;
    }

    let s = s_tilde(lambda, z, cutoff.min(lambda.limit()))?;
    let w = omega2_auto(z, 1e-20)?;
    let product = s.value * w.value * w.value;
    let wn = w.value.norm() + w.tail_bound;
    let sn = s.value.norm() + s.tail_bound;
    let product_err = s.tail_bound * wn * wn + sn * (2.0 * wn * w.tail_bound);
    let rounding = 1e-13 * (convolution.norm() + product.norm());
    Ok(GeneratingIdentity {
        convolution,
        product,
        residual: (convolution - product).norm(),
        bound: rq_tail + product_err + rounding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::compute_rq;

    #[test]
    fn s_tilde_small_direct_sum() {
        let lam = sieve_von_mangoldt(20).unwrap();
        let z = ComplexPoint::new(10.0, 0.0).unwrap();
        let v = s_tilde(&lam, z, 20).unwrap();
        let direct: f64 = (1..=20).map(|m| lam.get(m) * (-10.0 * m as f64).exp()).sum();
        assert!((v.value.re - direct).abs() <= 1e-15 * direct);
        assert!((v.value.re / (2f64.ln() * (-20f64).exp()) - 1.0).abs() < 1e-3);
        assert_eq!(v.value.im, 0.0);
    }

    #[test]
    fn s_tilde_decays() {
        let lam = sieve_von_mangoldt(50).unwrap();
        let big = s_tilde(&lam, ComplexPoint::new(40.0, 1.0).unwrap(), 50).unwrap();
        assert!(big.value.norm() < 1e-30);
    }

    #[test]
    fn s_tilde_pnt_form() {
        let a = 1e-3;
        let v = s_tilde_auto(ComplexPoint::new(a, 0.0).unwrap(), 1e-10).unwrap();
        assert!((a * v.value.re - 1.0).abs() < 0.15, "a S(a) = {}", a * v.value.re);
    }

    #[test]
    fn s_tilde_tail_is_a_bound() {
        let lam = sieve_von_mangoldt(40_000).unwrap();
        let z = ComplexPoint::new(1e-3, 0.0).unwrap();
        let full = s_tilde(&lam, z, 40_000).unwrap();
        for c in [2000usize, 5000, 10_000] {
            let part = s_tilde(&lam, z, c).unwrap();
            let diff = (full.value - part.value).norm();
            assert!(diff <= part.tail_bound, "c = {c}");
            // the bound is no looser than the geometric majorant 2·C·e^{-Ca}/a
            let majorant = 2.0 * c as f64 * (-(c as f64) * z.a).exp() / z.a;
            assert!(part.tail_bound <= majorant);
        }
    }

    #[test]
    fn theta_identity_exact() {
        let z = ComplexPoint::new(0.3, 1.7).unwrap();
        let w = omega2(z, 40).unwrap();
        let t = theta3(z, 40).unwrap();
        assert_eq!(t.value, 1.0 + 2.0 * w.value);
    }

    #[test]
    fn omega2_trivial_bound() {
        for a in [0.01, 0.1, 1.0] {
            let wa = omega2_auto(ComplexPoint::new(a, 0.0).unwrap(), 1e-16).unwrap().value.re;
            assert!(wa <= PI.sqrt() / (2.0 * a.sqrt()));
            for y in [-2.0, 0.0, 3.0] {
                let w = omega2_auto(ComplexPoint::new(a, y).unwrap(), 1e-16).unwrap();
                assert!(w.value.norm() <= wa * (1.0 + 1e-14));
            }
        }
    }

    #[test]
    fn modular_relation_single_point() {
        let r = theta_modular_residual(ComplexPoint::new(1.0, 0.3).unwrap()).unwrap();
        assert!(r < 1e-12, "residual {r}");
    }

    #[test]
    fn cutoff_precondition() {
        let z = ComplexPoint::new(0.01, 0.0).unwrap();
        assert!(matches!(omega2(z, 10), Err(ArithmeticError::CutoffTooSmall { .. })));
        assert!(ComplexPoint::new(0.0, 1.0).is_err());
        assert!(ComplexPoint::new(-1.0, 1.0).is_err());
    }

    #[test]
    fn generating_identity_small() {
        let lam = sieve_von_mangoldt(3000).unwrap();
        let rq = compute_rq(&lam, 3000).unwrap();
        let g = generating_identity(&lam, &rq, ComplexPoint::new(0.05, 0.5).unwrap(), 3000).unwrap();
        assert!(g.residual <= g.bound, "{g:?}");
    }
}
