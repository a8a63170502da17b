use std::f64::consts::PI;

use num_complex::Complex64;

use super::SpecFunError;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// `B_{2j} / (2j (2j−1))` for `j = 1..=10`.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// Stirling series threshold on `|s|`.
const STIRLING_MIN: f64 = 15.0;

fn stirling(s: Complex64) -> Complex64 {
    let inv = s.inv();
    let inv2 = inv * inv;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        corr += c * pow;
        pow *= inv2;
    }
    (s - 0.5) * s.ln() - s + LN_SQRT_2PI + corr
}

/// `ln sin(πs)` that stays finite for large `|Im s|`.
fn ln_sin_pi(s: Complex64) -> Complex64 {
    let w = PI * s;
    let i = Complex64::i();
    if w.im > 20.0 {
        (0.5 * i).ln() - i * w + (1.0 - (2.0 * i * w).exp()).ln()
    } else if w.im < -20.0 {
        (-0.5 * i).ln() + i * w + (1.0 - (-2.0 * i * w).exp()).ln()
    } else {
        w.sin().ln()
    }
}

/// `log Γ(s)`.
///
/// Stirling's series with ten Bernoulli corrections once `|s| ≥ 15`, upward
/// recurrence below that, and reflection for `Re s < 1/2`. On `Re s ≥ 1/2`
/// the result is the branch that is real on the positive axis and continuous
/// in `s`; in the reflected half-plane only `exp(log_gamma)` is meaningful.
pub fn log_gamma(s: Complex64) -> Result<Complex64, SpecFunError> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(SpecFunError::NonFinite("log_gamma argument"));
    }
    if s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0 {
        return Err(SpecFunError::Pole { at: s.re as i64 });
    }
    if s.re < 0.5 {
        let reflected = log_gamma(1.0 - s)?;
        return Ok(PI.ln() - ln_sin_pi(s) - reflected);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut t = s;
    while t.norm() < STIRLING_MIN {
        shift += t.ln();
        t += 1.0;
    }
    let v = stirling(t) - shift;
    if s.im == 0.0 {
        Ok(Complex64::new(v.re, 0.0))
    } else {
        Ok(v)
    }
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma_real(x: f64) -> Result<f64, SpecFunError> {
    if !(x > 0.0) {
        return Err(SpecFunError::Domain(format!("ln_gamma_real needs x > 0, got {x}")));
    }
    Ok(log_gamma(Complex64::new(x, 0.0))?.re)
}

/// `Γ(ρ) / Γ(ρ + offset)` evaluated as one exponential of a log-gamma difference.
pub fn gamma_ratio(rho: Complex64, offset: f64) -> Result<Complex64, SpecFunError> {
    let num = log_gamma(rho)?;
    let den = log_gamma(rho + offset)?;
    Ok((num - den).exp())
}
