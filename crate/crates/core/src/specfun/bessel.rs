use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fixed::kernel_fixed;
use super::gamma::log_gamma;
use super::sonine::sonine_hankel_quadrature;
use super::SpecFunError;

/// Largest `u` for which the double-precision series is attempted first.
const DOUBLE_SERIES_MAX_U: f64 = 30.0;
/// Smallest `u` at which the Hankel expansion is tried.
const ASYMPTOTIC_MIN_U: f64 = 30.0;
/// Starting abscissa of the ODE continuation.
const ODE_START_U: f64 = 8.0;
/// Taylor step measured in local oscillation lengths.
const ODE_STEP: f64 = 1.5;
const ODE_MAX_TERMS: usize = 96;

/// Requested evaluation strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BesselStrategy {
    Series,
    Asymptotic,
    Quadrature,
}

/// Path that actually produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    DoubleSeries,
    ExtendedSeries,
    Asymptotic,
    Quadrature,
    /// Taylor-series integration of the kernel ODE from a small-`u` start.
    Ode,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionConfig {
    /// Cap on the integer width used by the extended-precision series.
    pub working_bits: u32,
    /// Relative accuracy every returned value must meet.
    pub target_rel_tol: f64,
    /// Forces one strategy instead of the automatic choice.
    pub strategy_override: Option<BesselStrategy>,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        Self { working_bits: 1 << 15, target_rel_tol: 1e-10, strategy_override: None }
    }
}

impl PrecisionConfig {
    pub fn new(working_bits: u32, target_rel_tol: f64) -> Result<Self, SpecFunError> {
        let cfg = Self { working_bits, target_rel_tol, strategy_override: None };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_strategy(mut self, s: BesselStrategy) -> Self {
        self.strategy_override = Some(s);
        self
    }

    pub fn validate(&self) -> Result<(), SpecFunError> {
        if self.working_bits < 53 {
            return Err(SpecFunError::InvalidConfig(format!(
                "working_bits must be at least 53, got {}",
                self.working_bits
            )));
        }
        if !(self.target_rel_tol > 0.0 && self.target_rel_tol < 1.0) {
            return Err(SpecFunError::InvalidConfig(format!(
                "target_rel_tol must lie in (0, 1), got {}",
                self.target_rel_tol
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BesselValue {
    pub value: Complex64,
    pub method: Method,
    /// Estimated relative error of `value`.
    pub rel_error: f64,
    /// Integer width used by the extended series, 0 otherwise.
    pub bits: u32,
}

/// `J_ν(u)` for complex `ν` and real `u ≥ 0`.
pub fn bessel_j(nu: Complex64, u: f64, cfg: &PrecisionConfig) -> Result<Complex64, SpecFunError> {
    bessel_j_detailed(nu, u, cfg).map(|v| v.value)
}

/// `J_ν(u)` together with the method used and its error estimate.
pub fn bessel_j_detailed(
    nu: Complex64,
    u: f64,
    cfg: &PrecisionConfig,
) -> Result<BesselValue, SpecFunError> {
    cfg.validate()?;
    check_args(nu, u)?;
    if nu.im == 0.0 && nu.re < 0.0 && nu.re.fract() == 0.0 {
        let mut v = bessel_j_detailed(-nu, u, cfg)?;
        if (nu.re as i64) % 2 != 0 {
            v.value = -v.value;
        }
        return Ok(v);
    }
    if u == 0.0 {
        let value = if nu == Complex64::new(0.0, 0.0) {
            Complex64::new(1.0, 0.0)
        } else if nu.re > 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            return Err(SpecFunError::Domain(format!("J_ν(0) is undefined for ν = {nu}")));
        };
        return Ok(BesselValue { value, method: Method::Exact, rel_error: 0.0, bits: 0 });
    }
    match cfg.strategy_override {
        Some(BesselStrategy::Asymptotic) => asymptotic_checked(nu, u, cfg.target_rel_tol),
        Some(BesselStrategy::Quadrature) => quadrature_checked(nu, u, cfg.target_rel_tol),
        Some(BesselStrategy::Series) => {
            let k = series_kernel(nu, u, cfg)?;
            kernel_to_j(nu, u, k)
        }
        None => {
            if let Some(v) = try_asymptotic(nu, u, cfg.target_rel_tol) {
                return Ok(v);
            }
            let k = series_kernel(nu, u, cfg)?;
            kernel_to_j(nu, u, k)
        }
    }
}

/// `F_ν(u) = Γ(ν+1)(2/u)^ν J_ν(u) = 0F1(; ν+1; −u²/4)`.
///
/// This normalization keeps the large power and Γ factors out of the
/// numerically delicate part; `F_ν(0) = 1` and `F_ν` is entire in `u`.
pub fn bessel_kernel(
    nu: Complex64,
    u: f64,
    cfg: &PrecisionConfig,
) -> Result<BesselValue, SpecFunError> {
    cfg.validate()?;
    check_args(nu, u)?;
    if !(nu.re > -1.0) {
        return Err(SpecFunError::Domain(format!("kernel needs Re ν > -1, got {nu}")));
    }
    if u == 0.0 {
        return Ok(BesselValue {
            value: Complex64::new(1.0, 0.0),
            method: Method::Exact,
            rel_error: 0.0,
            bits: 0,
        });
    }
    let from_j = |j: BesselValue| -> Result<BesselValue, SpecFunError> {
        let scale = (log_gamma(nu + 1.0)? - nu * (u / 2.0).ln()).exp();
        let value = j.value * scale;
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(SpecFunError::NonFinite("bessel_kernel"));
        }
        let rel_error = j.rel_error + 4.0 * f64::EPSILON * (1.0 + (nu * (u / 2.0).ln()).norm());
        Ok(BesselValue { value: real_if(nu, value), rel_error, ..j })
    };
    match cfg.strategy_override {
        Some(BesselStrategy::Asymptotic) => from_j(asymptotic_checked(nu, u, cfg.target_rel_tol)?),
        Some(BesselStrategy::Quadrature) => from_j(quadrature_checked(nu, u, cfg.target_rel_tol)?),
        Some(BesselStrategy::Series) => series_kernel(nu, u, cfg),
        None => {
            if let Some(j) = try_asymptotic(nu, u, cfg.target_rel_tol) {
                if let Ok(v) = from_j(j) {
                    if v.rel_error <= cfg.target_rel_tol {
                        return Ok(v);
                    }
                }
            }
            series_kernel(nu, u, cfg)
        }
    }
}

fn check_args(nu: Complex64, u: f64) -> Result<(), SpecFunError> {
    if !nu.re.is_finite() || !nu.im.is_finite() || !u.is_finite() {
        return Err(SpecFunError::NonFinite("bessel argument"));
    }
    if u < 0.0 {
        return Err(SpecFunError::Domain(format!("u must be non-negative, got {u}")));
    }
    Ok(())
}

fn real_if(nu: Complex64, v: Complex64) -> Complex64 {
    if nu.im == 0.0 {
        Complex64::new(v.re, 0.0)
    } else {
        v
    }
}

fn kernel_to_j(nu: Complex64, u: f64, k: BesselValue) -> Result<BesselValue, SpecFunError> {
    let scale = (nu * (u / 2.0).ln() - log_gamma(nu + 1.0)?).exp();
    let value = k.value * scale;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(SpecFunError::NonFinite("bessel_j"));
    }
    let rel_error = k.rel_error + 4.0 * f64::EPSILON * (1.0 + (nu * (u / 2.0).ln()).norm());
    Ok(BesselValue { value: real_if(nu, value), rel_error, ..k })
}

/// Double series first for small `u`, then the ODE continuation, escalating
/// to the extended series when neither meets the target.
fn series_kernel(nu: Complex64, u: f64, cfg: &PrecisionConfig) -> Result<BesselValue, SpecFunError> {
    let tol = cfg.target_rel_tol;
    if u <= DOUBLE_SERIES_MAX_U {
        if let Some((value, rel)) = kernel_double(nu, u) {
            if rel <= tol {
                return Ok(BesselValue {
                    value: real_if(nu, value),
                    method: Method::DoubleSeries,
                    rel_error: rel,
                    bits: 0,
                });
            }
        }
    }
    if cfg.strategy_override.is_none() && u > ODE_START_U {
        if let Some((value, rel)) = kernel_ode(nu, u, cfg) {
            if rel <= tol {
                return Ok(BesselValue { value: real_if(nu, value), method: Method::Ode, rel_error: rel, bits: 0 });
            }
        }
    }
    let r = kernel_fixed(nu, u, tol, cfg.working_bits)?;
    Ok(BesselValue {
        value: real_if(nu, r.value),
        method: Method::ExtendedSeries,
        rel_error: r.rel_error,
        bits: r.bits,
    })
}

/// Kernel value and derivative at `u`, accurate to about `1e-15` relative.
fn kernel_start(nu: Complex64, u: f64, cfg: &PrecisionConfig) -> Option<(Complex64, Complex64, f64)> {
    let eval = |nu: Complex64| -> Option<(Complex64, f64)> {
        match kernel_double(nu, u) {
            Some((v, rel)) if rel <= 1e-13 => Some((v, rel)),
            _ => kernel_fixed(nu, u, 1e-16, cfg.working_bits).ok().map(|r| (r.value, r.rel_error)),
        }
    };
    let (w, e0) = eval(nu)?;
    let (w1, e1) = eval(nu + 1.0)?;
    // F_ν' = −u/(2(ν+1)) F_{ν+1}
    let dw = -u / (2.0 * (nu + 1.0)) * w1;
    Some((w, dw, e0.max(e1)))
}

/// Continues `w = F_ν` from `ODE_START_U` to `u` along `u w'' + (2ν+1) w' + u w = 0`
/// with Taylor steps. `F_ν` is the dominant solution going forward when
/// `Re ν ≥ 0`, so rounding errors do not grow relative to it.
///
/// The estimate sums per-step rounding relative to the local envelope
/// `√(|w|² + |w'/ω|²)` and rescales by the final envelope over `|w|`.
fn kernel_ode(nu: Complex64, u: f64, cfg: &PrecisionConfig) -> Option<(Complex64, f64)> {
    if nu.re < 0.0 {
        return None;
    }
    let c = 2.0 * nu + 1.0;
    let cn = c.norm();
    let mut x = ODE_START_U;
    let (mut w, mut dw, start_rel) = kernel_start(nu, x, cfg)?;
    let envelope = |x: f64, w: Complex64, dw: Complex64| {
        let omega = (1.0 + nu.norm_sqr() / (x * x)).sqrt();
        (w.norm_sqr() + (dw / omega).norm_sqr()).sqrt()
    };
    let mut rel = start_rel;
    let mut b = [Complex64::new(0.0, 0.0); ODE_MAX_TERMS];
    while x < u {
        let h = (ODE_STEP / (1.0 + cn / x)).min(0.5 * x).min(u - x);
        b[0] = w;
        b[1] = dw * h;
        let mut sum = b[0] + b[1];
        let mut dsum = b[1];
        let mut abs_sum = b[0].norm() + b[1].norm();
        let mut n = 0usize;
        loop {
            let nf = n as f64;
            let prev = if n == 0 { Complex64::new(0.0, 0.0) } else { b[n - 1] };
            let next = -((nf + 1.0) * (nf + c) * h * b[n + 1] + x * h * h * b[n] + h * h * h * prev)
                / (x * (nf + 1.0) * (nf + 2.0));
            b[n + 2] = next;
            sum += next;
            dsum += (nf + 2.0) * next;
            abs_sum += (nf + 2.0) * next.norm();
            n += 1;
            let small = next.norm() + b[n].norm() <= 1e-18 * sum.norm().max(f64::MIN_POSITIVE);
            if (n > 4 && small) || n + 2 >= ODE_MAX_TERMS {
                if !small {
                    return None;
                }
                break;
            }
        }
        x += h;
        w = sum;
        dw = dsum / h;
        if !w.re.is_finite() || !w.im.is_finite() {
            return None;
        }
        let env = envelope(x, w, dw);
        rel += 4.0 * f64::EPSILON * abs_sum / env;
    }
    let mag = w.norm();
    if mag == 0.0 {
        return None;
    }
    Some((w, 4.0 * rel * envelope(x, w, dw) / mag))
}

/// `0F1(; ν+1; −u²/4)` in double precision with a rounding estimate.
fn kernel_double(nu: Complex64, u: f64) -> Option<(Complex64, f64)> {
    if !(nu.re > -1.0) {
        return None;
    }
    let q = u * u / 4.0;
    let mut t = Complex64::new(1.0, 0.0);
    let mut sum = t;
    let mut weighted = 1.0;
    let mut m = 0u32;
    loop {
        m += 1;
        let mf = m as f64;
        let denom = mf * (nu + mf);
        t = t * (-q) / denom;
        sum += t;
        weighted += (mf + 1.0) * t.norm();
        let ratio = q / denom.norm();
        if ratio < 0.5 && t.norm() <= 1e-18 * sum.norm() {
            break;
        }
        if m > 10_000 {
            return None;
        }
    }
    let mag = sum.norm();
    if mag == 0.0 || !mag.is_finite() {
        return None;
    }
    let err = 2.0 * f64::EPSILON * weighted + 2.0 * t.norm();
    Some((sum, err / mag))
}

fn try_asymptotic(nu: Complex64, u: f64, tol: f64) -> Option<BesselValue> {
    if u < ASYMPTOTIC_MIN_U || u < nu.norm() {
        return None;
    }
    let (value, rel) = hankel(nu, u)?;
    (rel <= tol).then_some(BesselValue { value: real_if(nu, value), method: Method::Asymptotic, rel_error: rel, bits: 0 })
}

fn asymptotic_checked(nu: Complex64, u: f64, tol: f64) -> Result<BesselValue, SpecFunError> {
    let fail = |achieved| SpecFunError::Precision {
        strategy: Method::Asymptotic,
        achieved,
        requested: tol,
        bits: 53,
    };
    let (value, rel) = hankel(nu, u).ok_or_else(|| fail(f64::INFINITY))?;
    if rel > tol {
        return Err(fail(rel));
    }
    Ok(BesselValue { value: real_if(nu, value), method: Method::Asymptotic, rel_error: rel, bits: 0 })
}

fn quadrature_checked(nu: Complex64, u: f64, tol: f64) -> Result<BesselValue, SpecFunError> {
    let (value, abs_err) = sonine_hankel_quadrature(nu, u, tol)?;
    let rel = abs_err / value.norm();
    if !(rel <= tol) {
        return Err(SpecFunError::Precision {
            strategy: Method::Quadrature,
            achieved: rel,
            requested: tol,
            bits: 53,
        });
    }
    Ok(BesselValue { value: real_if(nu, value), method: Method::Quadrature, rel_error: rel, bits: 0 })
}

/// Hankel's expansion `J_ν(u) = √(2/πu)(P cos ω − Q sin ω)`, summed to its
/// smallest term. For large `|Im ν|` the terms first grow, so truncation only
/// happens once `(2k−1)² > |4ν²|`. The error estimate is the smallest term
/// plus rounding on the largest one.
fn hankel(nu: Complex64, u: f64) -> Option<(Complex64, f64)> {
    if u <= 0.0 {
        return None;
    }
    let mu = 4.0 * nu * nu;
    let mu_abs = mu.norm();
    let max_k = (2.0 * u + nu.norm() + 16.0).min(4000.0) as usize;
    let mut p = Complex64::new(1.0, 0.0);
    let mut qs = Complex64::new(0.0, 0.0);
    let mut a = Complex64::new(1.0, 0.0);
    let mut prev = f64::INFINITY;
    let mut last = f64::INFINITY;
    let mut largest = 1.0f64;
    for k in 1..max_k {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a = a * (mu - odd * odd) / (8.0 * kf * u);
        let mag = a.norm();
        if mag > prev && odd * odd > mu_abs {
            last = prev;
            break;
        }
        // even k feed P, odd k feed Q, with sign (−1)^{⌊k/2⌋}
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            qs += sign * a;
        }
        largest = largest.max(mag);
        prev = mag;
        last = mag;
        if mag < 1e-17 * (p.norm() + qs.norm()) {
            break;
        }
    }
    if !largest.is_finite() {
        return None;
    }
    let omega = u - nu * FRAC_PI_2 - FRAC_PI_4;
    let (c, s) = (omega.cos(), omega.sin());
    let amp = (2.0 / (PI * u)).sqrt();
    let value = amp * (p * c - qs * s);
    let scale = amp * (c.norm() + s.norm());
    let err = scale * last + scale * largest * f64::EPSILON * (8.0 + u + nu.norm());
    let mag = value.norm();
    if mag == 0.0 || !mag.is_finite() {
        return None;
    }
    Some((value, err / mag))
}

/// Envelope model for `|J_ν(u)|`, `ν = α + iγ`:
/// `√(2/π) cosh(πγ/2) (u²+γ²)^{-1/4} (u/(|γ| + √(u²+γ²)))^α`.
///
/// Meant for `|γ|` large against `α` and for `u ≳ α`. Multiplied by `|Γ(β+iγ)|`
/// it is the size of the zero-sum summands, which fall off only like a power
/// of `γ`.
pub fn bessel_magnitude_model(nu: Complex64, u: f64) -> f64 {
    let g = nu.im.abs();
    let w = (u * u + g * g).sqrt();
    (2.0 / PI).sqrt() * (PI * g / 2.0).cosh() * w.powf(-0.5) * (u / (g + w)).powf(nu.re)
}
