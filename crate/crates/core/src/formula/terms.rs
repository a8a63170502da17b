//! The four main terms. Every Bessel factor is written through
//! `F_ν(u) = Γ(ν+1)(2/u)^ν J_ν(u)` with `u = 2π√(λN)`, which turns each block
//! into a Γ-ratio times a power of `N` times a sum of `F` values:
//!
//! * M3 = πN^{k+2}/Γ(k+3)·Σ_λ r(λ)F_{k+2}(u_λ)
//!   − Σ_ρ πΓ(ρ)/Γ(k+2+ρ)·N^{k+1+ρ}·Σ_λ r(λ)F_{k+1+ρ}(u_λ)
//! * M4 = πN^{k+2}/Γ(k+3)·Σ_m F_{k+2}(u_m) − √πN^{k+3/2}/Γ(k+5/2)·Σ_m F_{k+3/2}(u_m)
//!   − Σ_ρ πΓ(ρ)/Γ(k+2+ρ)·N^{k+1+ρ}·Σ_m F_{k+1+ρ}(u_m)
//!   + Σ_ρ √πΓ(ρ)/Γ(k+3/2+ρ)·N^{k+1/2+ρ}·Σ_m F_{k+1/2+ρ}(u_m)
//!
//! where `r(λ)` counts `l1, l2 ≥ 1` with `l1² + l2² = λ` and `u_m = u_{m²}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::bounds::{
    index_tail, lattice_points, lattice_tail, real_bessel_bound, real_bessel_majorant,
    zero_bessel_envelope, zero_bessel_majorant,
};
use super::{FormulaError, TruncationSpec};
use crate::arithmetic::CesaroParams;
use crate::parallel::{compensated_sum, ComplexNeumaier};
use crate::specfun::{bessel_kernel, gamma_ratio, ln_gamma_real, log_gamma, PrecisionConfig, SpecFunError};
use crate::zeros::{paired_zero_sum, zero_tail_estimate, ZeroSet, ZetaZero};

/// Ordinate below the first zero, used as the start of a tail when no zero is kept.
const BELOW_FIRST_ZERO: f64 = 14.0;

/// One main term, its blocks in display order, and bounds on what the
/// zero cutoff `Z` and the lattice/index cutoff (`L` or `M`) leave out.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TermValue {
    pub value: f64,
    pub blocks: Vec<f64>,
    pub zero_tail: f64,
    pub cutoff_tail: f64,
}

/// Power of `N` in the fourth block of M4: `N^{ρ/2}` as in the theorem, or
/// the `N^{ρ}` variant (an extra `N^{ρ/2}`) kept for comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Block4Power {
    HalfRho,
    FullRho,
}

fn spec_err(term: &'static str) -> impl Fn(SpecFunError) -> FormulaError {
    move |source| FormulaError::Term { term, source }
}

fn ln_n(params: &CesaroParams) -> f64 {
    (params.n as f64).ln()
}

/// `u = 2π√(λN)`.
fn u_of(lambda: f64, n: f64) -> f64 {
    2.0 * PI * (lambda * n).sqrt()
}

/// `c N^{e}/Γ(g)` as one exponential.
fn real_coef(c: f64, e: f64, g: f64, ln_n: f64) -> Result<f64, SpecFunError> {
    Ok(c * (e * ln_n - ln_gamma_real(g)?).exp())
}

/// `c Γ(ρ)/Γ(ρ+g) N^{e+ρ}`.
fn zero_coef(c: f64, rho: Complex64, g: f64, e: f64, ln_n: f64) -> Result<Complex64, SpecFunError> {
    Ok(c * (log_gamma(rho)? - log_gamma(rho + g)? + (rho + e) * ln_n).exp())
}

fn tail_start(zeros: &[ZetaZero]) -> f64 {
    zeros.last().map_or(BELOW_FIRST_ZERO, |z| z.gamma)
}

/// `πN^{k+2}/(4Γ(k+3)) + N^{k+1}/(4Γ(k+2)) − √πN^{k+3/2}/(2Γ(k+5/2))`.
pub fn m1_term(params: &CesaroParams) -> Result<f64, FormulaError> {
    let k = params.k;
    let l = ln_n(params);
    let parts = [
        real_coef(PI / 4.0, k + 2.0, k + 3.0, l),
        real_coef(0.25, k + 1.0, k + 2.0, l),
        real_coef(-PI.sqrt() / 2.0, k + 1.5, k + 2.5, l),
    ];
    let mut v = Vec::with_capacity(3);
    for p in parts {
        v.push(p.map_err(spec_err("m1"))?);
    }
    Ok(compensated_sum(v))
}

/// The three zero sums of M2 with a tail bound for zeros beyond `Z`.
pub fn m2_term(
    params: &CesaroParams,
    zeros: &ZeroSet,
    spec: &TruncationSpec,
) -> Result<TermValue, FormulaError> {
    let used = zeros.take(spec.z)?;
    let k = params.k;
    let l = ln_n(params);
    let sqrt_pi = PI.sqrt();
    let blocks = [(-PI / 4.0, k + 2.0, k + 1.0), (-0.25, k + 1.0, k), (sqrt_pi / 2.0, k + 1.5, k + 0.5)];
    let mut out = Vec::with_capacity(3);
    for (c, g, e) in blocks {
        let s = paired_zero_sum(used, |z| zero_coef(c, z.rho(), g, e, l)).map_err(spec_err("m2"))?;
        out.push(s);
    }
    let value = compensated_sum(out.iter().copied());

    let beta = zeros.max_beta();
    let n = params.n as f64;
    let envelope = |t: f64| {
        let rho = Complex64::new(beta, t);
        let mag = |c: f64, g: f64, e: f64| {
            gamma_ratio(rho, g).map_or(f64::INFINITY, |r| c.abs() * r.norm() * n.powf(e + beta))
        };
        2.0 * blocks.iter().map(|&(c, g, e)| mag(c, g, e)).sum::<f64>()
    };
    let zero_tail = zero_tail_estimate(tail_start(used), envelope);
    Ok(TermValue { value, blocks: out, zero_tail, cutoff_tail: 0.0 })
}

/// `Σ_λ r(λ) F_ν(u_λ)` over the given points, compensated.
fn kernel_sum(
    nu: Complex64,
    points: &[(f64, f64)],
    n: f64,
    cfg: &PrecisionConfig,
) -> Result<Complex64, SpecFunError> {
    let mut acc = ComplexNeumaier::new();
    for &(lam, weight) in points {
        let f = bessel_kernel(nu, u_of(lam, n), cfg)?;
        acc.add(weight * f.value);
    }
    Ok(acc.value())
}

/// Real-order block `c N^{e}/Γ(g) Σ w F_ν(u)`.
fn real_block(
    c: f64,
    nu: f64,
    points: &[(f64, f64)],
    params: &CesaroParams,
    cfg: &PrecisionConfig,
    term: &'static str,
) -> Result<f64, FormulaError> {
    if points.is_empty() {
        return Ok(0.0);
    }
    let n = params.n as f64;
    let coef = real_coef(c, nu, nu + 1.0, ln_n(params)).map_err(spec_err(term))?;
    let s = kernel_sum(Complex64::new(nu, 0.0), points, n, cfg).map_err(spec_err(term))?;
    Ok(coef * s.re)
}

/// Zero block `Σ_ρ c Γ(ρ)/Γ(ν+1) N^{ν} Σ w F_ν(u)` with `ν = shift + ρ`,
/// optionally with an extra `N^{ρ/2}`.
#[allow(clippy::too_many_arguments)]
fn zero_block(
    c: f64,
    shift: f64,
    extra_half_rho: bool,
    used: &[ZetaZero],
    points: &[(f64, f64)],
    params: &CesaroParams,
    cfg: &PrecisionConfig,
    term: &'static str,
) -> Result<f64, FormulaError> {
    if points.is_empty() {
        return Ok(0.0);
    }
    let n = params.n as f64;
    let l = ln_n(params);
    paired_zero_sum(used, |z| {
        let rho = z.rho();
        let mut coef = zero_coef(c, rho, shift + 1.0, shift, l)?;
        if extra_half_rho {
            coef *= (rho * (0.5 * l)).exp();
        }
        Ok(coef * kernel_sum(rho + shift, points, n, cfg)?)
    })
    .map_err(spec_err(term))
}

/// Both blocks of M3, with zero and lattice tail bounds.
pub fn m3_term(
    params: &CesaroParams,
    zeros: &ZeroSet,
    spec: &TruncationSpec,
    cfg: &PrecisionConfig,
) -> Result<TermValue, FormulaError> {
    let used = zeros.take(spec.z)?;
    let k = params.k;
    let points: Vec<(f64, f64)> = lattice_points(spec.l).into_iter().map(|(l, r)| (l as f64, r as f64)).collect();
    let a = real_block(PI, k + 2.0, &points, params, cfg, "m3")?;
    let b = -zero_block(PI, k + 1.0, false, used, &points, params, cfg, "m3")?;
    let value = a + b;
    let beta = zeros.max_beta();
    let n = params.n as f64;
    Ok(TermValue {
        value,
        blocks: vec![a, b],
        zero_tail: m3_zero_tail(k, n, beta, &points, tail_start(used)),
        cutoff_tail: m3_lattice_tail(k, n, used, spec.l),
    })
}

/// `π(2N/u)^{k+2}` times the real Bessel bound: the size of one real-order
/// summand `πN^{k+2}/Γ(k+3)·F_{k+2}(u)`.
fn real_summand(c: f64, order: f64, n: f64, u: f64, bound: fn(f64, f64) -> f64) -> f64 {
    c * (2.0 * n / u).powf(order) * bound(order, u)
}

fn m3_zero_tail(k: f64, n: f64, beta: f64, points: &[(f64, f64)], t0: f64) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let alpha = k + 1.0 + beta;
    let g = |t: f64| {
        2.0 * points
            .iter()
            .map(|&(lam, r)| {
                let u = u_of(lam, n);
                r * PI * (2.0 * n / u).powf(alpha) * zero_bessel_envelope(beta, t, alpha, u)
            })
            .sum::<f64>()
    };
    zero_tail_estimate(t0, g)
}

pub(super) fn lattice_tail_for(k: f64, n: f64, used: &[ZetaZero], l: u32) -> f64 {
    m3_lattice_tail(k, n, used, l)
}

pub(super) fn index_tail_for(k: f64, n: f64, used: &[ZetaZero], m: u32, extra: f64) -> f64 {
    m4_index_tail(k, n, used, m, extra)
}

fn m3_lattice_tail(k: f64, n: f64, used: &[ZetaZero], l: u32) -> f64 {
    let nu = k + 2.0;
    let p_real = nu / 2.0 + 0.25;
    let real = lattice_tail(
        l,
        |lam| real_summand(PI, nu, n, u_of(lam, n), real_bessel_bound),
        |lam| real_summand(PI, nu, n, u_of(lam, n), real_bessel_majorant),
        p_real,
    );
    let zeros: f64 = used
        .iter()
        .map(|z| {
            let alpha = k + 1.0 + z.beta;
            let scale = |lam: f64| PI * (2.0 * n / u_of(lam, n)).powf(alpha);
            2.0 * lattice_tail(
                l,
                |lam| scale(lam) * zero_bessel_envelope(z.beta, z.gamma, alpha, u_of(lam, n)),
                |lam| scale(lam) * zero_bessel_majorant(z.beta, z.gamma, u_of(lam, n)),
                alpha / 2.0 + 0.25,
            )
        })
        .sum();
    real + zeros
}

/// The four blocks of M4, with the fourth block's `N`-power selectable.
pub fn m4_term(
    params: &CesaroParams,
    zeros: &ZeroSet,
    spec: &TruncationSpec,
    cfg: &PrecisionConfig,
    block4: Block4Power,
) -> Result<TermValue, FormulaError> {
    let used = zeros.take(spec.z)?;
    let k = params.k;
    let sqrt_pi = PI.sqrt();
    let points: Vec<(f64, f64)> = (1..=spec.m).map(|m| ((m as f64).powi(2), 1.0)).collect();
    let b1 = real_block(PI, k + 2.0, &points, params, cfg, "m4")?;
    let b2 = -real_block(sqrt_pi, k + 1.5, &points, params, cfg, "m4")?;
    let b3 = -zero_block(PI, k + 1.0, false, used, &points, params, cfg, "m4")?;
    let full = block4 == Block4Power::FullRho;
    let b4 = zero_block(sqrt_pi, k + 0.5, full, used, &points, params, cfg, "m4")?;
    let value = compensated_sum([b1, b2, b3, b4]);
    let beta = zeros.max_beta();
    let n = params.n as f64;
    let extra = if full { n.powf(beta / 2.0) } else { 1.0 };
    Ok(TermValue {
        value,
        blocks: vec![b1, b2, b3, b4],
        zero_tail: m4_zero_tail(k, n, beta, spec.m, extra, tail_start(used)),
        cutoff_tail: m4_index_tail(k, n, used, spec.m, extra),
    })
}

fn m4_zero_tail(k: f64, n: f64, beta: f64, m: u32, extra: f64, t0: f64) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let a3 = k + 1.0 + beta;
    let a4 = k + 0.5 + beta;
    let sqrt_pi = PI.sqrt();
    let g = |t: f64| {
        2.0 * (1..=m)
            .map(|j| {
                let u = u_of((j as f64).powi(2), n);
                PI * (2.0 * n / u).powf(a3) * zero_bessel_envelope(beta, t, a3, u)
                    + extra * sqrt_pi * (2.0 * n / u).powf(a4) * zero_bessel_envelope(beta, t, a4, u)
            })
            .sum::<f64>()
    };
    zero_tail_estimate(t0, g)
}

fn m4_index_tail(k: f64, n: f64, used: &[ZetaZero], m: u32, extra: f64) -> f64 {
    let sqrt_pi = PI.sqrt();
    let u = |x: f64| 2.0 * PI * x * n.sqrt();
    let real = |c: f64, nu: f64| {
        index_tail(
            m,
            |x| real_summand(c, nu, n, u(x), real_bessel_bound),
            |x| real_summand(c, nu, n, u(x), real_bessel_majorant),
            nu + 0.5,
        )
    };
    let mut total = real(PI, k + 2.0) + real(sqrt_pi, k + 1.5);
    for z in used {
        for (c, alpha) in [(PI, k + 1.0 + z.beta), (extra * sqrt_pi, k + 0.5 + z.beta)] {
            let scale = |x: f64| c * (2.0 * n / u(x)).powf(alpha);
            total += 2.0
                * index_tail(
                    m,
                    |x| scale(x) * zero_bessel_envelope(z.beta, z.gamma, alpha, u(x)),
                    |x| scale(x) * zero_bessel_majorant(z.beta, z.gamma, u(x)),
                    alpha + 0.5,
                );
        }
    }
    total
}
