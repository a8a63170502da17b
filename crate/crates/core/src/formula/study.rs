use num_complex::Complex64;
use serde::Serialize;

use super::{evaluate_with_table, EvalOptions, FormulaError, FormulaReport, TruncationSpec};
use crate::arithmetic::{compute_rq, s_tilde_auto, sieve_von_mangoldt, CesaroParams, ComplexPoint};
use crate::parallel::ComplexNeumaier;
use crate::specfun::log_gamma;
use crate::zeros::{ZeroSet, ZetaZero};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum SpecChoice {
    /// [`TruncationSpec::auto`] per `N`.
    Auto,
    /// Automatic `L`, `M` per `N` for `z` zeros and tolerance `rel_tol·N^{k+1}`,
    /// with optional pinned `L` or `M`.
    AutoWith { z: usize, rel_tol: f64, l: Option<u32>, m: Option<u32> },
    Fixed(TruncationSpec),
}

impl SpecChoice {
    pub fn resolve(&self, params: &CesaroParams, zeros: &ZeroSet) -> Result<TruncationSpec, FormulaError> {
        match *self {
            SpecChoice::Auto => TruncationSpec::auto(params, zeros),
            SpecChoice::AutoWith { z, rel_tol, l, m } => {
                let tol = rel_tol * (params.n as f64).powf(params.k + 1.0);
                let mut s = TruncationSpec::auto_with(params, zeros, z, tol)?;
                if let Some(l) = l {
                    s = s.with_l(l);
                }
                if let Some(m) = m {
                    s = s.with_m(m);
                }
                Ok(s)
            }
            SpecChoice::Fixed(s) => Ok(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingStudy {
    pub reports: Vec<FormulaReport>,
    /// Least-squares slope of `log|residual|` against `log N`.
    pub slope: Option<f64>,
    /// `N` values left out of the fit because their residual is 0.
    pub excluded: Vec<u64>,
}

/// Least-squares slope of `log|y|` against `log x`, skipping `y = 0`.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y != 0.0 && y.is_finite())
        .map(|&(x, y)| (x.ln(), y.abs().ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Evaluates every `N` in the (ascending, at least three long) list against
/// one shared `r_Q` table and fits the residual exponent.
pub fn scaling_study(
    n_list: &[u64],
    k: f64,
    zeros: &ZeroSet,
    choice: SpecChoice,
    opts: &EvalOptions,
) -> Result<ScalingStudy, FormulaError> {
    if n_list.len() < 3 {
        return Err(FormulaError::Invalid(format!(
            "a scaling study needs at least 3 values of N, got {}",
            n_list.len()
        )));
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FormulaError::Invalid("N values must be strictly ascending".into()));
    }
    let n_max = *n_list.last().expect("non-empty");
    let lambda = sieve_von_mangoldt(n_max)?;
    let rq = compute_rq(&lambda, n_max as usize)?;
    let mut reports = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let params = CesaroParams::new(n, k)?;
        let spec = choice.resolve(&params, zeros)?;
        reports.push(evaluate_with_table(&params, &rq, zeros, &spec, opts)?);
    }
    let excluded = reports.iter().filter(|r| r.residual == 0.0).map(|r| r.params.n).collect();
    let pts: Vec<(f64, f64)> = reports.iter().map(|r| (r.params.n as f64, r.residual)).collect();
    Ok(ScalingStudy { reports, slope: fit_loglog_slope(&pts), excluded })
}

/// `S̃(z)` against `1/z − Σ_ρ z^{−ρ}Γ(ρ)` over the given zeros and their
/// conjugates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SExplicitCheck {
    pub a: f64,
    pub y: f64,
    pub s_tilde: Complex64,
    pub main: Complex64,
    pub residual: Complex64,
    /// `|z|^{1/2}` for `|y| ≤ a`, else `|z|^{1/2}(1 + log²(|y|/a))`.
    pub shape: f64,
    /// `|residual| / shape`.
    pub constant: f64,
    /// `|residual + log 2π| / shape`: the same fit once the constant term of
    /// the explicit formula for `ψ` is put back.
    pub shifted_constant: f64,
}

pub fn s_tilde_explicit(z: ComplexPoint, zeros: &[ZetaZero]) -> Result<SExplicitCheck, FormulaError> {
    let s = s_tilde_auto(z, 1e-16)?;
    let zc = z.z();
    let lz = zc.ln();
    let mut acc = ComplexNeumaier::new();
    for zero in zeros {
        for rho in [zero.rho(), zero.rho().conj()] {
            let g = log_gamma(rho).map_err(|source| FormulaError::Term { term: "s_tilde", source })?;
            acc.add((g - rho * lz).exp());
        }
    }
    let main = zc.inv() - acc.value();
    let residual = s.value - main;
    let (a, y) = (z.a, z.y);
    let mut shape = zc.norm().sqrt();
    if y.abs() > a {
        shape *= 1.0 + (y.abs() / a).ln().powi(2);
    }
    let shifted = residual + (2.0 * std::f64::consts::PI).ln();
    Ok(SExplicitCheck {
        a,
        y,
        s_tilde: s.value,
        main,
        residual,
        shape,
        constant: residual.norm() / shape,
        shifted_constant: shifted.norm() / shape,
    })
}
