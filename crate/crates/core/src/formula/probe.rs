//! Partial sums of the zero/lattice series whose convergence threshold is
//! `k > d − 1/2`:
//! `Σ_{l ∈ (0,∞)^d} Σ_{γ>0} γ^{−k−3/2} ∫_0^γ e^{−N|l|²v²/γ²} e^{−v} v^{k+β} dv`.
//!
//! The lattice sum factors as `ω(Nv²/γ²)^d` with `ω(w) = Σ_{l≥1} e^{−l²w}`.

use std::f64::consts::PI;

use serde::Serialize;

use super::FormulaError;
use crate::parallel::{map_indexed, Neumaier};
use crate::specfun::quad::integrate;
use crate::zeros::ZetaZero;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbeOptions {
    /// Upper cutoff of the `v` integral; the integral stops at `min(γ, vmax)`.
    pub vmax: Option<f64>,
    /// Keep only lattice coordinates `l_i ≤ cap`.
    pub lattice_cap: Option<u64>,
    /// Relative accuracy of each integral.
    pub tol: f64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self { vmax: None, lattice_cap: None, tol: 1e-10 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeSeries {
    pub d: u32,
    pub k: f64,
    pub n: f64,
    /// Contribution of each zero.
    pub terms: Vec<f64>,
    /// `partial_sums[j]` includes the first `j + 1` zeros.
    pub partial_sums: Vec<f64>,
}

impl ProbeSeries {
    /// Partial sum over the first `count` zeros (0 for `count = 0`).
    pub fn partial_after(&self, count: usize) -> Option<f64> {
        match count {
            0 => Some(0.0),
            c => self.partial_sums.get(c - 1).copied(),
        }
    }

    /// `partial_after(hi) / partial_after(lo)`.
    pub fn growth_ratio(&self, hi: usize, lo: usize) -> Option<f64> {
        let a = self.partial_after(hi)?;
        let b = self.partial_after(lo)?;
        (b > 0.0).then(|| a / b)
    }
}

/// `Σ_{l≥1} e^{−l²w}` for `w > 0`, through the theta transformation when
/// `w < 1`.
pub fn omega2_real(w: f64) -> f64 {
    if w < 1.0 {
        let q = PI * PI / w;
        let mut s = 0.0;
        let mut l = 1.0f64;
        loop {
            let t = (-q * l * l).exp();
            s += t;
            if t < 1e-18 {
                break;
            }
            l += 1.0;
        }
        0.5 * ((PI / w).sqrt() * (1.0 + 2.0 * s) - 1.0)
    } else {
        capped_omega(w, u64::MAX)
    }
}

fn capped_omega(w: f64, cap: u64) -> f64 {
    let mut s = 0.0;
    let mut l = 1u64;
    while l <= cap {
        let t = (-(l as f64).powi(2) * w).exp();
        s += t;
        if t <= 1e-18 * s {
            break;
        }
        l += 1;
    }
    s
}

pub fn convergence_probe(
    d: u32,
    k: f64,
    n: f64,
    zeros: &[ZetaZero],
    opts: &ProbeOptions,
) -> Result<ProbeSeries, FormulaError> {
    if !(1..=3).contains(&d) {
        return Err(FormulaError::Invalid(format!("d must be 1, 2 or 3, got {d}")));
    }
    if !(n > 0.0) || !k.is_finite() {
        return Err(FormulaError::Invalid(format!("need N > 0 and finite k (N = {n}, k = {k})")));
    }
    if let Some(v) = opts.vmax {
        if !(v > 0.0) {
            return Err(FormulaError::Invalid(format!("vmax must be positive, got {v}")));
        }
    }
    let results = map_indexed(zeros.len(), |i| probe_term(d, k, n, &zeros[i], opts));
    let mut terms = Vec::with_capacity(zeros.len());
    let mut partial_sums = Vec::with_capacity(zeros.len());
    let mut acc = Neumaier::new();
    for r in results {
        let t = r?;
        acc.add(t);
        terms.push(t);
        partial_sums.push(acc.value());
    }
    Ok(ProbeSeries { d, k, n, terms, partial_sums })
}

fn probe_term(d: u32, k: f64, n: f64, zero: &ZetaZero, opts: &ProbeOptions) -> Result<f64, FormulaError> {
    let (beta, gamma) = (zero.beta, zero.gamma);
    // near v = 0 the integrand behaves like v^{k+β−d} (uncapped lattice)
    let e = k + beta - d as f64;
    let p = match opts.lattice_cap {
        None if e < 0.0 => {
            if e <= -1.0 {
                return Err(FormulaError::Invalid(format!(
                    "integral diverges at v = 0 for k + β − d = {e}"
                )));
            }
            1.0 / (e + 1.0)
        }
        _ => 1.0,
    };
    let vmax = opts.vmax.map_or(gamma, |v| v.min(gamma));
    let t_max = vmax.powf(1.0 / p);
    let omega = |w: f64| match opts.lattice_cap {
        Some(c) => capped_omega(w, c),
        None => omega2_real(w),
    };
    let c = n / (gamma * gamma);
    let f = |t: f64| {
        let v = t.powf(p);
        let lattice = omega(c * v * v).powi(d as i32);
        let jac = p * t.powf(p - 1.0);
        num_complex::Complex64::new(lattice * (-v).exp() * v.powf(k + beta) * jac, 0.0)
    };
    let r = integrate(f, 0.0, t_max, 8, 0.0, 0.1 * opts.tol, 20_000);
    if !(r.error <= opts.tol * r.value.re.abs()) {
        return Err(FormulaError::Quadrature(format!(
            "γ = {gamma}: error {:.3e} on value {:.3e}",
            r.error, r.value.re
        )));
    }
    Ok(gamma.powf(-k - 1.5) * r.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::bundled_zeros;

    #[test]
    fn omega_branches_agree() {
        for w in [0.3, 0.99, 1.0, 1.01, 4.0] {
            let direct = capped_omega(w, u64::MAX);
            assert!((omega2_real(w) - direct).abs() < 1e-14 * direct.max(1.0), "w={w}");
        }
        let w = 1e-4;
        assert!((omega2_real(w) - 0.5 * ((PI / w).sqrt() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn empty_zero_set() {
        let s = convergence_probe(2, 1.75, 10.0, &[], &ProbeOptions::default()).unwrap();
        assert!(s.partial_sums.is_empty());
        assert_eq!(s.partial_after(0), Some(0.0));
    }

    #[test]
    fn partial_sums_nondecreasing() {
        let zs = bundled_zeros();
        let s = convergence_probe(2, 1.75, 10.0, zs.first(12), &ProbeOptions::default()).unwrap();
        assert!(s.terms.iter().all(|&t| t > 0.0));
        assert!(s.partial_sums.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn one_dimensional_closed_form() {
        // with a huge lattice cap and tiny N the lattice factor is ≈ γ√π/(2√N v)
        let z = ZetaZero::critical(20.0);
        let n = 1e-8;
        let s = convergence_probe(1, 2.0, n, &[z], &ProbeOptions::default()).unwrap();
        // γ^{-k-3/2} (γ√π/(2√N)) ∫_0^γ e^{-v} v^{k+β-1} dv − (1/2)γ^{-k-3/2}∫ e^{-v} v^{k+β} dv
        let g = 20.0f64;
        let inc = |a: f64| {
            let r = integrate(|v| num_complex::Complex64::new((-v).exp() * v.powf(a - 1.0), 0.0), 0.0, g, 8, 0.0, 1e-13, 2000);
            r.value.re
        };
        let expect = g.powf(-3.5) * (g * PI.sqrt() / (2.0 * n.sqrt()) * inc(2.5) - 0.5 * inc(3.5));
        assert!((s.terms[0] / expect - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_inputs() {
        let o = ProbeOptions::default();
        assert!(convergence_probe(4, 2.0, 1.0, &[], &o).is_err());
        let z = [ZetaZero::critical(14.134725)];
        assert!(convergence_probe(2, 0.4, 1.0, &z, &o).is_err());
    }
}
