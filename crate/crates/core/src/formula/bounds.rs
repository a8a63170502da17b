//! Envelopes for Bessel factors and tail sums over lattices and indices.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

/// Majorant `2√(2/(πu))(1 + ν²/u)` for `|J_ν(u)|`, real `ν ≥ 0`, `u > 0`.
/// Times `λ^{1/4}` (with `u ∝ √λ`) it is nonincreasing, as the lattice tails need.
pub fn real_bessel_majorant(nu: f64, u: f64) -> f64 {
    2.0 * (2.0 / (PI * u)).sqrt() * (1.0 + nu * nu / u)
}

/// `min(1, majorant)`.
pub fn real_bessel_bound(nu: f64, u: f64) -> f64 {
    real_bessel_majorant(nu, u).min(1.0)
}

/// Twice the magnitude model
/// `|Γ(β+iγ) J_{α+iγ}(u)| ≈ γ^{β−1/2} (u²+γ²)^{−1/4} (u/(γ+√(u²+γ²)))^α`.
///
/// The model follows from Stirling for `Γ` and the large-order behaviour of
/// `J`; it decays only like `γ^{β−1−α}` for `γ ≫ u`, not exponentially.
pub fn zero_bessel_envelope(beta: f64, gamma: f64, alpha: f64, u: f64) -> f64 {
    let w = (u * u + gamma * gamma).sqrt();
    2.0 * gamma.powf(beta - 0.5) * w.powf(-0.5) * (u / (gamma + w)).powf(alpha)
}

/// Majorant of [`zero_bessel_envelope`] that is a pure power of `u`.
pub fn zero_bessel_majorant(beta: f64, gamma: f64, u: f64) -> f64 {
    2.0 * gamma.powf(beta - 0.5) * u.powf(-0.5)
}

/// Distinct values `λ = l1² + l2²` with `l1, l2 ≥ 1` and `lo < λ ≤ hi`,
/// ascending, each with its number of representations.
pub fn lattice_shell(lo: u64, hi: u64) -> Vec<(u64, u32)> {
    let mut counts: BTreeMap<u64, u32> = BTreeMap::new();
    let mut l1 = 1u64;
    while l1 * l1 < hi {
        let mut l2 = 1u64;
        while l1 * l1 + l2 * l2 <= hi {
            let lam = l1 * l1 + l2 * l2;
            if lam > lo {
                *counts.entry(lam).or_default() += 1;
            }
            l2 += 1;
        }
        l1 += 1;
    }
    counts.into_iter().collect()
}

/// Lattice points with `λ ≤ L²`.
pub fn lattice_points(l: u32) -> Vec<(u64, u32)> {
    let l = l as u64;
    lattice_shell(0, l * l)
}

/// Width of the shell summed point by point before switching to the integral.
const SHELL: f64 = 4.0;

/// Bound for `Σ_{λ > L²} f(λ)` over `l1, l2 ≥ 1`.
///
/// Points with `L² < λ ≤ (L+4)²` are summed with `exact`; beyond that every
/// point owns a unit square at distance at least `|l| − √2`, so the rest is at
/// most `(π/2)∫_{R0}^∞ ρ f(ρ²) dρ` with `R0 = L + 4 − √2`. `major` must bound
/// `exact` and make `major(λ)·λ^p` nonincreasing, `p > 1`.
pub fn lattice_tail(l: u32, exact: impl Fn(f64) -> f64, major: impl Fn(f64) -> f64, p: f64) -> f64 {
    assert!(p > 1.0, "lattice tail needs decay faster than λ^-1");
    let outer = l as f64 + SHELL;
    let shell: f64 = lattice_shell((l as u64).pow(2), (outer as u64).pow(2))
        .into_iter()
        .map(|(lam, r)| r as f64 * exact(lam as f64))
        .sum();
    let r0 = outer - SQRT_2;
    let rest = PI / 2.0 * major(r0 * r0) * r0 * r0 / (2.0 * p - 2.0);
    shell + rest
}

/// Bound for `Σ_{m > M} f(m)`: eight terms exactly, then
/// `∫_{M+8}^∞ major ≤ major(M+8)(M+8)/(p−1)` for `major(x)·x^p` nonincreasing.
pub fn index_tail(m: u32, exact: impl Fn(f64) -> f64, major: impl Fn(f64) -> f64, p: f64) -> f64 {
    assert!(p > 1.0, "index tail needs decay faster than 1/m");
    let m = m as f64;
    let shell: f64 = (1..=8).map(|j| exact(m + j as f64)).sum();
    let x0 = m + 8.0;
    shell + major(x0) * x0 / (p - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shells() {
        assert_eq!(lattice_points(0), vec![]);
        assert_eq!(lattice_points(1), vec![]);
        assert_eq!(lattice_points(2), vec![(2, 1)]);
        assert_eq!(lattice_points(3), vec![(2, 1), (5, 2), (8, 1)]);
        let total: u32 = lattice_shell(4, 25).iter().map(|x| x.1).sum();
        let brute = (1..6u64)
            .flat_map(|a| (1..6u64).map(move |b| a * a + b * b))
            .filter(|&l| l > 4 && l <= 25)
            .count();
        assert_eq!(total as usize, brute);
    }

    #[test]
    fn lattice_tail_bounds_power_sum() {
        let f = |lam: f64| lam.powf(-2.0);
        let actual: f64 = lattice_shell(9, 400 * 400).iter().map(|&(l, r)| r as f64 * f(l as f64)).sum();
        let bound = lattice_tail(3, f, f, 2.0);
        assert!(bound >= actual, "{bound} < {actual}");
        assert!(bound < 3.0 * actual);
    }

    #[test]
    fn index_tail_bounds_power_sum() {
        let f = |m: f64| m.powf(-3.0);
        let actual: f64 = (6..200_000).map(|m| f(m as f64)).sum();
        let bound = index_tail(5, f, f, 3.0);
        assert!(bound >= actual && bound < 1.2 * actual);
    }
}
