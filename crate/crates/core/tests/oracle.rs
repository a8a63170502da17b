//! Values frozen from independent 40-digit computations (mpmath, brute
//! force over all decompositions).

use approx::assert_relative_eq;
use linnik_core::arithmetic::{cesaro_lhs, compute_rq, sieve_von_mangoldt, CesaroParams};
use linnik_core::specfun::{gamma_ratio, laplace_line_integral, log_gamma};
use linnik_core::zeros::{bundled_zeros, paired_zero_sum};
use linnik_core::Complex64;

const RHO1: f64 = 14.134725141734693;

#[test]
fn chebyshev_psi_at_100() {
    let lam = sieve_von_mangoldt(100).unwrap();
    assert_relative_eq!(lam.psi(100), 94.04531122935739224600493, max_relative = 1e-14);
}

#[test]
fn linnik_counts_and_cesaro_mean() {
    let lam = sieve_von_mangoldt(100).unwrap();
    let rq = compute_rq(&lam, 100).unwrap();
    assert_relative_eq!(rq.get(50), 23.06615230896397917028839, max_relative = 1e-14);
    assert_relative_eq!(rq.get(100), 44.48809230285639854644042, max_relative = 1e-14);
    let p = CesaroParams::new(100, 2.0).unwrap();
    let lhs = cesaro_lhs(&rq, p).unwrap();
    assert_relative_eq!(lhs, 2364947.059875955828624421, max_relative = 1e-13);
}

#[test]
fn log_gamma_values() {
    let cases = [
        ((2.0, 1.0), (-0.30434960902188368418, 0.48375784292991511173)),
        ((0.5, 14.134725), (-21.283835577051321651, 23.305944472665729898)),
        ((3.5, -7.25), (-4.4468245397606313433, -11.225469236731692016)),
        ((0.25, 0.5), (0.3402504204084197874, -1.1951830098875903012)),
    ];
    for ((sr, si), (re, im)) in cases {
        let v = log_gamma(Complex64::new(sr, si)).unwrap();
        assert!((v.re - re).abs() < 1e-12, "{sr}+{si}i: {}", v.re);
        assert!((v.im - im).abs() < 1e-12, "{sr}+{si}i: {}", v.im);
    }
}

#[test]
fn gamma_modulus_near_first_zero() {
    let g = log_gamma(Complex64::new(0.5, 14.134725)).unwrap().re.exp();
    assert_relative_eq!(g, 5.708837158275604837e-10, max_relative = 1e-11);
    // leading Stirling term √(2π) e^{-π|t|/2}
    let stirling = (2.0 * std::f64::consts::PI).sqrt() * (-std::f64::consts::PI * 14.134725 / 2.0).exp();
    assert!((g / stirling - 1.0).abs() < 0.05);
}

#[test]
fn gamma_ratios_at_first_zero() {
    let rho = Complex64::new(0.5, RHO1);
    let cases = [
        (2.5, (-0.0011102961145002232291, 0.00070441866836238824065)),
        (3.0, (-0.00010773874285394954855, 0.00032936009629775707693)),
        (4.0, (0.000020176946126705702961, 0.000012618431027766727891)),
    ];
    for (off, (re, im)) in cases {
        let r = gamma_ratio(rho, off).unwrap();
        let want = Complex64::new(re, im);
        assert!((r - want).norm() < 1e-12 * want.norm(), "offset {off}: {r}");
    }
}

#[test]
fn gamma_ratios_bounded_over_zeros() {
    let zs = bundled_zeros();
    for z in zs.first(20) {
        for off in [2.5, 3.0, 4.0] {
            assert!(gamma_ratio(z.rho(), off).unwrap().norm() <= 1.0);
        }
    }
}

#[test]
fn paired_sum_is_real_part_of_full_sum() {
    let zs = bundled_zeros();
    let f = |rho: Complex64| Ok::<_, ()>(gamma_ratio(rho, 3.0).unwrap() * Complex64::new(100.0, 0.0).powc(rho));
    let paired = paired_zero_sum(zs.first(30), |z| f(z.rho())).unwrap();
    let mut naive = Complex64::new(0.0, 0.0);
    for z in zs.first(30) {
        naive += f(z.rho()).unwrap() + f(z.rho().conj()).unwrap();
    }
    assert!(naive.im.abs() < 1e-15 * naive.norm().max(1.0));
    assert!((paired - naive.re).abs() < 1e-13 * naive.norm().max(1.0));
}

#[test]
fn line_integral_matches_frozen_value() {
    let s = Complex64::new(2.0, 1.0);
    let v = laplace_line_integral(s, 10.0, 0.1, 1e-10).unwrap();
    let want = Complex64::new(-3.3282895409223325933, 13.142541011940419073);
    assert!((v.closed_form - want).norm() < 1e-13 * want.norm());
    assert!((v.value - want).norm() < 1e-8 * want.norm(), "{}", v.value);
    assert!(v.error_estimate < 1e-6);
}

#[test]
fn probe_ratios_match_independent_quadrature() {
    // 400-point Gauss–Legendre in numpy, theta transform for small arguments
    use linnik_core::formula::{convergence_probe, ProbeOptions};
    let zs = bundled_zeros();
    for (n, k, want) in [
        (1.0, 1.75, 1.3054701669727553),
        (1.0, 1.0, 1.6518937203813688),
        (100.0, 1.75, 1.39540119770997),
        (0.01, 1.0, 1.6463839485006035),
    ] {
        let p = convergence_probe(2, k, n, zs.first(50), &ProbeOptions::default()).unwrap();
        let r = p.growth_ratio(50, 25).unwrap();
        assert_relative_eq!(r, want, max_relative = 1e-8);
    }
}
