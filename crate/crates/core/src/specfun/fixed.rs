//! Extended-precision evaluation of `0F1(; ν+1; −u²/4)`.
//!
//! `ν` and `u` are doubles, so both are exact dyadic rationals. Writing
//! `ν = (A + iG)/2^S` and `u²/4 = Q·2^e` makes every term ratio of the series
//! a ratio of integers; terms are carried as fixed-point big integers with
//! `P` fractional bits and each step costs a handful of big×small products
//! and one truncating division. Conjugate orders produce conjugate terms
//! bit for bit.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Float, ToPrimitive, Zero};

use super::bessel::Method;
use super::SpecFunError;

/// Exact decomposition `x = m·2^e` with `m` odd (or zero).
fn dyadic(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let (mut mant, mut exp, sign) = x.integer_decode();
    while mant & 1 == 0 {
        mant >>= 1;
        exp += 1;
    }
    let m = BigInt::from(mant) * BigInt::from(sign);
    (m, exp as i64)
}

/// `x·2^exp` rounded to a double; safe for bit lengths far outside the double range.
pub(super) fn big_to_f64(x: &BigInt, exp: i64) -> f64 {
    let bits = x.bits() as i64;
    if bits == 0 {
        return 0.0;
    }
    let drop = (bits - 64).max(0);
    let top = if drop > 0 { x >> (drop as usize) } else { x.clone() };
    let m = top.to_i128().expect("at most 65 bits") as f64;
    ldexp(m, drop + exp)
}

pub(super) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// `log2` of the largest term and a generous count of terms above `2^-floor_bits`.
fn term_profile(nu: Complex64, q: f64, floor_bits: f64) -> (f64, usize) {
    let lq = q.log2();
    let mut lt = 0.0f64;
    let mut lmax = 0.0f64;
    let mut m = 0usize;
    loop {
        m += 1;
        let mf = m as f64;
        let ratio_l = lq - mf.log2() - (nu + mf).norm().log2();
        lt += ratio_l;
        lmax = lmax.max(lt);
        if ratio_l < -1.0 && lt < -floor_bits {
            return (lmax, m);
        }
        if m > 50_000_000 {
            return (lmax, m);
        }
    }
}

#[derive(Debug)]
pub(super) struct FixedResult {
    pub value: Complex64,
    pub rel_error: f64,
    pub bits: u32,
}

/// Sums the series at `P` fractional bits. Returns the value, the absolute
/// error bound, and the bit length of the largest term.
fn sum_at(nu: Complex64, u: f64, p: u64) -> (BigInt, BigInt, f64, usize) {
    let (a0, ea) = dyadic(nu.re);
    let (g0, eg) = dyadic(nu.im);
    let mut s = 0i64;
    if !a0.is_zero() {
        s = s.max(-ea);
    }
    if !g0.is_zero() {
        s = s.max(-eg);
    }
    let a = if a0.is_zero() { a0 } else { a0 << ((ea + s) as usize) };
    let g = if g0.is_zero() { g0 } else { g0 << ((eg + s) as usize) };
    let (um, ue) = dyadic(u);
    let q = &um * &um;
    let shift = s + 2 * ue - 2;
    let unit = BigInt::from(1u8) << (s as usize);
    let real = g.is_zero();

    let mut re = BigInt::from(1u8) << (p as usize);
    let mut im = BigInt::zero();
    let mut sr = re.clone();
    let mut si = BigInt::zero();
    let mut max_bits = re.bits();
    let mut ap = a.clone();
    let g2 = &g * &g;
    let mut m: u64 = 0;
    loop {
        m += 1;
        ap += &unit;
        let cr = &ap * &q;
        let mut d = (&ap * &ap + &g2) * BigInt::from(m);
        if shift < 0 {
            d <<= (-shift) as usize;
        }
        let (mut nr, mut ni);
        if real {
            nr = &re * &cr;
            ni = BigInt::zero();
        } else {
            let ci = &g * &q;
            nr = &re * &cr + &im * &ci;
            ni = &im * &cr - &re * &ci;
        }
        if shift > 0 {
            nr <<= shift as usize;
            ni <<= shift as usize;
        }
        re = -(nr / &d);
        im = if real { BigInt::zero() } else { -(ni / &d) };
        sr += &re;
        si += &im;
        let b = re.bits().max(im.bits());
        max_bits = max_bits.max(b);
        if b == 0 {
            // zero term: only stop once the ratio is below 1/2 for good
            let mf = m as f64;
            let ratio = u * u / 4.0 / (mf * (nu + mf).norm());
            if ratio < 0.5 {
                break;
            }
        }
    }
    (sr, si, max_bits as f64, m as usize)
}

/// Evaluates the kernel with error below `tol` relative to the result, using
/// at most `max_bits` total bits of integer width.
pub(super) fn kernel_fixed(
    nu: Complex64,
    u: f64,
    tol: f64,
    max_bits: u32,
) -> Result<FixedResult, SpecFunError> {
    if !(nu.re > -1.0) {
        return Err(SpecFunError::Domain(format!(
            "extended series needs Re ν > -1, got {}",
            nu.re
        )));
    }
    if u == 0.0 {
        return Ok(FixedResult { value: Complex64::new(1.0, 0.0), rel_error: 0.0, bits: 0 });
    }
    let q = u * u / 4.0;
    let need = (1.0 / tol).log2();
    let (lmax, m_est) = term_profile(nu, q, need + 60.0);
    let head = lmax.max(0.0);
    let mut guard = 16.0;
    let mut last_rel = f64::INFINITY;
    for _ in 0..4 {
        let p = (head + 2.0 * ((m_est + 1) as f64).log2() + need + guard + 8.0).ceil();
        let width = (p + head).ceil() as u32;
        if width > max_bits {
            return Err(SpecFunError::Precision {
                strategy: Method::ExtendedSeries,
                achieved: last_rel,
                requested: tol,
                bits: width,
            });
        }
        let p = p as u64;
        let (sr, si, tbits, terms) = sum_at(nu, u, p);
        let value = Complex64::new(big_to_f64(&sr, -(p as i64)), big_to_f64(&si, -(p as i64)));
        // per-term truncation amplified by at most the largest term; kept in
        // log2 form since the largest term may exceed the double range
        let head_bits = (tbits - p as f64).max(0.0);
        let n = (terms + 1) as f64;
        let mag = value.norm();
        let rel = if mag > 0.0 {
            let lrel = 2.0 + 2.0 * n.log2() + head_bits - p as f64 - mag.log2();
            lrel.exp2() + 2.0 * f64::EPSILON
        } else {
            f64::INFINITY
        };
        if rel <= tol {
            return Ok(FixedResult { value, rel_error: rel, bits: width });
        }
        last_rel = rel;
        guard += if mag > 0.0 { (rel / tol).log2() + 8.0 } else { 64.0 };
    }
    Err(SpecFunError::Precision {
        strategy: Method::ExtendedSeries,
        achieved: last_rel,
        requested: tol,
        bits: max_bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_roundtrip() {
        for x in [0.5, 3.5, -14.134725141734693, 1e-300, 6.02e23] {
            let (m, e) = dyadic(x);
            assert_eq!(big_to_f64(&m, e), x);
        }
    }

    #[test]
    fn big_to_f64_wide() {
        let x = BigInt::from(3u8) << 5000usize;
        assert_eq!(big_to_f64(&x, -5000), 3.0);
        assert_eq!(big_to_f64(&-x, -4999), -6.0);
    }

    #[test]
    fn order_half_closed_form() {
        // 0F1(;3/2;-u²/4) = sin(u)/u
        for u in [0.3, 5.0, 40.0, 200.0] {
            let r = kernel_fixed(Complex64::new(0.5, 0.0), u, 1e-13, 1 << 16).unwrap();
            let exact = u.sin() / u;
            assert!((r.value.re - exact).abs() <= 1e-12 * exact.abs(), "u={u}");
            assert_eq!(r.value.im, 0.0);
        }
    }

    #[test]
    fn conjugate_exact() {
        let nu = Complex64::new(3.5, 21.022039638771555);
        let a = kernel_fixed(nu, 150.0, 1e-12, 1 << 16).unwrap().value;
        let b = kernel_fixed(nu.conj(), 150.0, 1e-12, 1 << 16).unwrap().value;
        assert_eq!(a, b.conj());
    }

    #[test]
    fn bit_cap_reported() {
        let err = kernel_fixed(Complex64::new(2.0, 0.0), 2000.0, 1e-12, 200).unwrap_err();
        assert!(matches!(err, SpecFunError::Precision { .. }));
    }
}
