use num_complex::Complex64;
use serde::Serialize;

use super::{ArithmeticError, LambdaTable};
use crate::parallel::{self, Neumaier};
use crate::specfun::log_gamma;

const RQ_CHUNK: usize = 2048;

/// `r_Q(n) = Σ_{m1 + m2² + m3² = n, m_i ≥ 1} Λ(m1)` for `1 ≤ n ≤ limit`.
#[derive(Debug, Clone)]
pub struct LinnikTable {
    limit: usize,
    values: Vec<f64>,
}

impl LinnikTable {
    pub fn limit(&self) -> usize {
        self.limit
    }

    #[inline]
    pub fn get(&self, n: usize) -> f64 {
        self.values.get(n).copied().unwrap_or(0.0)
    }

    /// Raw values, index 0 unused.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Parameters of the Cesàro-weighted sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CesaroParams {
    pub n: u64,
    pub k: f64,
}

impl CesaroParams {
    pub fn new(n: u64, k: f64) -> Result<Self, ArithmeticError> {
        if n < 4 {
            return Err(ArithmeticError::InvalidParams(format!("N = {n} must be at least 4")));
        }
        if !k.is_finite() {
            return Err(ArithmeticError::InvalidParams(format!("k = {k} must be finite")));
        }
        if k < 0.0 {
            return Err(ArithmeticError::InvalidParams(format!(
                "k = {k} is negative; the weight (N-n)^k is undefined at n = N"
            )));
        }
        Ok(Self { n, k })
    }

    /// `k = 0` evaluates the `n = N` weight with the `0^0 = 1` convention.
    pub fn uses_zero_power_convention(&self) -> bool {
        self.k == 0.0
    }
}

/// Lattice pairs `(l1, l2)`, `l1, l2 ≥ 1`, with `l1² + l2² < bound`, in lexicographic order.
fn lattice_offsets(bound: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut l1 = 1usize;
    while l1 * l1 + 1 < bound {
        let mut l2 = 1usize;
        while l1 * l1 + l2 * l2 < bound {
            out.push(l1 * l1 + l2 * l2);
            l2 += 1;
        }
        l1 += 1;
    }
    out
}

/// Convolve `Λ` with the two-square lattice.
///
/// The lattice pairs form the outer loop and `n` the inner loop, so every
/// `r_Q(n)` accumulates its terms in lexicographic `(l1, l2)` order. The `n`
/// range is split into chunks that run independently; the per-`n` order does
/// not depend on the chunking, so the table is bitwise reproducible.
pub fn compute_rq(lambda: &LambdaTable, n: usize) -> Result<LinnikTable, ArithmeticError> {
    if lambda.limit() < n {
        return Err(ArithmeticError::TableTooShort { have: lambda.limit(), need: n });
    }
    let offsets = lattice_offsets(n + 1);
    let prime_powers: Vec<usize> = lambda.prime_powers().take_while(|&q| q <= n).collect();
    let chunks = (n + 1).div_ceil(RQ_CHUNK);

    let blocks = parallel::map_indexed(chunks, |c| {
        let lo = c * RQ_CHUNK;
        let hi = ((c + 1) * RQ_CHUNK).min(n + 1);
        let mut acc = vec![Neumaier::new(); hi - lo];
        for &s in &offsets {
            if s + 2 > hi {
                continue;
            }
            // m1 = target - s must be a prime power in [lo - s, hi - s).
            let first = lo.saturating_sub(s);
            let start = prime_powers.partition_point(|&q| q < first);
            for &q in &prime_powers[start..] {
                let target = q + s;
                if target >= hi {
                    break;
                }
                acc[target - lo].add(lambda.get(q));
            }
        }
        acc.into_iter().map(|a| a.value()).collect::<Vec<f64>>()
    });

    let mut values = Vec::with_capacity(n + 1);
    for b in blocks {
        values.extend(b);
    }
    values[0] = 0.0;
    Ok(LinnikTable { limit: n, values })
}

/// `Σ_{n≤N} r_Q(n) (N−n)^k / Γ(k+1)`.
///
/// Terms are visited in descending `n` (ascending weight) and reduced with
/// the deterministic chunked compensated sum.
pub fn cesaro_lhs(rq: &LinnikTable, params: CesaroParams) -> Result<f64, ArithmeticError> {
    let n_max = params.n as usize;
    if rq.limit() < n_max {
        return Err(ArithmeticError::TableTooShort { have: rq.limit(), need: n_max });
    }
    let k = params.k;
    let values = rq.values();
    let weighted = parallel::chunked_sum(n_max, parallel::DEFAULT_CHUNK, |i| {
        // i = N - n, n runs from N down to 1
        let r = values[n_max - i];
        if r == 0.0 {
            0.0
        } else {
            r * (i as f64).powf(k)
        }
    });
    let ln_gamma = log_gamma(Complex64::new(k + 1.0, 0.0))
        .map_err(|e| ArithmeticError::InvalidParams(e.to_string()))?;
    Ok(weighted * (-ln_gamma.re).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::sieve_von_mangoldt;

    #[test]
    fn small_representations() {
        let lam = sieve_von_mangoldt(64).unwrap();
        let rq = compute_rq(&lam, 64).unwrap();
        for n in 1..=3 {
            assert_eq!(rq.get(n), 0.0);
        }
        assert_eq!(rq.get(4), 2f64.ln());
        assert_eq!(rq.get(6), 2f64.ln());
        assert!(rq.values().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn cesaro_small_cases() {
        let lam = sieve_von_mangoldt(10).unwrap();
        let rq = compute_rq(&lam, 10).unwrap();
        let v4 = cesaro_lhs(&rq, CesaroParams::new(4, 2.0).unwrap()).unwrap();
        assert_eq!(v4, 0.0);
        let v5 = cesaro_lhs(&rq, CesaroParams::new(5, 2.0).unwrap()).unwrap();
        assert!((v5 - 2f64.ln() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_exponent_counts_n_equal_n() {
        let lam = sieve_von_mangoldt(10).unwrap();
        let rq = compute_rq(&lam, 10).unwrap();
        let p = CesaroParams::new(4, 0.0).unwrap();
        assert!(p.uses_zero_power_convention());
        assert!((cesaro_lhs(&rq, p).unwrap() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn parameter_validation() {
        assert!(CesaroParams::new(3, 2.0).is_err());
        assert!(CesaroParams::new(10, -0.5).is_err());
        assert!(CesaroParams::new(10, f64::NAN).is_err());
        let lam = sieve_von_mangoldt(10).unwrap();
        assert!(matches!(compute_rq(&lam, 11), Err(ArithmeticError::TableTooShort { .. })));
        let rq = compute_rq(&lam, 10).unwrap();
        assert!(cesaro_lhs(&rq, CesaroParams::new(11, 2.0).unwrap()).is_err());
    }

    #[test]
    fn monotone_in_n() {
        let lam = sieve_von_mangoldt(300).unwrap();
        let rq = compute_rq(&lam, 300).unwrap();
        let mut prev = 0.0;
        for n in 4..=300 {
            let v = cesaro_lhs(&rq, CesaroParams::new(n, 1.5).unwrap()).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }
}
