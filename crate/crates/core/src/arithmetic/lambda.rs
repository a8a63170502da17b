use super::ArithmeticError;
use crate::parallel::Neumaier;

/// Largest table the sieve will build.
pub const MAX_SIEVE_LIMIT: u64 = 10_000_000;

/// Von Mangoldt values `Λ(n)` for `1 ≤ n ≤ limit`.
///
/// Prime powers keep their base prime and exponent so that sums can be
/// regrouped per prime and audited with integer counts.
#[derive(Debug, Clone)]
pub struct LambdaTable {
    limit: usize,
    values: Vec<f64>,
    base: Vec<u32>,
    exponent: Vec<u8>,
}

impl LambdaTable {
    pub fn limit(&self) -> usize {
        self.limit
    }

    /// `Λ(n)`; zero for `n = 0` and for `n` beyond the table.
    #[inline]
    pub fn get(&self, n: usize) -> f64 {
        self.values.get(n).copied().unwrap_or(0.0)
    }

    /// Raw values, index 0 unused.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(p, j)` when `n = p^j`, otherwise `None`.
    pub fn prime_power(&self, n: usize) -> Option<(u32, u8)> {
        match self.base.get(n) {
            Some(&p) if p != 0 => Some((p, self.exponent[n])),
            _ => None,
        }
    }

    /// Prime powers `≤ limit` in increasing order.
    pub fn prime_powers(&self) -> impl Iterator<Item = usize> + '_ {
        (2..=self.limit).filter(move |&n| self.base[n] != 0)
    }

    /// Chebyshev's `ψ(x) = Σ_{n≤x} Λ(n)`, compensated.
    pub fn psi(&self, x: usize) -> f64 {
        let mut acc = Neumaier::new();
        for n in 2..=x.min(self.limit) {
            acc.add(self.values[n]);
        }
        acc.value()
    }
}

/// Build `Λ(n)` for `n ≤ limit` with a smallest-prime-factor sieve.
///
/// Prime powers are detected in integer arithmetic: `n = p·m` is a power of
/// `p` exactly when `m = 1` or `m` is itself a power of `p`.
pub fn sieve_von_mangoldt(limit: u64) -> Result<LambdaTable, ArithmeticError> {
    if limit == 0 {
        return Err(ArithmeticError::EmptyTable);
    }
    if limit > MAX_SIEVE_LIMIT {
        return Err(ArithmeticError::TooLarge { requested: limit, max: MAX_SIEVE_LIMIT });
    }
    let n_max = limit as usize;
    let mut spf = vec![0u32; n_max + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n_max {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            let ip = i * p as usize;
            if p > si || ip > n_max {
                break;
            }
            spf[ip] = p;
        }
    }

    let mut values = vec![0.0; n_max + 1];
    let mut base = vec![0u32; n_max + 1];
    let mut exponent = vec![0u8; n_max + 1];
    for n in 2..=n_max {
        let p = spf[n];
        let m = n / p as usize;
        if m == 1 {
            base[n] = p;
            exponent[n] = 1;
            values[n] = (p as f64).ln();
        } else if base[m] == p {
            base[n] = p;
            exponent[n] = exponent[m] + 1;
            values[n] = values[p as usize];
        }
    }
    Ok(LambdaTable { limit: n_max, values, base, exponent })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_lambda(n: usize) -> f64 {
        if n < 2 {
            return 0.0;
        }
        let mut m = n;
        let mut p = 2;
        while p * p <= m {
            if m.is_multiple_of(p) {
                while m.is_multiple_of(p) {
                    m /= p;
                }
                return if m == 1 { (p as f64).ln() } else { 0.0 };
            }
            p += 1;
        }
        (n as f64).ln()
    }

    #[test]
    fn small_values() {
        let t = sieve_von_mangoldt(100).unwrap();
        assert_eq!(t.get(1), 0.0);
        assert_eq!(t.get(8), 2f64.ln());
        assert_eq!(t.get(12), 0.0);
        assert_eq!(t.prime_power(27), Some((3, 3)));
        assert_eq!(t.prime_power(12), None);
    }

    #[test]
    fn matches_trial_division() {
        let t = sieve_von_mangoldt(5000).unwrap();
        for n in 1..=5000 {
            assert_eq!(t.get(n), trial_division_lambda(n), "n = {n}");
        }
    }

    #[test]
    fn psi_100_by_prime_power_enumeration() {
        let t = sieve_von_mangoldt(100).unwrap();
        let mut expected = Neumaier::new();
        for p in (2..=100usize).filter(|&p| (2..p).all(|d| p % d != 0)) {
            let mut q = p;
            while q <= 100 {
                expected.add((p as f64).ln());
                q *= p;
            }
        }
        assert!((t.psi(100) - expected.value()).abs() < 1e-12);
    }

    #[test]
    fn chebyshev_range() {
        let t = sieve_von_mangoldt(20_000).unwrap();
        for x in [1000, 5000, 20_000] {
            let psi = t.psi(x);
            assert!(((psi - x as f64) / x as f64).abs() < 0.11, "psi({x}) = {psi}");
        }
    }

    #[test]
    fn prime_power_values_equal_base() {
        let t = sieve_von_mangoldt(10_000).unwrap();
        for n in t.prime_powers() {
            let (p, _) = t.prime_power(n).unwrap();
            assert_eq!(t.get(n).to_bits(), t.get(p as usize).to_bits());
        }
    }

    #[test]
    fn size_errors() {
        assert_eq!(sieve_von_mangoldt(0).unwrap_err(), ArithmeticError::EmptyTable);
        assert!(matches!(
            sieve_von_mangoldt(MAX_SIEVE_LIMIT + 1),
            Err(ArithmeticError::TooLarge { .. })
        ));
    }
}
