//! Nontrivial zeta zeros: parsing, validation, remote sources with a
//! checksummed cache, and sums over conjugate pairs.

mod fetch;

pub use fetch::{fetch_zeros, CacheStatus, Registry, SourceEntry, ZeroCache, CACHE_ENV};

use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::parallel::{compensated_sum, map_indexed};

/// Window that the first ordinate of any accepted table must fall into.
pub const FIRST_ZERO_WINDOW: (f64, f64) = (14.0, 14.3);

const BUNDLED: &str = include_str!("../../data/zeros100.txt");
pub const BUNDLED_SOURCE: &str = "bundled";

#[derive(Debug, Error)]
pub enum ZeroError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: ordinate {gamma} does not exceed the previous one")]
    NotAscending { line: usize, gamma: f64 },
    #[error("first ordinate {found} lies outside ({}, {})", FIRST_ZERO_WINDOW.0, FIRST_ZERO_WINDOW.1)]
    FirstZero { found: f64 },
    #[error("line {line}: real part {beta} is off the critical line (pass allow_off_line to accept)")]
    OffCriticalLine { line: usize, beta: f64 },
    #[error("requested {requested} zeros but only {available} are loaded")]
    Range { requested: usize, available: usize },
    #[error("checksum mismatch for {source_id}: expected {expected}, found {found}")]
    ChecksumMismatch { source_id: String, expected: String, found: String },
    #[error("unknown zero source '{0}'")]
    UnknownSource(String),
    #[error("download failed: {0}")]
    Fetch(String),
    #[error("remote fetching is not compiled in; enable the `fetch` feature or use a file:// source")]
    FetchDisabled,
    #[error("registry: {0}")]
    Registry(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZetaZero {
    pub beta: f64,
    pub gamma: f64,
}

impl ZetaZero {
    pub fn critical(gamma: f64) -> Self {
        Self { beta: 0.5, gamma }
    }

    pub fn rho(&self) -> Complex64 {
        Complex64::new(self.beta, self.gamma)
    }

    pub fn on_critical_line(&self) -> bool {
        self.beta == 0.5
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Accept zeros with `β ≠ 1/2`; used for diagnostics only.
    pub allow_off_line: bool,
}

/// Validated zeros with positive ordinates in ascending order; may be empty.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSet {
    zeros: Vec<ZetaZero>,
    source_id: String,
    sha256: String,
}

impl ZeroSet {
    pub fn zeros(&self) -> &[ZetaZero] {
        &self.zeros
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    /// SHA-256 of the text the set was parsed from.
    pub fn sha256(&self) -> &str {
        &self.sha256
    }

    /// The first `z` zeros (all of them if fewer are available).
    pub fn first(&self, z: usize) -> &[ZetaZero] {
        &self.zeros[..z.min(self.zeros.len())]
    }

    /// The first `z` zeros, or a range error if fewer are loaded.
    pub fn take(&self, z: usize) -> Result<&[ZetaZero], ZeroError> {
        if z > self.zeros.len() {
            return Err(ZeroError::Range { requested: z, available: self.zeros.len() });
        }
        Ok(&self.zeros[..z])
    }

    /// Largest real part present, `1/2` for an empty or critical-line set.
    pub fn max_beta(&self) -> f64 {
        self.zeros.iter().map(|z| z.beta).fold(0.5, f64::max)
    }

    pub fn max_gamma(&self) -> f64 {
        self.zeros.last().map_or(0.0, |z| z.gamma)
    }

    pub fn all_critical(&self) -> bool {
        self.zeros.iter().all(ZetaZero::on_critical_line)
    }

    /// Replaces real parts; test and diagnostic use.
    pub fn with_betas(mut self, beta: impl Fn(usize, f64) -> f64) -> Self {
        for (i, z) in self.zeros.iter_mut().enumerate() {
            z.beta = beta(i, z.gamma);
        }
        self
    }
}

impl fmt::Display for ZeroSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} zeros, γ ∈ [{}, {}], sha256 {}",
            self.source_id,
            self.len(),
            self.zeros.first().map_or(0.0, |z| z.gamma),
            self.max_gamma(),
            self.sha256
        )
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Parses a zero table: one ordinate per line, optionally followed by the
/// real part. Blank lines and `#` comments are ignored.
pub fn parse_zeros(text: &str, source_id: &str, opts: LoadOptions) -> Result<ZeroSet, ZeroError> {
    let mut zeros: Vec<ZetaZero> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut fields = body.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty());
        let num = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| ZeroError::Parse { line, msg: format!("not a number: '{s}'") })
        };
        let gamma = num(fields.next().expect("non-empty line"))?;
        let beta = match fields.next() {
            Some(s) => num(s)?,
            None => 0.5,
        };
        if fields.next().is_some() {
            return Err(ZeroError::Parse { line, msg: "expected at most two columns".into() });
        }
        if !(gamma > 0.0) {
            return Err(ZeroError::Parse { line, msg: format!("ordinate must be positive, got {gamma}") });
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(ZeroError::Parse { line, msg: format!("real part {beta} outside (0, 1)") });
        }
        if beta != 0.5 && !opts.allow_off_line {
            return Err(ZeroError::OffCriticalLine { line, beta });
        }
        match zeros.last() {
            None if !(gamma > FIRST_ZERO_WINDOW.0 && gamma < FIRST_ZERO_WINDOW.1) => {
                return Err(ZeroError::FirstZero { found: gamma });
            }
            Some(prev) if gamma <= prev.gamma => return Err(ZeroError::NotAscending { line, gamma }),
            _ => {}
        }
        zeros.push(ZetaZero { beta, gamma });
    }
    Ok(ZeroSet { zeros, source_id: source_id.to_string(), sha256: sha256_hex(text.as_bytes()) })
}

pub fn load_zeros(path: &Path, opts: LoadOptions) -> Result<ZeroSet, ZeroError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ZeroError::Io { path: path.to_path_buf(), source })?;
    parse_zeros(&text, &path.display().to_string(), opts)
}

/// The first 100 zeros shipped with the crate.
pub fn bundled_zeros() -> ZeroSet {
    parse_zeros(BUNDLED, BUNDLED_SOURCE, LoadOptions::default()).expect("bundled table is valid")
}

/// `Σ_ρ f(ρ)` over the given zeros and their conjugates, assuming
/// `f(ρ̄) = conj f(ρ)`: each listed zero contributes `2 Re f(ρ)`.
///
/// Terms are evaluated in parallel and summed in table order, so the result
/// does not depend on the thread count.
pub fn paired_zero_sum<E, F>(zeros: &[ZetaZero], f: F) -> Result<f64, E>
where
    F: Fn(&ZetaZero) -> Result<Complex64, E> + Sync,
    E: Send,
{
    let terms = map_indexed(zeros.len(), |i| f(&zeros[i]));
    let mut re = Vec::with_capacity(terms.len());
    for t in terms {
        re.push(2.0 * t?.re);
    }
    Ok(compensated_sum(re))
}

/// Average zero density `log(T/2π)/2π` at height `T`.
pub fn zero_density(t: f64) -> f64 {
    if t <= 2.0 * std::f64::consts::PI {
        0.0
    } else {
        (t / (2.0 * std::f64::consts::PI)).ln() / (2.0 * std::f64::consts::PI)
    }
}

/// Estimate of `Σ_{γ > T} g(γ)` for a positive envelope `g` that eventually
/// decays faster than `1/γ`: `2∫_T^∞ g(t) log(t/2π)/2π dt`, the factor 2
/// absorbing the fluctuation of the zero-counting function about its mean.
///
/// Integrated on a logarithmic grid; the part beyond the grid is closed off
/// with the local power law. Returns `+∞` if the envelope does not decay
/// fast enough.
pub fn zero_tail_estimate(t0: f64, g: impl Fn(f64) -> f64) -> f64 {
    const DECADES: f64 = 12.0;
    const STEPS: usize = 1200;
    let t0 = t0.max(2.0 * std::f64::consts::PI * std::f64::consts::E);
    let x_end = DECADES * std::f64::consts::LN_10;
    let h = x_end / STEPS as f64;
    let integrand = |x: f64| {
        let t = t0 * x.exp();
        g(t) * zero_density(t) * t
    };
    let mut acc = integrand(0.0) + integrand(x_end);
    for j in 1..STEPS {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * integrand(h * j as f64);
    }
    let body = acc * h / 3.0;
    // beyond the grid: g(t) log(t)·t ≈ C t^{-p+1}
    let a = integrand(x_end - h);
    let b = integrand(x_end);
    let rest = if b == 0.0 {
        0.0
    } else {
        let slope = (b / a).ln() / h;
        if !(slope < -1e-3) {
            return f64::INFINITY;
        }
        b / -slope
    };
    2.0 * (body + rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_table() {
        let z = bundled_zeros();
        assert_eq!(z.len(), 100);
        assert!((z.zeros()[0].gamma - 14.134725141734693).abs() < 1e-12);
        assert!((z.max_gamma() - 236.5242296658162).abs() < 1e-10);
        assert!(z.all_critical());
        assert_eq!(z.first(10).len(), 10);
        assert_eq!(z.first(1000).len(), 100);
    }

    #[test]
    fn parser_accepts_comments_and_beta() {
        let z = parse_zeros("# header\n14.134725 0.5\n\n21.022040 # second\n", "t", LoadOptions::default())
            .unwrap();
        assert_eq!(z.len(), 2);
        assert_eq!(z.zeros()[1], ZetaZero::critical(21.022040));
    }

    #[test]
    fn parser_rejections() {
        let o = LoadOptions::default();
        assert!(matches!(parse_zeros("21.0\n", "t", o), Err(ZeroError::FirstZero { .. })));
        assert!(matches!(
            parse_zeros("14.13\n25.0\n21.0\n", "t", o),
            Err(ZeroError::NotAscending { line: 3, .. })
        ));
        assert!(matches!(parse_zeros("14.13\n14.13\n", "t", o), Err(ZeroError::NotAscending { .. })));
        let empty = parse_zeros("# nothing\n", "t", o).unwrap();
        assert!(empty.is_empty());
        assert!(matches!(empty.take(1), Err(ZeroError::Range { requested: 1, available: 0 })));
        assert_eq!(paired_zero_sum::<(), _>(empty.take(0).unwrap(), |r| Ok(r.rho())), Ok(0.0));
        assert!(matches!(parse_zeros("14.13 abc\n", "t", o), Err(ZeroError::Parse { line: 1, .. })));
        assert!(matches!(parse_zeros("14.13 0.6\n", "t", o), Err(ZeroError::OffCriticalLine { .. })));
        let ok = parse_zeros("14.13 0.6\n", "t", LoadOptions { allow_off_line: true }).unwrap();
        assert!(!ok.all_critical());
    }

    #[test]
    fn paired_sum_doubles_real_part() {
        let z = parse_zeros("14.13\n21.02\n", "t", LoadOptions::default()).unwrap();
        let s: f64 = paired_zero_sum::<(), _>(z.zeros(), |r| Ok(Complex64::new(r.gamma, 7.0))).unwrap();
        assert!((s - 2.0 * (14.13 + 21.02)).abs() < 1e-12);
        let e = paired_zero_sum(z.zeros(), |r| if r.gamma > 20.0 { Err("bad") } else { Ok(r.rho()) });
        assert_eq!(e, Err("bad"));
    }

    #[test]
    fn tail_estimate_power_law() {
        // 2∫_T^∞ t^{-3} log(t/2π)/(2π) dt in closed form
        let t0 = 100.0;
        let est = zero_tail_estimate(t0, |t| t.powi(-3));
        let tp = 2.0 * std::f64::consts::PI;
        let exact = 2.0 / tp * t0.powi(-2) * ((t0 / tp).ln() / 2.0 + 0.25);
        assert!((est / exact - 1.0).abs() < 1e-6, "{est} vs {exact}");
        assert!(zero_tail_estimate(t0, |t| 1.0 / t).is_infinite());
    }

    #[test]
    fn tail_estimate_bounds_actual_sum() {
        let z = bundled_zeros();
        let g = |t: f64| t.powf(-2.5);
        let actual: f64 = z.zeros()[10..].iter().map(|r| g(r.gamma)).sum();
        let est = zero_tail_estimate(z.zeros()[10].gamma, g);
        assert!(est > actual);
    }
}
