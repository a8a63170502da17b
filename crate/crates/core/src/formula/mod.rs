//! Main terms M1–M4 of the explicit formula, their assembly against the
//! arithmetic side, and the numerical studies built on them.

mod bounds;
mod probe;
mod study;
mod terms;

pub use bounds::{
    index_tail, lattice_points, lattice_shell, lattice_tail, real_bessel_bound, real_bessel_majorant,
    zero_bessel_envelope, zero_bessel_majorant,
};
pub use probe::{convergence_probe, omega2_real, ProbeOptions, ProbeSeries};
pub use study::{
    fit_loglog_slope, s_tilde_explicit, scaling_study, SExplicitCheck, ScalingStudy, SpecChoice,
};
pub use terms::{m1_term, m2_term, m3_term, m4_term, Block4Power, TermValue};

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::arithmetic::{cesaro_lhs, compute_rq, sieve_von_mangoldt, ArithmeticError, CesaroParams, LinnikTable};
use crate::parallel::{compensated_sum, join};
use crate::specfun::{PrecisionConfig, SpecFunError};
use crate::zeros::{ZeroError, ZeroSet};

/// Orders `k ≤ 3/2` fall outside the theorem and need an explicit opt-in.
pub const THEOREM_MIN_K: f64 = 1.5;
pub const DEFAULT_ZEROS: usize = 50;
/// Default per-term tolerance relative to `N^{k+1}`.
pub const DEFAULT_REL_TOL: f64 = 1e-6;
/// Largest `L` or `M` the automatic choice will go to.
pub const MAX_AUTO_CUTOFF: u32 = 128;

#[derive(Debug, Error)]
pub enum FormulaError {
    #[error("{term}: {source}")]
    Term {
        term: &'static str,
        #[source]
        source: SpecFunError,
    },
    #[error(transparent)]
    Zeros(#[from] ZeroError),
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
    #[error("k = {k} is outside the theorem range k > 3/2; allow subcritical k to evaluate anyway")]
    TheoremRange { k: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
}

impl FormulaError {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(self, FormulaError::Term { .. } | FormulaError::Quadrature(_))
    }
}

/// Cutoffs for the infinite sums: `Z` zeros, lattice points with
/// `l1² + l2² ≤ L²`, indices `m ≤ M`, and the target absolute tolerance
/// used when choosing `L` and `M`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TruncationSpec {
    pub z: usize,
    pub l: u32,
    pub m: u32,
    pub tol: f64,
}

impl TruncationSpec {
    pub fn new(z: usize, l: u32, m: u32, tol: f64) -> Result<Self, FormulaError> {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(FormulaError::Invalid(format!("tolerance must be positive, got {tol}")));
        }
        Ok(Self { z, l, m, tol })
    }

    /// `Z = min(50, available)`, `tol = 1e-6·N^{k+1}`, and the smallest `L`, `M`
    /// whose tail bounds meet `tol`.
    pub fn auto(params: &CesaroParams, zeros: &ZeroSet) -> Result<Self, FormulaError> {
        let tol = DEFAULT_REL_TOL * (params.n as f64).powf(params.k + 1.0);
        Self::auto_with(params, zeros, DEFAULT_ZEROS.min(zeros.len()), tol)
    }

    pub fn auto_with(
        params: &CesaroParams,
        zeros: &ZeroSet,
        z: usize,
        tol: f64,
    ) -> Result<Self, FormulaError> {
        let mut spec = Self::new(z, 1, 1, tol)?;
        let used = zeros.take(z)?;
        let k = params.k;
        let n = params.n as f64;
        while spec.l < MAX_AUTO_CUTOFF && terms::lattice_tail_for(k, n, used, spec.l) > tol {
            spec.l += 1;
        }
        while spec.m < MAX_AUTO_CUTOFF && terms::index_tail_for(k, n, used, spec.m, 1.0) > tol {
            spec.m += 1;
        }
        Ok(spec)
    }

    pub fn with_z(self, z: usize) -> Self {
        Self { z, ..self }
    }

    pub fn with_l(self, l: u32) -> Self {
        Self { l, ..self }
    }

    pub fn with_m(self, m: u32) -> Self {
        Self { m, ..self }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct EvalOptions {
    /// Evaluate `k ≤ 3/2` instead of refusing.
    pub allow_subcritical: bool,
    pub precision: PrecisionConfig,
    /// Also compute M4 with `N^{ρ}` in its fourth block.
    pub diagnostic: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct TailBounds {
    pub m2_zeros: f64,
    pub m3_zeros: f64,
    pub m3_lattice: f64,
    pub m4_zeros: f64,
    pub m4_index: f64,
}

/// Wall-clock seconds per term; not part of any serialized output.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Timings {
    pub lhs: f64,
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormulaReport {
    pub params: CesaroParams,
    pub spec: TruncationSpec,
    pub lhs: f64,
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
    pub total: f64,
    pub residual: f64,
    pub normalized_residual: f64,
    pub tail_bounds: TailBounds,
    pub m2_blocks: Vec<f64>,
    pub m3_blocks: Vec<f64>,
    pub m4_blocks: Vec<f64>,
    /// M4 with `N^{ρ}` in the fourth block, when requested.
    pub m4_full_rho: Option<f64>,
    pub flags: Vec<String>,
    #[serde(skip)]
    pub timings: Timings,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed().as_secs_f64())
}

fn range_flags(params: &CesaroParams, opts: &EvalOptions) -> Result<Vec<String>, FormulaError> {
    let k = params.k;
    let mut flags = Vec::new();
    if k <= THEOREM_MIN_K {
        if !opts.allow_subcritical {
            return Err(FormulaError::TheoremRange { k });
        }
        flags.push(format!("k = {k} is outside the theorem range k > 3/2"));
        if k <= 1.0 {
            flags.push("M4 zero blocks need k > 1".into());
        }
        if k <= 0.5 {
            flags.push("M2 zero sums need k > 1/2".into());
        }
    }
    if params.uses_zero_power_convention() {
        flags.push("k = 0 uses 0^0 = 1 for the n = N weight".into());
    }
    Ok(flags)
}

/// Builds `r_Q` up to `N` and evaluates both sides.
pub fn evaluate(
    params: &CesaroParams,
    zeros: &ZeroSet,
    spec: &TruncationSpec,
    opts: &EvalOptions,
) -> Result<FormulaReport, FormulaError> {
    range_flags(params, opts)?;
    let lambda = sieve_von_mangoldt(params.n)?;
    let rq = compute_rq(&lambda, params.n as usize)?;
    evaluate_with_table(params, &rq, zeros, spec, opts)
}

/// Evaluates both sides with a precomputed `r_Q` table. The left side and
/// the four terms run concurrently.
pub fn evaluate_with_table(
    params: &CesaroParams,
    rq: &LinnikTable,
    zeros: &ZeroSet,
    spec: &TruncationSpec,
    opts: &EvalOptions,
) -> Result<FormulaReport, FormulaError> {
    let flags = range_flags(params, opts)?;
    let cfg = &opts.precision;
    cfg.validate().map_err(|source| FormulaError::Term { term: "config", source })?;
    let ((lhs, m1, m2), (m3, (m4, m4f))) = join(
        || {
            let lhs = timed(|| cesaro_lhs(rq, *params));
            let m1 = timed(|| m1_term(params));
            let m2 = timed(|| m2_term(params, zeros, spec));
            (lhs, m1, m2)
        },
        || {
            join(
                || timed(|| m3_term(params, zeros, spec, cfg)),
                || {
                    join(
                        || timed(|| m4_term(params, zeros, spec, cfg, Block4Power::HalfRho)),
                        || {
                            opts.diagnostic.then(|| {
                                m4_term(params, zeros, spec, cfg, Block4Power::FullRho).map(|t| t.value)
                            })
                        },
                    )
                },
            )
        },
    );
    let timings = Timings { lhs: lhs.1, m1: m1.1, m2: m2.1, m3: m3.1, m4: m4.1 };
    let lhs = lhs.0?;
    let m1 = m1.0?;
    let m2 = m2.0?;
    let m3 = m3.0?;
    let m4 = m4.0?;
    let m4_full_rho = m4f.transpose()?;

    let total = compensated_sum([m1, m2.value, m3.value, m4.value]);
    let residual = lhs - total;
    let normalized_residual = residual / (params.n as f64).powf(params.k + 1.0);
    Ok(FormulaReport {
        params: *params,
        spec: *spec,
        lhs,
        m1,
        m2: m2.value,
        m3: m3.value,
        m4: m4.value,
        total,
        residual,
        normalized_residual,
        tail_bounds: TailBounds {
            m2_zeros: m2.zero_tail,
            m3_zeros: m3.zero_tail,
            m3_lattice: m3.cutoff_tail,
            m4_zeros: m4.zero_tail,
            m4_index: m4.cutoff_tail,
        },
        m2_blocks: m2.blocks,
        m3_blocks: m3.blocks,
        m4_blocks: m4.blocks,
        m4_full_rho,
        flags,
        timings,
    })
}
