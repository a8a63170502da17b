//! Exact arithmetic side of the formula.
//!
//! Everything here is a finite computation over integers `n ≤ N`: the von
//! Mangoldt table, the representation function `r_Q`, the Cesàro-weighted
//! sum, and truncated versions of the generating functions used for the
//! diagnostic identities (`S̃`, `ω₂`, `θ₃`).

mod lambda;
mod linnik;
mod series;

pub use lambda::{sieve_von_mangoldt, LambdaTable, MAX_SIEVE_LIMIT};
pub use linnik::{cesaro_lhs, compute_rq, CesaroParams, LinnikTable};
pub use series::{
    generating_identity, omega2, omega2_auto, s_tilde, s_tilde_auto, theta3, theta3_auto,
    theta_modular_residual, ComplexPoint, GeneratingIdentity, SeriesValue,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArithmeticError {
    #[error("table size must be at least 1")]
    EmptyTable,
    #[error("table size {requested} exceeds the supported limit {max}")]
    TooLarge { requested: u64, max: u64 },
    #[error("table covers n ≤ {have} but n ≤ {need} is required")]
    TableTooShort { have: usize, need: usize },
    #[error("invalid Cesàro parameters: {0}")]
    InvalidParams(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cutoff {cutoff} too small for a = {a}: need cutoff²·a ≥ {required}")]
    CutoffTooSmall { cutoff: usize, a: f64, required: f64 },
}
