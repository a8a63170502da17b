//! Special functions used by the main terms.
//!
//! * complex `log Γ` and stabilized Γ-ratios,
//! * `J_ν(u)` for complex order `ν` and real `u ≥ 0`,
//! * the Laplace line integral `(1/2πi)∫_{(a)} e^{Nz} z^{-s} dz`,
//! * quadrature oracles for `J_ν` built on the Sonine contour integral.
//!
//! Failures are reported as [`SpecFunError`] values carrying the attempted
//! strategy and the error estimate that was reached; nothing returns a
//! silently inaccurate number.

mod bessel;
mod fixed;
mod gamma;
mod laplace;
pub mod quad;
mod sonine;

pub use bessel::{
    bessel_j, bessel_j_detailed, bessel_kernel, bessel_magnitude_model, BesselStrategy,
    BesselValue, Method, PrecisionConfig,
};
pub use gamma::{gamma_ratio, ln_gamma_real, log_gamma};
pub use laplace::{laplace_line_integral, LaplaceValue};
pub use sonine::{sonine_hankel_quadrature, sonine_line_quadrature};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("Γ has a pole at {at}")]
    Pole { at: i64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error(
        "{strategy:?} reached relative error {achieved:.3e}, requested {requested:.3e} (working bits {bits})"
    )]
    Precision { strategy: Method, achieved: f64, requested: f64, bits: u32 },
    #[error("quadrature reached error {achieved:.3e}, requested {requested:.3e}")]
    Quadrature { achieved: f64, requested: f64 },
    #[error("invalid precision configuration: {0}")]
    InvalidConfig(String),
    #[error("non-finite value from {0}")]
    NonFinite(&'static str),
}
