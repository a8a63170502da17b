//! Both sides of the explicit formula for the Cesàro average of Linnik numbers.
//!
//! The arithmetic side is the weighted sum
//! `Σ_{n≤N} r_Q(n) (N−n)^k / Γ(k+1)` where `r_Q(n) = Σ_{m1+m2²+m3²=n} Λ(m1)`.
//! The analytic side is the sum of four main terms built from the nontrivial
//! zeros of ζ(s) and Bessel functions of complex order. The crate evaluates
//! both with explicit truncation bounds so the difference can be compared
//! against the `O(N^{k+1})` error term.
//!
//! Module map:
//!
//! * [`arithmetic`] – von Mangoldt sieve, `r_Q`, the Cesàro sum and the
//!   truncated generating functions `S̃`, `ω₂`, `θ₃`.
//! * [`specfun`] – complex log-gamma, `J_ν(u)` of complex order, Laplace
//!   line integrals and the quadrature oracles.
//! * [`zeros`] – zero tables: parsing, validation, caching, paired sums and
//!   tail bounds.
//! * [`formula`] – the main terms, full reports, the lattice/zero probe and
//!   N-scaling studies.
//! * [`parallel`] – deterministic chunked reductions (rayon behind the
//!   `parallel` feature).

pub mod arithmetic;
pub mod formula;
pub mod parallel;
pub mod specfun;
pub mod zeros;

pub use num_complex::Complex64;
