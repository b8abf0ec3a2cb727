//! Exact-arithmetic and simulation toolkit for strong convergence of random
//! permutation matrices: expected traces of free-group words as exact rational
//! functions of 1/N, their Taylor functionals ν₀, ν₁, …, master-inequality and
//! support-bound verifiers, and spectral-gap experiments for random
//! 2d-regular graphs.
//!
//! Module map:
//! - [`free_group`]: words over F_d, reduction, power decomposition, first visits.
//! - [`nc_poly`]: noncommutative polynomials with exact matrix coefficients.
//! - [`limit_model`]: the limiting operators on the 2d-regular tree and τ.
//! - [`exact_expectations`]: E[tr_N w(S^N)] by coincidence-pattern enumeration.
//! - [`asymptotics`]: ν functionals two ways, support estimates, master inequality.
//! - [`approximation`]: Chebyshev/Markov/Zygmund toolkit, test functions, certificates.
//! - [`simulation`]: reproducible sampling, Lanczos with deflation, experiments.
//! - [`cli`]: the `permspec` binary's subcommands.

pub mod approximation;
pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod exact_expectations;
pub mod free_group;
pub mod gauss;
pub mod limit_model;
pub mod nc_poly;
pub mod ratfun;
pub mod simulation;

pub use error::{Error, Result};
