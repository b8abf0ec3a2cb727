//! Univariate approximation toolkit: Chebyshev expansions, Markov-type
//! inequality verifiers, Zygmund coefficient sums, smooth test functions, and
//! tail-bound certificates.

pub mod certificate;
pub mod chebyshev;
pub mod markov;
pub mod piecewise;
pub mod testfn;

pub use certificate::{friedman_certificate, TailCertificate};
pub use chebyshev::{cheb_expand, ChebyshevExpansion};
pub use markov::{
    interpolation_check, markov_bound_check, rational_markov_check, sup_norm_grid,
    sup_norm_scalar_poly, zygmund_sum, InterpolationReport, MarkovReport, RationalMarkovReport,
    ZygmundReport,
};
pub use piecewise::{adaptive_simpson, PiecewisePoly};
pub use testfn::{build_test_function, DerivativeNorms, TestFunction};
