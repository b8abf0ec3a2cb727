//! Explicit tail-bound certificates P[‖A^N‖ ≥ 2√(2d−1) + ε] ≲ C(d, ε)/N in
//! the shape of the effective Friedman theorem, with every intermediate norm
//! and constant recorded. The universal constant of the underlying smooth
//! master inequality is not pinned down by the theory, so certificates carry
//! an explicit up-to-universal-constant flag.

use crate::approximation::testfn::build_test_function;
use crate::error::{precondition, Result};
use crate::limit_model::kesten_norm;
use serde::Serialize;

/// A computed tail bound with full provenance.
#[derive(Clone, Debug, Serialize)]
pub struct TailCertificate {
    pub d: usize,
    pub eps: f64,
    pub n: u64,
    /// Bulk edge ρ = 2√(2d−1).
    pub rho: f64,
    /// A.s. bound K = 2d on ‖A^N‖; domain of the Chebyshev variable.
    pub k_domain: f64,
    /// Smoothness order of the test function (m = 8 for the 1/N² master bound).
    pub m: usize,
    /// Transition width of the test function in the θ variable.
    pub delta: f64,
    /// β_* = 1 + log(2d/ε) and the conjugate β used for the L^β norm.
    pub beta_star: f64,
    pub beta: f64,
    /// Measured ‖f^{(9)}‖_{L^β[0,2π]}.
    pub f9_norm_lbeta: f64,
    /// (4q₀(1+log d))^{4m/... }: the smooth master constant with q₀ = 1, m = 2,
    /// i.e. (4(1+log d))⁸.
    pub master_constant: f64,
    /// Configurable stand-in for the unspecified universal constant (default 1).
    pub universal_constant: f64,
    /// Final probability bound: universal · master · β_* · ‖f^{(9)}‖ / N.
    pub bound: f64,
    pub up_to_universal_constant: bool,
}

/// Assemble the Friedman-shaped certificate at (d, ε, N). Requires
/// 0 < ε < 2d − 2√(2d−1) so the test function fits under the a.s. bound.
pub fn friedman_certificate(
    d: usize,
    eps: f64,
    n: u64,
    universal_constant: f64,
) -> Result<TailCertificate> {
    if d < 2 {
        return Err(precondition("certificates need d ≥ 2"));
    }
    if n == 0 {
        return Err(precondition("N must be ≥ 1"));
    }
    let rho = kesten_norm(d);
    let k_domain = 2.0 * d as f64;
    let eps_max = k_domain - rho;
    if !(eps > 0.0 && eps < eps_max) {
        return Err(precondition(format!(
            "ε must lie in (0, 2d − 2√(2d−1)) = (0, {eps_max:.6}); got {eps}"
        )));
    }
    let m = 8usize;
    let tf = build_test_function(rho, eps, k_domain, m)?;
    let beta_star = 1.0 + (k_domain / eps).ln();
    let beta = beta_star / (beta_star - 1.0);
    let f9_norm_lbeta = tf.deriv_norm_lbeta(m + 1, beta);
    let master_constant = (4.0 * (1.0 + (d as f64).ln())).powi(8);
    // E[Tr χ(A^N)] = N·E[tr_N χ(A^N)] ≲ master·β_*·‖f^{(9)}‖/N since both
    // ν₀(χ) and ν₁(χ) vanish on the support of the limiting spectrum plus ν₁.
    let bound = universal_constant * master_constant * beta_star * f9_norm_lbeta / n as f64;
    Ok(TailCertificate {
        d,
        eps,
        n,
        rho,
        k_domain,
        m,
        delta: tf.delta,
        beta_star,
        beta,
        f9_norm_lbeta,
        master_constant,
        universal_constant,
        bound,
        up_to_universal_constant: true,
    })
}
