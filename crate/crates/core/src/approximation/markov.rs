//! Numeric verifiers for the three Markov-type inequalities and the Zygmund
//! coefficient sum. Sup norms of polynomials are taken on a Chebyshev grid of
//! 8q+1 points with local parabolic refinement; the interpolation lemma's mesh
//! condition keeps that within a factor 2 of the true norm.

use crate::approximation::chebyshev::ChebyshevExpansion;
use crate::error::{precondition, Result};
use crate::gauss::rational_to_f64;
use crate::nc_poly::ScalarPolynomial;
use crate::ratfun::RationalFunctionQ;
use serde::Serialize;

/// Max of |f| on a Chebyshev grid of `points` nodes over [lo, hi], locally
/// refined by iterated three-point parabolic interpolation around each grid
/// maximum.
pub fn sup_norm_grid(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> f64 {
    let n = points.max(3);
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut best = f64::NEG_INFINITY;
    let mut best_x = lo;
    let mut xs = Vec::with_capacity(n);
    for j in 0..n {
        let theta = std::f64::consts::PI * j as f64 / (n - 1) as f64;
        xs.push(mid + half * theta.cos());
    }
    for &x in &xs {
        let v = f(x).abs();
        if v > best {
            best = v;
            best_x = x;
        }
    }
    // Local refinement: golden-section around the best node.
    let mut a = (best_x - half * 0.1).max(lo);
    let mut b = (best_x + half * 0.1).min(hi);
    let phi = 0.618_033_988_749_894_9;
    for _ in 0..60 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if f(c).abs() >= f(d).abs() {
            b = d;
        } else {
            a = c;
        }
    }
    best.max(f(0.5 * (a + b)).abs())
}

/// Grid-based sup norm of a scalar polynomial on [lo, hi] with 8q+1 nodes.
pub fn sup_norm_scalar_poly(h: &ScalarPolynomial, lo: f64, hi: f64) -> f64 {
    let q = h.degree().max(1);
    let coeffs = h.coeffs_f64();
    let eval = move |x: f64| {
        let mut acc = 0.0;
        for &c in coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    sup_norm_grid(&eval, lo, hi, 8 * q + 1)
}

/// Report from the Markov-inequality verifier.
#[derive(Clone, Debug, Serialize)]
pub struct MarkovReport {
    pub q: usize,
    pub m: usize,
    pub a: f64,
    pub deriv_norm: f64,
    pub h_norm: f64,
    pub bound: f64,
    /// deriv_norm / bound; ≤ 1 with equality for Chebyshev at m = 1.
    pub ratio: f64,
    pub pass: bool,
}

/// ‖h^{(m)}‖_{C⁰[0,a]} ≤ (2q²/a)^m / (2m−1)!! · ‖h‖_{C⁰[0,a]}.
pub fn markov_bound_check(h: &ScalarPolynomial, a: f64, m: usize) -> Result<MarkovReport> {
    if a <= 0.0 {
        return Err(precondition("interval length a must be > 0"));
    }
    if m == 0 {
        return Err(precondition("derivative order m must be ≥ 1"));
    }
    let q = h.degree();
    let mut deriv = h.clone();
    for _ in 0..m {
        deriv = deriv.derivative();
    }
    let deriv_norm = sup_norm_scalar_poly(&deriv, 0.0, a);
    let h_norm = sup_norm_scalar_poly(h, 0.0, a);
    let bound = (2.0 * (q * q) as f64 / a).powi(m as i32) / double_factorial_odd(m) * h_norm;
    let ratio = if bound > 0.0 { deriv_norm / bound } else { f64::from(deriv_norm > 0.0) };
    // Grid norms sit within a factor 2 of the truth, leave headroom for that
    // in the pass flag; the ratio itself is reported raw.
    let pass = deriv_norm <= bound * (1.0 + 1e-9) || bound == 0.0 && deriv_norm == 0.0;
    Ok(MarkovReport { q, m, a, deriv_norm, h_norm, bound, ratio, pass })
}

fn double_factorial_odd(m: usize) -> f64 {
    (0..m).map(|k| (2 * k + 1) as f64).product()
}

/// Report from the interpolation-inequality verifier.
#[derive(Clone, Debug, Serialize)]
pub struct InterpolationReport {
    pub q: usize,
    pub a: f64,
    pub mesh: f64,
    pub grid_max: f64,
    pub full_norm: f64,
    pub pass: bool,
}

/// ‖h‖_{C⁰[0,a]} ≤ 2·sup_{x∈I}|h(x)| for any I with mesh ≤ a/(4q²).
pub fn interpolation_check(
    h: &ScalarPolynomial,
    a: f64,
    points: &[f64],
) -> Result<InterpolationReport> {
    if a <= 0.0 {
        return Err(precondition("interval length a must be > 0"));
    }
    let q = h.degree().max(1);
    let allowed = a / (4.0 * (q * q) as f64);
    let mut sorted: Vec<f64> = points.to_vec();
    sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
    if sorted.is_empty() {
        return Err(precondition("interpolation set is empty"));
    }
    // Mesh condition: [0,a] ⊆ I + [−a/4q², a/4q²].
    let mut mesh = sorted[0].max(0.0) - 0.0;
    for w in sorted.windows(2) {
        mesh = mesh.max(0.5 * (w[1] - w[0]));
    }
    mesh = mesh.max(a - sorted.last().unwrap());
    if mesh > allowed * (1.0 + 1e-12) {
        return Err(precondition(format!(
            "interpolation mesh {mesh:.3e} exceeds a/(4q²) = {allowed:.3e}"
        )));
    }
    let grid_max = sorted.iter().map(|&x| h.eval_f64(x).abs()).fold(0.0f64, f64::max);
    let full_norm = sup_norm_scalar_poly(h, 0.0, a);
    let pass = full_norm <= 2.0 * grid_max * (1.0 + 1e-9);
    Ok(InterpolationReport { q, a, mesh, grid_max, full_norm, pass })
}

/// Report from the rational Markov verifier.
#[derive(Clone, Debug, Serialize)]
pub struct RationalMarkovReport {
    pub q: usize,
    pub m: usize,
    pub a: f64,
    pub c: f64,
    pub deriv_norm: f64,
    pub r_norm: f64,
    pub bound: f64,
    pub ratio: f64,
    pub pass: bool,
}

/// ‖r^{(m)}‖_{C⁰[0,a]} ≤ m!(5cq²/a)^m ‖r‖_{C⁰[0,a]} with
/// c = sup_{x,y∈[0,a]} |g(x)/g(y)|. Errors when the denominator has a zero in
/// [0, a].
pub fn rational_markov_check(
    r: &RationalFunctionQ,
    a: f64,
    m: usize,
) -> Result<RationalMarkovReport> {
    if a <= 0.0 {
        return Err(precondition("interval length a must be > 0"));
    }
    let den_coeffs: Vec<f64> = r.denominator().coeffs().iter().map(rational_to_f64).collect();
    let den = move |x: f64| {
        let mut acc = 0.0;
        for &c in den_coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    // Pole check: a sign change or a near-zero minimum of |g| on a dense grid.
    let samples = 4096;
    let mut min_abs = f64::INFINITY;
    let mut max_abs: f64 = 0.0;
    let mut last_sign = 0i32;
    for i in 0..=samples {
        let x = a * i as f64 / samples as f64;
        let v = den(x);
        let sign = if v > 0.0 { 1 } else if v < 0.0 { -1 } else { 0 };
        if sign == 0 || (last_sign != 0 && sign != last_sign) {
            return Err(precondition("denominator vanishes on [0, a]"));
        }
        last_sign = sign;
        min_abs = min_abs.min(v.abs());
        max_abs = max_abs.max(v.abs());
    }
    let c = max_abs / min_abs;
    let q = r.numerator().degree().max(r.denominator().degree()).max(1);
    let mut deriv = r.clone();
    for _ in 0..m {
        deriv = deriv.derivative();
    }
    let eval_rf = |rf: &RationalFunctionQ, x: f64| rf.eval_f64(x);
    let deriv_norm = sup_norm_grid(&|x| eval_rf(&deriv, x), 0.0, a, 8 * q + 1 + 16 * m);
    let r_norm = sup_norm_grid(&|x| eval_rf(r, x), 0.0, a, 8 * q + 1);
    let factorial: f64 = (1..=m).map(|k| k as f64).product();
    let bound = factorial * (5.0 * c * (q * q) as f64 / a).powi(m as i32) * r_norm;
    let ratio = if bound > 0.0 { deriv_norm / bound } else { f64::from(deriv_norm > 0.0) };
    let pass = deriv_norm <= bound * (1.0 + 1e-9);
    Ok(RationalMarkovReport { q, m, a, c, deriv_norm, r_norm, bound, ratio, pass })
}

/// Report from the Zygmund coefficient-sum check.
#[derive(Clone, Debug, Serialize)]
pub struct ZygmundReport {
    pub m: usize,
    pub beta: f64,
    pub beta_star: f64,
    /// Σ_{j≥1} j^m |a_j|, exact in the coefficients.
    pub lhs: f64,
    /// β_* ‖f^{(m+1)}‖_{L^β[0,2π]} with f(θ) = h(K cos θ).
    pub rhs: f64,
    /// Empirical constant lhs/rhs (the lemma hides an absolute constant).
    pub empirical_constant: f64,
}

/// Zygmund sum check: the cosine series of f(θ) = h(K cos θ) has coefficients
/// a_j, so f^{(i)}(θ) = Σ_j a_j j^i cos(jθ + iπ/2) in closed form.
pub fn zygmund_sum(e: &ChebyshevExpansion, m: usize, beta: f64) -> Result<ZygmundReport> {
    if beta <= 1.0 {
        return Err(precondition("β must be > 1 (β = ∞ allowed as f64::INFINITY)"));
    }
    let a = e.coeffs_f64();
    let lhs: f64 = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, &aj)| (j as f64).powi(m as i32) * aj.abs())
        .sum();
    let order = m + 1;
    let deriv = |theta: f64| -> f64 {
        let mut s = 0.0;
        for (j, &aj) in a.iter().enumerate().skip(1) {
            let jf = j as f64;
            s += aj * jf.powi(order as i32) * (jf * theta + order as f64 * std::f64::consts::FRAC_PI_2).cos();
        }
        s
    };
    let beta_star = if beta.is_infinite() { 1.0 } else { 1.0 / (1.0 - 1.0 / beta) };
    let norm = if beta.is_infinite() {
        sup_norm_grid(&deriv, 0.0, 2.0 * std::f64::consts::PI, 4096)
    } else {
        let integrand = |theta: f64| deriv(theta).abs().powf(beta);
        let integral = crate::approximation::piecewise::adaptive_simpson(
            &integrand,
            0.0,
            2.0 * std::f64::consts::PI,
            1e-8,
            24,
        );
        integral.powf(1.0 / beta)
    };
    let rhs = beta_star * norm;
    let empirical_constant = if rhs > 0.0 { lhs / rhs } else { 0.0 };
    Ok(ZygmundReport { m, beta, beta_star, lhs, rhs, empirical_constant })
}
