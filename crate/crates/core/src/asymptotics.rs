//! Taylor functionals ν₀, ν₁, … of the expected-trace rational functions at
//! x = 0, the independent word-counting route for ν₁, support estimation from
//! moment growth, and numerical verification of the master inequalities.

use crate::error::{internal, precondition, Result};
use crate::exact_expectations::ExpectationEngine;
use crate::free_group::{divisor_count, inverse_letter, max_power_exponent, Letter};
use crate::gauss::{rational_to_f64, GaussRational};
use crate::limit_model::walk_profile;
use crate::nc_poly::{trace_word_expansion, NcPolynomial, ScalarPolynomial};
use crate::ratfun::RationalFunctionQ;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

/// Provenance of a computed ν value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NuRoute {
    Taylor,
    WordCount,
}

/// One ν_m(h) value with its provenance.
#[derive(Clone, Debug, Serialize)]
pub struct NuFunctionalValue {
    pub order: usize,
    #[serde(serialize_with = "crate::cli::serialize_rational")]
    pub value: BigRational,
    pub route: NuRoute,
}

/// Taylor coefficients ν₀..ν_m of Ψ at x = 0 (exact).
pub fn taylor_nu(psi: &RationalFunctionQ, m: usize) -> Result<Vec<BigRational>> {
    psi.taylor_at_zero(m)
}

/// ν₁(x^p) for the adjacency model by the word-counting route:
/// −τ(A_F^p) plus, over every proper power g = u^k (k ≥ 2) in the radius-p
/// ball, (ω(k)−1) times the number of length-p letter sequences reducing to g.
/// Uses the uniqueness of the non-power decomposition.
pub fn nu1_adjacency_wordcount(d: usize, p: usize) -> Result<BigInt> {
    if d < 1 || p < 1 {
        return Err(precondition("need d ≥ 1 and p ≥ 1"));
    }
    let profile = walk_profile(d, p);
    let mut acc = -profile[p][0].clone();
    // DFS over all nonempty reduced words of length ≤ p.
    let mut letters: Vec<Letter> = Vec::with_capacity(p);
    fn rec(
        letters: &mut Vec<Letter>,
        d: usize,
        p: usize,
        profile: &[Vec<BigInt>],
        acc: &mut BigInt,
    ) -> Result<()> {
        let len = letters.len();
        if len > 0 && (p - len).is_multiple_of(2) {
            let k = max_power_exponent(letters, d);
            if k >= 2 {
                let weight = divisor_count(k as u64)? - 1;
                if weight > 0 {
                    *acc += BigInt::from(weight) * &profile[p][len];
                }
            }
        }
        if len == p {
            return Ok(());
        }
        for l in 1..=(2 * d) as Letter {
            if let Some(&last) = letters.last() {
                if l == inverse_letter(last, d) {
                    continue;
                }
            }
            letters.push(l);
            rec(letters, d, p, profile, acc)?;
            letters.pop();
        }
        Ok(())
    }
    rec(&mut letters, d, p, &profile, &mut acc)?;
    Ok(acc)
}

/// ν₁(x^p) for a general self-adjoint polynomial by the word-counting route:
/// −(tr_D⊗τ)(X_F^p) + Σ_{k≥2}(ω(k)−1) Σ coeff·1_{word = v^k} over the trace
/// word expansion of P^p. Agrees exactly with the Taylor route.
pub fn nu1_polynomial_wordcount(
    p: &NcPolynomial,
    power: usize,
    max_raw_terms: u64,
) -> Result<GaussRational> {
    let expansion = trace_word_expansion(p, &ScalarPolynomial::monomial(power), max_raw_terms)?;
    let mut acc = GaussRational::zero();
    for (c, w) in &expansion {
        if w.is_identity() {
            acc += &(-c.clone());
            continue;
        }
        let k = max_power_exponent(w.letters(), w.d());
        if k >= 2 {
            let weight = divisor_count(k as u64)? - 1;
            if weight > 0 {
                let weight = GaussRational::from_int(weight as i64);
                acc += &(&weight * c);
            }
        }
    }
    Ok(acc)
}

/// Normalizer applied to |ν(x^p)| before taking the p-th root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportNormalizer {
    /// No normalization.
    Unit,
    /// 1 + p²(p+1)⁴, the explicit polynomial bound on the ν₁ moments of the
    /// adjacency model.
    FriedmanMomentBound,
}

impl SupportNormalizer {
    fn value(&self, p: usize) -> f64 {
        match self {
            SupportNormalizer::Unit => 1.0,
            SupportNormalizer::FriedmanMomentBound => {
                let pf = p as f64;
                1.0 + pf * pf * (pf + 1.0).powi(4)
            }
        }
    }
}

/// Per-p normalized growth values and the extrapolated support radius.
#[derive(Clone, Debug, Serialize)]
pub struct SupportEstimate {
    pub normalizer: SupportNormalizer,
    /// (p, (|ν(x^p)|/normalizer(p))^{1/p}) rows, increasing p.
    pub rows: Vec<(usize, f64)>,
    /// Max of the normalized values over the top third of available p
    /// (limsup semantics, no extrapolation).
    pub rho_hat: f64,
    pub target: Option<f64>,
    pub tolerance: f64,
    /// Set when a target is given: ρ̂ ≤ target + tolerance.
    pub within: Option<bool>,
}

/// Support estimate from exact moments via Lemma-style moment growth:
/// supp ν ⊆ [−ρ, ρ] with ρ = limsup |ν(x^p)|^{1/p}.
pub fn support_estimate(
    moments: &[(usize, BigRational)],
    normalizer: SupportNormalizer,
    target: Option<f64>,
    tolerance: f64,
) -> Result<SupportEstimate> {
    if moments.len() < 3 {
        return Err(precondition("support estimation needs at least 3 moments"));
    }
    let mut rows: Vec<(usize, f64)> = Vec::with_capacity(moments.len());
    for (p, value) in moments {
        if *p == 0 {
            return Err(precondition("moment orders must be ≥ 1"));
        }
        let v = rational_to_f64(&value.abs()) / normalizer.value(*p);
        let root = v.powf(1.0 / *p as f64);
        if !root.is_finite() {
            return Err(internal(format!("non-finite normalized growth at p = {p}")));
        }
        rows.push((*p, root));
    }
    rows.sort_by_key(|&(p, _)| p);
    let window = rows.len().div_ceil(3);
    let rho_hat = rows[rows.len() - window..]
        .iter()
        .map(|&(_, v)| v)
        .fold(0.0f64, f64::max);
    let within = target.map(|t| rho_hat <= t + tolerance);
    Ok(SupportEstimate { normalizer, rows, rho_hat, target, tolerance, within })
}

/// Outcome of one master-inequality verification.
#[derive(Clone, Debug, Serialize)]
pub struct MasterInequalityReport {
    pub n: u64,
    pub m: usize,
    pub q: usize,
    pub q0: usize,
    pub k_bound: f64,
    /// |Ψ_h(1/N) − Σ_{i<m} ν_i(h)/N^i|, exact, serialized as p/q.
    #[serde(serialize_with = "crate::cli::serialize_rational")]
    pub lhs: BigRational,
    pub lhs_f64: f64,
    pub h_sup_norm: f64,
    pub constant: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// Check |E tr_{DN} h(P(S^N,S^N*)) − Σ_{i<m} ν_i(h)/N^i| against the master
/// inequality bound (4qq₀(1+log d))^{4m}/N^m · ‖h‖_{C⁰[−K,K]}. The left side
/// is exact; the sup norm uses the Chebyshev-grid estimate (a lower bound on
/// the true norm, so the check is conservative).
pub fn verify_master_inequality(
    engine: &mut ExpectationEngine,
    p: &NcPolynomial,
    h: &ScalarPolynomial,
    n: u64,
    m: usize,
    max_raw_terms: u64,
) -> Result<MasterInequalityReport> {
    if m < 1 {
        return Err(precondition("master inequality order m must be ≥ 1"));
    }
    if n == 0 {
        return Err(precondition("N must be ≥ 1"));
    }
    let q = h.degree().max(1);
    let q0 = p.degree().max(1);
    let k_bound = p.coeff_norm_bound();
    let psi = engine.polynomial_trace_expectation(p, h, max_raw_terms)?;
    let nu = taylor_nu(&psi, m - 1)?;
    let x = BigRational::new(BigInt::from(1), BigInt::from(n));
    let mut lhs = psi.eval(&x)?;
    let mut x_pow = BigRational::from_integer(BigInt::from(1));
    for nu_i in nu.iter() {
        lhs -= nu_i * &x_pow;
        x_pow *= &x;
    }
    let lhs = lhs.abs();
    let d = p.d() as f64;
    let constant = (4.0 * q as f64 * q0 as f64 * (1.0 + d.ln())).powi(4 * m as i32);
    let h_sup_norm =
        crate::approximation::sup_norm_scalar_poly(h, -k_bound, k_bound);
    let rhs = constant / (n as f64).powi(m as i32) * h_sup_norm;
    let lhs_f64 = rational_to_f64(&lhs);
    let pass = lhs_f64 <= rhs;
    Ok(MasterInequalityReport {
        n,
        m,
        q,
        q0,
        k_bound,
        lhs,
        lhs_f64,
        h_sup_norm,
        constant,
        rhs,
        pass,
    })
}

/// Explicit bound on |ν_m(h)|: (4qq₀(1+log d))^{4m} ‖h‖_{C⁰[−K,K]}.
pub fn nu_bound_constant(q: usize, q0: usize, d: usize, m: usize) -> f64 {
    (4.0 * q.max(1) as f64 * q0.max(1) as f64 * (1.0 + (d as f64).ln())).powi(4 * m as i32)
}

/// Exact ν₁(x^p) of the adjacency model via the Taylor route, for tests and
/// the CLI `nu` subcommand.
pub fn nu_adjacency_taylor(
    engine: &mut ExpectationEngine,
    d: usize,
    p: usize,
    order: usize,
    max_raw_terms: u64,
) -> Result<Vec<BigRational>> {
    let a = NcPolynomial::adjacency(d);
    let psi = engine.polynomial_trace_expectation(&a, &ScalarPolynomial::monomial(p), max_raw_terms)?;
    taylor_nu(&psi, order)
}

/// Sanity helper: ν₀(x^p) must be the limiting τ-moment.
pub fn nu0_matches_tau(engine: &mut ExpectationEngine, p: &NcPolynomial, power: usize) -> Result<bool> {
    let psi =
        engine.polynomial_trace_expectation(p, &ScalarPolynomial::monomial(power), u64::MAX)?;
    let nu0 = taylor_nu(&psi, 0)?.remove(0);
    let tau = crate::limit_model::tau_moment(p, power, 1 << 24)?;
    if !tau.is_real() {
        return Err(internal("τ-moment of a self-adjoint polynomial came out complex"));
    }
    Ok(nu0 == tau.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_group::Word;
    use crate::limit_model::adjacency_tau_moment;
    use crate::ratfun::QPoly;
    use num_traits::Zero;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn taylor_examples() {
        let psi = RationalFunctionQ::from_poly(QPoly::from_ints(&[1, -1]));
        assert_eq!(taylor_nu(&psi, 1).unwrap(), vec![rat(1, 1), rat(-1, 1)]);
        let psi =
            RationalFunctionQ::new(QPoly::from_ints(&[0, 1]), QPoly::from_ints(&[1, -1])).unwrap();
        assert_eq!(taylor_nu(&psi, 2).unwrap(), vec![rat(0, 1), rat(1, 1), rat(1, 1)]);
    }

    #[test]
    fn nica_first_order_for_powers() {
        // ν₁ of the expectation of a word reducing to v^k is ω(k)−1.
        let mut engine = ExpectationEngine::new();
        for (text, k) in [("aa", 2u64), ("aaa", 3), ("aaaa", 4), ("abab", 2), ("abbA", 2)] {
            let we = engine.word_expectation(&Word::parse(text, Some(2)).unwrap()).unwrap();
            let nu = taylor_nu(&we.psi, 1).unwrap();
            assert_eq!(nu[0], rat(0, 1), "{text}");
            assert_eq!(
                nu[1],
                BigRational::from_integer(BigInt::from(divisor_count(k).unwrap() as i64 - 1)),
                "{text}"
            );
        }
    }

    #[test]
    fn adjacency_wordcount_examples() {
        assert_eq!(nu1_adjacency_wordcount(2, 1).unwrap(), BigInt::zero());
        assert_eq!(nu1_adjacency_wordcount(2, 2).unwrap(), BigInt::zero());
        assert_eq!(nu1_adjacency_wordcount(2, 3).unwrap(), BigInt::from(4));
    }

    #[test]
    fn route_equality_small() {
        let mut engine = ExpectationEngine::new();
        let a = NcPolynomial::adjacency(2);
        for p in 1..=4usize {
            let taylor = nu_adjacency_taylor(&mut engine, 2, p, 1, 1 << 22).unwrap();
            let wc = nu1_adjacency_wordcount(2, p).unwrap();
            assert_eq!(taylor[1], BigRational::from_integer(wc.clone()), "p = {p}");
            let poly_wc = nu1_polynomial_wordcount(&a, p, 1 << 22).unwrap();
            assert!(poly_wc.is_real());
            assert_eq!(poly_wc.re, BigRational::from_integer(wc), "poly route p = {p}");
        }
    }

    #[test]
    fn nu1_polynomial_wordcount_single_generator() {
        // P = s₁ + s₁*, p = 2: the only proper-power words are a² and A².
        let s1 = NcPolynomial::generator(2, 1).unwrap();
        let p = s1.add(&s1.adjoint()).unwrap();
        let v = nu1_polynomial_wordcount(&p, 2, 1 << 20).unwrap();
        assert_eq!(v, GaussRational::from_int(0)); // −τ(2) + 2·(ω(2)−1) = −2 + 2
        let v = nu1_polynomial_wordcount(&p, 3, 1 << 20).unwrap();
        assert_eq!(v, GaussRational::from_int(2)); // a³ and A³, τ odd = 0
    }

    #[test]
    fn support_estimate_shapes() {
        let moments: Vec<(usize, BigRational)> =
            (1..=9).map(|p| (p, BigRational::zero())).collect();
        let est = support_estimate(&moments, SupportNormalizer::Unit, Some(1.0), 0.01).unwrap();
        assert_eq!(est.rho_hat, 0.0);
        assert_eq!(est.within, Some(true));

        let err = support_estimate(&moments[..2], SupportNormalizer::Unit, None, 0.0).unwrap_err();
        assert!(matches!(err, crate::error::Error::Precondition(_)));

        // ν₀ moments of the adjacency: ρ̂ approaches 2√3 from below. Odd
        // moments vanish, so estimate over the even ones.
        let moments: Vec<(usize, BigRational)> = (1..=8)
            .map(|k| (2 * k, BigRational::from_integer(adjacency_tau_moment(2, 2 * k))))
            .collect();
        let est = support_estimate(&moments, SupportNormalizer::Unit, Some(kesten2()), 0.01).unwrap();
        assert!(est.rho_hat < kesten2());
        assert!(est.rho_hat > 2.6);
        assert_eq!(est.within, Some(true));
    }

    fn kesten2() -> f64 {
        crate::limit_model::kesten_norm(2)
    }

    #[test]
    fn master_inequality_constant_function() {
        // For constant h the m = 2 left side is exactly zero (Ψ_c = c(1−x)),
        // and at m = 1 it is |c|/N, still below the clamped bound.
        let mut engine = ExpectationEngine::new();
        let a = NcPolynomial::adjacency(2);
        let h = ScalarPolynomial::from_ints(&[5]);
        let rep = verify_master_inequality(&mut engine, &a, &h, 100, 2, 1 << 20).unwrap();
        assert!(rep.lhs.is_zero());
        assert!(rep.pass);
        let rep = verify_master_inequality(&mut engine, &a, &h, 100, 1, 1 << 20).unwrap();
        assert_eq!(rep.lhs, rat(5, 100));
        assert!(rep.pass);
    }

    #[test]
    fn master_inequality_x2() {
        // Adjacency, h = x², m = 2, N = 100: Ψ ≡ 4, so the LHS vanishes.
        let mut engine = ExpectationEngine::new();
        let a = NcPolynomial::adjacency(2);
        let rep = verify_master_inequality(
            &mut engine,
            &a,
            &ScalarPolynomial::monomial(2),
            100,
            2,
            1 << 20,
        )
        .unwrap();
        assert!(rep.lhs.is_zero());
        assert!(rep.pass);
    }

    #[test]
    fn nu_functional_bound_holds() {
        // |ν_m(h)| ≤ (4qq₀(1+log d))^{4m} ‖h‖_{C⁰[−K,K]} with the explicit
        // constant, for every computed functional.
        use rand_chacha::rand_core::{RngCore, SeedableRng};
        let mut engine = ExpectationEngine::new();
        let a = NcPolynomial::adjacency(2);
        let k = a.coeff_norm_bound();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xB0B);
        for _ in 0..10 {
            let deg = 1 + (rng.next_u64() as usize) % 4;
            let coeffs: Vec<BigRational> = (0..=deg)
                .map(|_| BigRational::from_integer(BigInt::from((rng.next_u64() % 9) as i64 - 4)))
                .collect();
            let h = ScalarPolynomial::from_coeffs(coeffs);
            if h.is_zero() {
                continue;
            }
            let psi = engine.polynomial_trace_expectation(&a, &h, 1 << 22).unwrap();
            let nus = taylor_nu(&psi, 3).unwrap();
            let sup = crate::approximation::sup_norm_scalar_poly(&h, -k, k);
            for (m, nu) in nus.iter().enumerate() {
                let bound = nu_bound_constant(h.degree(), a.degree(), a.d(), m) * sup;
                assert!(
                    rational_to_f64(&nu.abs()) <= bound,
                    "m = {m}: |ν_m| = {} vs bound {bound}",
                    rational_to_f64(&nu.abs())
                );
            }
        }
    }

    #[test]
    fn nu0_is_tau() {
        let mut engine = ExpectationEngine::new();
        let a = NcPolynomial::adjacency(2);
        for p in 0..=5usize {
            assert!(nu0_matches_tau(&mut engine, &a, p).unwrap(), "p = {p}");
        }
    }
}
