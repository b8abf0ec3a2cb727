//! The limiting model: the left-regular representation of F_d acting on
//! finitely supported vectors, walk counts on the 2d-regular tree, exact
//! τ-moments of P(s, s*), and moment-based lower estimates of ‖P(s, s*)‖.

use crate::error::{budget, precondition, Result};
use crate::free_group::{reduce, ReducedWord, Word};
use crate::gauss::{rational_to_f64, GaussRational};
use crate::nc_poly::{CoeffMatrix, NcPolynomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

/// Finitely supported vector over l²(F_d) with matrix amplitudes: tracking a
/// full M_D amplitude per group element lets one apply of P propagate all D
/// coordinate columns at once. Scalar amplitudes are the D = 1 case.
#[derive(Clone, Debug)]
pub struct GroupVector {
    d: usize,
    dim: usize,
    map: HashMap<ReducedWord, CoeffMatrix>,
}

impl GroupVector {
    /// δ_e with identity amplitude.
    pub fn delta_e(d: usize, dim: usize) -> Self {
        let mut map = HashMap::new();
        map.insert(ReducedWord::identity(d), CoeffMatrix::identity(dim));
        GroupVector { d, dim, map }
    }

    pub fn delta(g: ReducedWord, dim: usize) -> Self {
        let d = g.d();
        let mut map = HashMap::new();
        map.insert(g, CoeffMatrix::identity(dim));
        GroupVector { d, dim, map }
    }

    pub fn support_size(&self) -> usize {
        self.map.len()
    }

    pub fn amplitude(&self, g: &ReducedWord) -> CoeffMatrix {
        self.map.get(g).cloned().unwrap_or_else(|| CoeffMatrix::zero(self.dim))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ReducedWord, &CoeffMatrix)> {
        self.map.iter()
    }
}

/// Exact left-regular action ψ ↦ P(s, s*)ψ. Support grows by at most deg P.
pub fn apply(p: &NcPolynomial, psi: &GroupVector) -> Result<GroupVector> {
    if p.d() != psi.d || p.dim() != psi.dim {
        return Err(precondition("apply: incompatible rank or coefficient dimension"));
    }
    let mut map: HashMap<ReducedWord, CoeffMatrix> = HashMap::new();
    for (w, a) in p.terms() {
        for (g, m) in &psi.map {
            let target = w.concat(g);
            let product = a.mul(m);
            if product.is_zero() {
                continue;
            }
            match map.entry(target) {
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    let merged = e.get().add(&product);
                    if merged.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = merged;
                    }
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(product);
                }
            }
        }
    }
    Ok(GroupVector { d: psi.d, dim: psi.dim, map })
}

/// Table of walk counts on the 2d-regular tree: `profile[p][r]` is the number
/// of length-p words over the 2d letters whose product is a *fixed* element at
/// distance r from the identity. Homogeneity of the tree makes the count a
/// function of the distance alone, giving the radial recursion
/// w_{p+1}(0) = 2d·w_p(1), w_{p+1}(r) = w_p(r−1) + (2d−1)·w_p(r+1).
pub fn walk_profile(d: usize, p_max: usize) -> Vec<Vec<BigInt>> {
    let two_d = BigInt::from(2 * d as i64);
    let branch = BigInt::from((2 * d - 1) as i64);
    let mut table = Vec::with_capacity(p_max + 1);
    let mut row = vec![BigInt::zero(); p_max + 2];
    row[0] = BigInt::one();
    table.push(row.clone());
    for _ in 1..=p_max {
        let prev = table.last().unwrap();
        let mut next = vec![BigInt::zero(); p_max + 2];
        next[0] = &two_d * &prev[1];
        for r in 1..=p_max {
            next[r] = &prev[r - 1] + &branch * &prev[r + 1];
        }
        table.push(next);
    }
    table
}

/// ⟨δ_v, A_F^p δ_e⟩: the number of length-p letter sequences over the 2d
/// letters whose product reduces to v.
pub fn walk_count(v: &ReducedWord, p: usize, d: usize) -> BigInt {
    debug_assert_eq!(v.d(), d);
    walk_count_radial(v.len(), p, d)
}

/// Walk count to any fixed vertex at distance r.
pub fn walk_count_radial(r: usize, p: usize, d: usize) -> BigInt {
    if r > p {
        return BigInt::zero();
    }
    walk_profile(d, p)[p][r].clone()
}

/// τ-moment of the adjacency operator: ⟨δ_e, A_F^p δ_e⟩.
pub fn adjacency_tau_moment(d: usize, p: usize) -> BigInt {
    walk_count_radial(0, p, d)
}

/// (tr_D ⊗ τ)(P^p), exact. Takes the radial fast path for the standard
/// adjacency polynomial; otherwise applies P repeatedly to δ_e under a
/// support-size budget.
pub fn tau_moment(p: &NcPolynomial, power: usize, max_support: usize) -> Result<GaussRational> {
    if power == 0 {
        return Ok(GaussRational::one());
    }
    if p.is_standard_adjacency() {
        let m = adjacency_tau_moment(p.d(), power);
        return Ok(GaussRational::from_rational(BigRational::from_integer(m)));
    }
    let mut psi = GroupVector::delta_e(p.d(), p.dim());
    for step in 0..power {
        psi = apply(p, &psi)?;
        if psi.support_size() > max_support {
            return Err(budget(format!(
                "tau_moment support reached {} elements after {} applies; budget is {max_support}",
                psi.support_size(),
                step + 1
            )));
        }
    }
    let m = psi.amplitude(&ReducedWord::identity(p.d()));
    let dim = BigRational::from_integer(BigInt::from(p.dim() as i64));
    let tr = m.trace();
    Ok(GaussRational::new(tr.re / &dim, tr.im / dim))
}

/// The Kesten norm of the 2d-regular tree, ‖A_F‖ = 2√(2d−1).
pub fn kesten_norm(d: usize) -> f64 {
    2.0 * ((2 * d - 1) as f64).sqrt()
}

/// Moments m_p = (tr_D⊗τ)(X^p) together with the norm lower estimates
/// m_{2p}^{1/2p} and the ratio diagnostic m_{2p+2}/m_{2p}.
#[derive(Clone, Debug)]
pub struct NormEstimate {
    /// Certified lower bound on ‖P(s,s*)‖ (faithfulness of τ): the largest
    /// even-moment root computed.
    pub lower: f64,
    /// True when the estimate was run on P*P because P was not self-adjoint;
    /// `lower` then already accounts for the square root.
    pub used_square: bool,
    /// m_p for p = 0..=2·p_max of the self-adjoint operator actually powered.
    pub moments: Vec<BigRational>,
    /// m_{2p}^{1/2p} for p = 1..=p_max (already √-adjusted when used_square).
    pub estimates: Vec<f64>,
    /// Ratio diagnostic m_{2p+2}/m_{2p} (an estimator of ‖X‖²), p = 1..p_max.
    pub ratios: Vec<f64>,
}

/// Lower estimates of ‖P(s,s*)‖ from even τ-moments. For self-adjoint X the
/// sequence m_{2p}^{1/2p} is nondecreasing (log-convexity of even moments of a
/// measure); this is asserted in exact arithmetic.
pub fn limit_norm_estimate(
    p: &NcPolynomial,
    p_max: usize,
    max_support: usize,
) -> Result<NormEstimate> {
    if p_max == 0 {
        return Err(precondition("p_max must be ≥ 1"));
    }
    let used_square = !p.is_self_adjoint();
    let x = if used_square { p.adjoint().multiply(p)? } else { p.clone() };
    let mut moments = Vec::with_capacity(2 * p_max + 1);
    if x.is_standard_adjacency() {
        for power in 0..=2 * p_max {
            moments.push(BigRational::from_integer(adjacency_tau_moment(x.d(), power)));
        }
    } else {
        let mut psi = GroupVector::delta_e(x.d(), x.dim());
        let dim = BigRational::from_integer(BigInt::from(x.dim() as i64));
        let e = ReducedWord::identity(x.d());
        for power in 0..=2 * p_max {
            if power > 0 {
                psi = apply(&x, &psi)?;
                if psi.support_size() > max_support {
                    return Err(budget(format!(
                        "limit_norm_estimate support reached {} elements at power {power}; budget is {max_support}",
                        psi.support_size()
                    )));
                }
            }
            let tr = psi.amplitude(&e).trace();
            if !tr.im.is_zero() {
                return Err(crate::error::internal(
                    "self-adjoint moment came out complex".to_string(),
                ));
            }
            moments.push(tr.re / &dim);
        }
    }

    let root_exponent = if used_square { 2.0 } else { 1.0 };
    let mut estimates = Vec::with_capacity(p_max);
    for p_idx in 1..=p_max {
        let m2p = &moments[2 * p_idx];
        if m2p.is_negative() {
            return Err(crate::error::internal("negative even moment".to_string()));
        }
        let est = rational_to_f64(m2p).powf(1.0 / (2.0 * p_idx as f64 * root_exponent));
        estimates.push(est);
    }
    // Monotonicity in exact arithmetic: m_{2p+2}^p ≥ m_{2p}^{p+1}.
    for p_idx in 1..p_max {
        let lhs = pow_rational(&moments[2 * p_idx + 2], p_idx as u32);
        let rhs = pow_rational(&moments[2 * p_idx], p_idx as u32 + 1);
        if lhs < rhs {
            return Err(crate::error::internal(format!(
                "even-moment roots decreased between p = {p_idx} and {}",
                p_idx + 1
            )));
        }
    }
    let mut ratios = Vec::new();
    for p_idx in 1..p_max {
        let num = rational_to_f64(&moments[2 * p_idx + 2]);
        let den = rational_to_f64(&moments[2 * p_idx]);
        ratios.push(num / den);
    }
    let lower = estimates.iter().cloned().fold(0.0f64, f64::max);
    Ok(NormEstimate { lower, used_square, moments, estimates, ratios })
}

fn pow_rational(r: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= r;
    }
    acc
}

/// Right-hand side of the first-visit matrix-element identity:
/// ⟨δ_v, λ(g_{i₁})⋯λ(g_{i_k})δ_e⟩ minus the sum over split points s of
/// ⟨δ_e, λ(g_{i₁})Q⋯Qλ(g_{i_s})δ_e⟩·⟨δ_v, λ(g_{i_{s+1}})⋯λ(g_{i_k})δ_e⟩,
/// with Q = 1 − δ_eδ_e*. Evaluates exactly; deltas stay deltas (or die at Q).
pub fn first_visit_matrix_element(w: &Word, v: &ReducedWord) -> i64 {
    let d = w.d();
    debug_assert_eq!(v.d(), d);
    let letters = w.letters();
    let k = letters.len();
    let full = reduce(w);
    let mut rhs: i64 = if full == *v { 1 } else { 0 };
    for s in 1..k {
        // ⟨δ_e, λ(g_{i_1}) Q λ(g_{i_2}) Q ⋯ Q λ(g_{i_s}) δ_e⟩
        let mut cur = Some(ReducedWord::identity(d));
        for t in (1..=s).rev() {
            if let Some(mut g) = cur.take() {
                g.push_left(letters[t - 1]);
                if t > 1 && g.is_identity() {
                    cur = None;
                    break;
                }
                cur = Some(g);
            }
        }
        let q_factor = matches!(&cur, Some(g) if g.is_identity());
        if !q_factor {
            continue;
        }
        let suffix = reduce(&Word::new(d, letters[s..].to_vec()).expect("valid letters"));
        if suffix == *v {
            rhs -= 1;
        }
    }
    rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_group::is_first_visit;
    use crate::nc_poly::ScalarPolynomial;

    fn rw(text: &str, d: usize) -> ReducedWord {
        ReducedWord::parse(text, Some(d)).unwrap()
    }

    #[test]
    fn apply_examples() {
        let s1 = NcPolynomial::generator(2, 1).unwrap();
        let psi = apply(&s1, &GroupVector::delta_e(2, 1)).unwrap();
        assert_eq!(psi.support_size(), 1);
        assert_eq!(psi.amplitude(&rw("a", 2)), CoeffMatrix::identity(1));

        let p = s1.add(&s1.adjoint()).unwrap();
        let psi = apply(&p, &GroupVector::delta(rw("a", 2), 1)).unwrap();
        assert_eq!(psi.support_size(), 2);
        assert_eq!(psi.amplitude(&rw("aa", 2)), CoeffMatrix::identity(1));
        assert_eq!(psi.amplitude(&ReducedWord::identity(2)), CoeffMatrix::identity(1));
    }

    #[test]
    fn adjacency_applied_twice() {
        let a = NcPolynomial::adjacency(2);
        let mut psi = GroupVector::delta_e(2, 1);
        psi = apply(&a, &psi).unwrap();
        psi = apply(&a, &psi).unwrap();
        assert_eq!(
            psi.amplitude(&ReducedWord::identity(2)).get(0, 0),
            &GaussRational::from_int(4)
        );
        for w in crate::free_group::reduced_words_of_length(2, 2) {
            assert_eq!(psi.amplitude(&w).get(0, 0), &GaussRational::from_int(1), "at {w}");
        }
    }

    #[test]
    fn walk_counts_match_apply_route() {
        // The radial recursion against the literal repeated-apply definition.
        let a = NcPolynomial::adjacency(2);
        let mut psi = GroupVector::delta_e(2, 1);
        for p in 1..=6usize {
            psi = apply(&a, &psi).unwrap();
            for len in 0..=p {
                for w in crate::free_group::reduced_words_of_length(2, len) {
                    let via_apply = psi.amplitude(&w).get(0, 0).re.to_integer();
                    assert_eq!(walk_count(&w, p, 2), via_apply, "p={p} w={w}");
                }
            }
        }
    }

    #[test]
    fn walk_count_examples() {
        assert_eq!(walk_count(&ReducedWord::identity(2), 2, 2), BigInt::from(4));
        assert_eq!(walk_count(&rw("a", 2), 3, 2), BigInt::from(7));
        assert_eq!(walk_count(&rw("aaa", 2), 2, 2), BigInt::zero());
        // Parity: counts vanish when |v| and p differ mod 2.
        for p in 0..=5usize {
            for len in 0..=5usize {
                if (p + len) % 2 == 1 {
                    assert_eq!(walk_count_radial(len, p, 2), BigInt::zero());
                }
            }
        }
    }

    #[test]
    fn cauchy_schwarz_walk_identity() {
        // Σ_v walk(v,p)² = walk(e,2p), exactly.
        for d in [2usize, 3] {
            for p in 0..=5usize {
                let mut total = BigInt::zero();
                for len in 0..=p {
                    let count_at_len = if len == 0 {
                        BigInt::one()
                    } else {
                        BigInt::from(2 * d as i64)
                            * BigInt::from((2 * d - 1) as i64).pow(len as u32 - 1)
                    };
                    let w = walk_count_radial(len, p, d);
                    total += count_at_len * (&w * &w);
                }
                assert_eq!(total, walk_count_radial(0, 2 * p, d), "d={d} p={p}");
            }
        }
    }

    #[test]
    fn tau_moments() {
        let a = NcPolynomial::adjacency(2);
        assert_eq!(tau_moment(&a, 0, 1 << 20).unwrap(), GaussRational::one());
        assert_eq!(tau_moment(&a, 2, 1 << 20).unwrap(), GaussRational::from_int(4));
        assert_eq!(tau_moment(&a, 4, 1 << 20).unwrap(), GaussRational::from_int(28));
        assert_eq!(tau_moment(&a, 3, 1 << 20).unwrap(), GaussRational::zero());
    }

    #[test]
    fn norm_estimates() {
        let a = NcPolynomial::adjacency(2);
        let est = limit_norm_estimate(&a, 1, 1 << 20).unwrap();
        assert!((est.lower - 2.0).abs() < 1e-12);
        let est = limit_norm_estimate(&a, 10, 1 << 22).unwrap();
        assert!(est.lower <= kesten_norm(2) + 1e-9);
        assert!(est.lower > 2.8);
        let id = NcPolynomial::identity(2, 1);
        let est = limit_norm_estimate(&id, 4, 1 << 10).unwrap();
        assert!((est.lower - 1.0).abs() < 1e-12);
        assert!(est.moments.iter().all(|m| m.is_one()));
    }

    #[test]
    fn budget_guard() {
        // The standard adjacency takes the radial fast path, so degrade it to
        // force the vector route under a tiny support budget.
        let b = NcPolynomial::adjacency(3).add(&NcPolynomial::identity(3, 1)).unwrap();
        let err = tau_moment(&b, 10, 100).unwrap_err();
        assert!(matches!(err, crate::error::Error::Budget(_)));
    }

    #[test]
    fn first_visit_identity_small() {
        // RHS of the matrix-element identity equals the first-visit indicator
        // for all words of length ≤ 4 over d = 2 (identity letters included).
        let targets: Vec<ReducedWord> =
            vec![rw("a", 2), rw("B", 2), rw("ab", 2), rw("aba", 2)];
        let mut stack: Vec<Vec<u16>> = vec![Vec::new()];
        for _ in 0..4 {
            let mut next = Vec::new();
            for base in &stack {
                for l in 0..=4u16 {
                    let mut b = base.clone();
                    b.push(l);
                    next.push(b);
                }
            }
            for letters in &next {
                let w = Word::new(2, letters.clone()).unwrap();
                for v in &targets {
                    let lhs = i64::from(is_first_visit(&w, v));
                    assert_eq!(lhs, first_visit_matrix_element(&w, v), "w={w} v={v}");
                }
            }
            stack = next;
        }
    }

    #[test]
    fn moment_method_vs_word_expansion() {
        // τ(X^p) equals the empty-word coefficient of the trace expansion.
        let s1 = NcPolynomial::generator(2, 1).unwrap();
        let s2 = NcPolynomial::generator(2, 2).unwrap();
        let x = s1.add(&s1.adjoint()).unwrap().add(&s2).unwrap().add(&s2.adjoint()).unwrap();
        for p in 0..=5usize {
            let m = tau_moment(&x, p, 1 << 22).unwrap();
            let exp =
                crate::nc_poly::trace_word_expansion(&x, &ScalarPolynomial::monomial(p), 1 << 22)
                    .unwrap();
            let empty = exp
                .iter()
                .find(|(_, w)| w.is_identity())
                .map(|(c, _)| c.clone())
                .unwrap_or_else(GaussRational::zero);
            assert_eq!(m, empty, "p = {p}");
        }
    }
}
