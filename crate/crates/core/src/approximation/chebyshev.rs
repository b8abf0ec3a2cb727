//! Exact Chebyshev expansions h(x) = Σ a_j T_j(x/K) on [−K, K].

use crate::error::{precondition, Result};
use crate::gauss::rational_to_f64;
use crate::nc_poly::ScalarPolynomial;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Chebyshev-of-the-first-kind expansion of a polynomial on [−K, K].
#[derive(Clone, Debug, PartialEq)]
pub struct ChebyshevExpansion {
    /// Half-width of the domain, exact.
    pub k: BigRational,
    /// a_0..a_q, exact rationals.
    pub coeffs: Vec<BigRational>,
}

impl ChebyshevExpansion {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }

    pub fn k_f64(&self) -> f64 {
        rational_to_f64(&self.k)
    }

    /// Clenshaw evaluation at x ∈ [−K, K].
    pub fn eval_f64(&self, x: f64) -> f64 {
        let t = x / self.k_f64();
        let a = self.coeffs_f64();
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in a.iter().skip(1).rev() {
            let b0 = 2.0 * t * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        a.first().copied().unwrap_or(0.0) + t * b1 - b2
    }

    /// Exact reconstruction back to the monomial basis (round-trip witness).
    pub fn reconstruct_exact(&self) -> ScalarPolynomial {
        let q = self.degree();
        let tables = chebyshev_monomial_table(q);
        let mut mono = vec![BigRational::zero(); q + 1];
        for (j, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (i, t) in tables[j].iter().enumerate() {
                if !t.is_zero() {
                    mono[i] += a * t;
                }
            }
        }
        // Undo the x = K·t substitution: coefficient of x^i is mono_i / K^i.
        let mut kpow = BigRational::one();
        for (i, c) in mono.iter_mut().enumerate() {
            if i > 0 {
                kpow *= &self.k;
            }
            *c /= kpow.clone();
        }
        ScalarPolynomial::from_coeffs(mono)
    }
}

/// Monomial coefficients of T_0..T_q via the three-term recurrence.
fn chebyshev_monomial_table(q: usize) -> Vec<Vec<BigRational>> {
    let mut table: Vec<Vec<BigRational>> = Vec::with_capacity(q + 1);
    table.push(vec![BigRational::one()]);
    if q >= 1 {
        table.push(vec![BigRational::zero(), BigRational::one()]);
    }
    let two = BigRational::from_integer(BigInt::from(2));
    for n in 2..=q {
        let mut next = vec![BigRational::zero(); n + 1];
        for (i, c) in table[n - 1].iter().enumerate() {
            next[i + 1] += c * &two;
        }
        for (i, c) in table[n - 2].iter().enumerate() {
            next[i] -= c;
        }
        table.push(next);
    }
    table
}

/// Exact change of basis: h(x) = Σ a_j T_j(x/K). Triangular elimination from
/// the top degree down using the leading coefficient 2^{j−1} of T_j.
pub fn cheb_expand(h: &ScalarPolynomial, k: &BigRational) -> Result<ChebyshevExpansion> {
    if !k.is_positive() {
        return Err(precondition("Chebyshev domain half-width K must be > 0"));
    }
    let q = h.degree();
    // Substitute x = K·t: p(t) = h(Kt).
    let mut p: Vec<BigRational> = Vec::with_capacity(q + 1);
    let mut kpow = BigRational::one();
    for i in 0..=q {
        p.push(h.coeff(i) * &kpow);
        kpow *= k;
    }
    let table = chebyshev_monomial_table(q);
    let mut a = vec![BigRational::zero(); q + 1];
    for j in (0..=q).rev() {
        let lead = table[j].last().unwrap();
        let c = &p[j] / lead;
        if !c.is_zero() {
            a[j] = c.clone();
            for (i, t) in table[j].iter().enumerate() {
                let delta = &c * t;
                p[i] -= delta;
            }
        }
    }
    Ok(ChebyshevExpansion { k: k.clone(), coeffs: a })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn square_and_cube() {
        // x² on [−K,K]: a0 = K²/2, a2 = K²/2.
        let k = rat(3, 1);
        let e = cheb_expand(&ScalarPolynomial::monomial(2), &k).unwrap();
        assert_eq!(e.coeffs, vec![rat(9, 2), rat(0, 1), rat(9, 2)]);
        // x³: a1 = 3K³/4, a3 = K³/4.
        let e = cheb_expand(&ScalarPolynomial::monomial(3), &k).unwrap();
        assert_eq!(e.coeffs, vec![rat(0, 1), rat(81, 4), rat(0, 1), rat(27, 4)]);
    }

    #[test]
    fn tq_maps_to_unit_vector() {
        // h = T₃(x/K) must expand to a₃ = 1 and nothing else.
        let k = rat(2, 1);
        // T₃(t) = 4t³ − 3t with t = x/2: h(x) = x³/2 − 3x/2.
        let h = ScalarPolynomial::from_coeffs(vec![rat(0, 1), rat(-3, 2), rat(0, 1), rat(1, 2)]);
        let e = cheb_expand(&h, &k).unwrap();
        assert_eq!(e.coeffs, vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn exact_round_trip() {
        let h = ScalarPolynomial::from_coeffs(vec![
            rat(1, 3),
            rat(-2, 1),
            rat(0, 1),
            rat(5, 7),
            rat(-1, 2),
        ]);
        let e = cheb_expand(&h, &rat(5, 2)).unwrap();
        assert_eq!(e.reconstruct_exact(), h);
    }

    #[test]
    fn k_must_be_positive() {
        assert!(cheb_expand(&ScalarPolynomial::monomial(1), &rat(0, 1)).is_err());
        assert!(cheb_expand(&ScalarPolynomial::monomial(1), &rat(-1, 1)).is_err());
    }

    #[test]
    fn clenshaw_matches_direct() {
        let h = ScalarPolynomial::from_ints(&[2, -1, 0, 3, 4, -2]);
        let k = rat(4, 1);
        let e = cheb_expand(&h, &k).unwrap();
        for i in 0..=40 {
            let x = -4.0 + 8.0 * (i as f64) / 40.0;
            assert!((e.eval_f64(x) - h.eval_f64(x)).abs() < 1e-9, "x = {x}");
        }
    }
}
