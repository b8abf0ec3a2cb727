//! Exact univariate polynomials and rational functions over the rationals,
//! in the variable x = 1/N. Provides the arithmetic behind symbolic expected
//! traces: assembly over a common factored denominator, gcd reduction, Taylor
//! coefficients at x = 0, and exact evaluation.

use crate::error::{internal, precondition, Result};
use crate::gauss::rational_to_f64;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Dense univariate polynomial with exact rational coefficients.
/// Invariant: no trailing zero coefficients (the zero polynomial is empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::from_coeffs(vec![BigRational::one()])
    }

    pub fn x() -> Self {
        QPoly::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::from_coeffs(vec![c])
    }

    /// Build from low-to-high coefficients, trimming trailing zeros.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = QPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        QPoly::from_coeffs(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rational_to_f64(c);
        }
        acc
    }

    pub fn add(&self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        QPoly::from_coeffs(out)
    }

    pub fn sub(&self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        QPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> QPoly {
        QPoly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul_xpow(&self, k: usize) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); k];
        out.extend(self.coeffs.iter().cloned());
        QPoly::from_coeffs(out)
    }

    pub fn derivative(&self) -> QPoly {
        if self.coeffs.len() <= 1 {
            return QPoly::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect();
        QPoly::from_coeffs(out)
    }

    /// Euclidean division; panics never, errors if rhs is zero.
    pub fn div_rem(&self, rhs: &QPoly) -> Result<(QPoly, QPoly)> {
        if rhs.is_zero() {
            return Err(precondition("polynomial division by zero"));
        }
        let mut rem = self.coeffs.clone();
        let dr = rhs.degree();
        let lead = rhs.coeffs.last().unwrap().clone();
        if rem.len() <= dr && !(rem.len() == dr + 1) {
            return Ok((QPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(dr)];
        while rem.len() > dr || (rem.len() == dr + 1 && dr == 0) {
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
            if rem.len() < dr + 1 {
                break;
            }
            let k = rem.len() - 1 - dr;
            let factor = rem.last().unwrap() / &lead;
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let idx = k + j;
                let delta = &factor * b;
                rem[idx] -= delta;
            }
            quot[k] = factor;
            // The leading entry is now exactly zero.
            rem.pop();
        }
        Ok((QPoly::from_coeffs(quot), QPoly::from_coeffs(rem)))
    }

    /// Exact division: Some(q) iff rhs divides self.
    pub fn div_exact(&self, rhs: &QPoly) -> Option<QPoly> {
        let (q, r) = self.div_rem(rhs).ok()?;
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, rhs: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.coeffs.last().unwrap().clone();
        a.scale(&(BigRational::one() / lead))
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// A denominator kept as a product of linear factors Π_j (1 − j·x)^{m_j};
/// j = 0 never occurs. This is the shape every expected-trace denominator has.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactoredDen {
    /// j → multiplicity, all multiplicities ≥ 1.
    pub factors: BTreeMap<u64, u32>,
}

impl FactoredDen {
    pub fn one() -> Self {
        FactoredDen::default()
    }

    pub fn expand(&self) -> QPoly {
        let mut p = QPoly::one();
        for (&j, &m) in &self.factors {
            let lin = QPoly::from_coeffs(vec![
                BigRational::one(),
                -BigRational::from_integer(BigInt::from(j)),
            ]);
            for _ in 0..m {
                p = p.mul(&lin);
            }
        }
        p
    }

    pub fn degree(&self) -> u64 {
        self.factors.values().map(|&m| m as u64).sum()
    }

    /// True if every factor of `self` appears in `other` with at least the
    /// same multiplicity.
    pub fn divides(&self, other: &FactoredDen) -> bool {
        self.factors
            .iter()
            .all(|(j, m)| other.factors.get(j).is_some_and(|m2| m2 >= m))
    }
}

/// Exact rational function of one variable with rational coefficients.
/// The canonical reduced form is gcd-free with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunctionQ {
    num: QPoly,
    den: QPoly,
}

impl RationalFunctionQ {
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(precondition("rational function with zero denominator"));
        }
        let mut rf = RationalFunctionQ { num, den };
        rf.reduce();
        Ok(rf)
    }

    pub fn from_poly(num: QPoly) -> Self {
        RationalFunctionQ { num, den: QPoly::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(QPoly::zero())
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = QPoly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree() > 0 {
            self.num = self.num.div_exact(&g).expect("gcd divides");
            self.den = self.den.div_exact(&g).expect("gcd divides");
        }
        // Normalize so the denominator has constant term 1 (keeping products
        // of (1−jx) factors in that exact shape); fall back to a monic
        // leading coefficient when the denominator vanishes at 0.
        let c0 = self.den.coeff(0);
        let scale = if c0.is_zero() { self.den.coeffs.last().unwrap().clone() } else { c0 };
        if !scale.is_one() {
            let inv = BigRational::one() / scale;
            self.den = self.den.scale(&inv);
            self.num = self.num.scale(&inv);
        }
    }

    pub fn numerator(&self) -> &QPoly {
        &self.num
    }

    pub fn denominator(&self) -> &QPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == 0
    }

    pub fn add(&self, rhs: &RationalFunctionQ) -> RationalFunctionQ {
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        RationalFunctionQ::new(num, den).expect("nonzero denominator product")
    }

    pub fn sub(&self, rhs: &RationalFunctionQ) -> RationalFunctionQ {
        let num = self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        RationalFunctionQ::new(num, den).expect("nonzero denominator product")
    }

    pub fn scale(&self, c: &BigRational) -> RationalFunctionQ {
        RationalFunctionQ { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Exact evaluation; errors at a pole.
    pub fn eval(&self, x: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(precondition(format!("evaluation at pole x = {x}")));
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    /// m-th derivative via the quotient rule, exact.
    pub fn derivative(&self) -> RationalFunctionQ {
        let num = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        let den = self.den.mul(&self.den);
        RationalFunctionQ::new(num, den).expect("square of nonzero denominator")
    }

    /// Taylor coefficients ν₀..ν_m at x = 0, by exact power-series division.
    /// Errors if the denominator vanishes at 0 (cannot occur for valid
    /// expected-trace functions; signals an upstream bug).
    pub fn taylor_at_zero(&self, order: usize) -> Result<Vec<BigRational>> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(internal("pole at x = 0 in Taylor expansion"));
        }
        // Invert the denominator as a power series to the requested order.
        let mut inv = Vec::with_capacity(order + 1);
        inv.push(BigRational::one() / &d0);
        for n in 1..=order {
            let mut s = BigRational::zero();
            for k in 1..=n {
                s += self.den.coeff(k) * &inv[n - k];
            }
            inv.push(-s / &d0);
        }
        let mut out = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut s = BigRational::zero();
            for k in 0..=n {
                s += self.num.coeff(k) * &inv[n - k];
            }
            out.push(s);
        }
        Ok(out)
    }

    /// Factor the reduced denominator as Π (1 − jx)^{m_j}. Returns None when
    /// the denominator is not a product of such factors (never the case for
    /// expected-trace functions).
    pub fn denominator_factors(&self) -> Option<FactoredDen> {
        let mut rem = self.den.clone();
        let mut factors = BTreeMap::new();
        let mut j = 1u64;
        // Bounded scan: each factor (1 - jx) has root 1/j; reduced expected
        // traces only carry j up to the word length.
        while rem.degree() > 0 && j <= 10_000 {
            let lin = QPoly::from_coeffs(vec![
                BigRational::one(),
                -BigRational::from_integer(BigInt::from(j)),
            ]);
            while let Some(q) = rem.div_exact(&lin) {
                *factors.entry(j).or_insert(0u32) += 1;
                rem = q;
                if rem.degree() == 0 {
                    break;
                }
            }
            j += 1;
        }
        if rem.degree() == 0 {
            Some(FactoredDen { factors })
        } else {
            None
        }
    }
}

impl fmt::Display for RationalFunctionQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// The falling factorial (N)_k = N(N−1)⋯(N−k+1) written in x = 1/N:
/// (N)_k = N^k · Π_{l=1}^{k−1}(1 − l·x). Returns the product part only.
pub fn falling_factorial_poly(k: usize) -> QPoly {
    let mut p = QPoly::one();
    for l in 1..k {
        p = p.mul(&QPoly::from_coeffs(vec![
            BigRational::one(),
            -BigRational::from_integer(BigInt::from(l)),
        ]));
    }
    p
}

/// Exact (N)_k as a rational number for a concrete N ≥ 0.
pub fn falling_factorial_value(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for l in 0..k {
        if l >= n {
            return BigInt::zero();
        }
        acc *= BigInt::from(n - l);
    }
    acc
}
