//! Gaussian rationals: complex numbers with arbitrary-precision rational real
//! and imaginary parts. These are the exact coefficient field for
//! noncommutative polynomials and word-expansion scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// A complex number `re + im·i` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn from_rational(re: BigRational) -> Self {
        GaussRational { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        GaussRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Squared modulus |z|², an exact nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs_f64(&self) -> f64 {
        rational_to_f64(&self.norm_sqr()).sqrt()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

impl Add for &GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: &GaussRational) -> GaussRational {
        GaussRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl AddAssign<&GaussRational> for GaussRational {
    fn add_assign(&mut self, rhs: &GaussRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for &GaussRational {
    type Output = GaussRational;
    fn sub(self, rhs: &GaussRational) -> GaussRational {
        GaussRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational { re: -self.re, im: -self.im }
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// Convert a big rational to f64, tolerating magnitudes outside the direct
/// BigInt→f64 range by cancelling the common binary scale first.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64_checked(), r.denom().to_f64_checked()) {
        if d != 0.0 && n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    let nbits = r.numer().bits() as i64;
    let dbits = r.denom().bits() as i64;
    let shift = (nbits.max(dbits) - 900).max(0) as u64;
    let n = (r.numer() >> shift).to_f64_checked().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64_checked().unwrap_or(f64::NAN);
    n / d
}

trait ToF64Checked {
    fn to_f64_checked(&self) -> Option<f64>;
}

impl ToF64Checked for BigInt {
    fn to_f64_checked(&self) -> Option<f64> {
        num_traits::ToPrimitive::to_f64(self)
    }
}

/// Parse an exact rational from decimal text: `p`, `p/q`, or a finite decimal
/// like `-0.25` (decimals are exact rationals, so nothing is lost).
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let neg = int_part.trim_start().starts_with('-');
        let int_part = if int_part == "-" || int_part.is_empty() { "0" } else { int_part };
        let i: BigInt = int_part.parse().ok()?;
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let f: BigInt = frac_part.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac_part.len());
        let frac = BigRational::new(f, scale);
        let whole = BigRational::from_integer(i.abs());
        let v = whole + frac;
        return Some(if neg { -v } else { v });
    }
    let n: BigInt = t.parse().ok()?;
    Some(BigRational::from_integer(n))
}

/// Parse a Gaussian rational: `3`, `-1/2`, `i`, `-2i`, `1/2+3i`, `1-0.5i`.
pub fn parse_gauss(text: &str) -> Option<GaussRational> {
    let t = text.trim().replace(' ', "");
    if t.is_empty() {
        return None;
    }
    // Split a trailing imaginary part off at the last +/- that is not a
    // leading sign and not inside a fraction/decimal (those never contain signs).
    if let Some(stripped) = t.strip_suffix('i') {
        let mut split_at = None;
        for (idx, ch) in stripped.char_indices().skip(1) {
            if ch == '+' || ch == '-' {
                split_at = Some(idx);
            }
        }
        let (re_text, im_text) = match split_at {
            Some(idx) => (&stripped[..idx], &stripped[idx..]),
            None => ("0", stripped),
        };
        let im_text = match im_text {
            "" | "+" => "1".to_string(),
            "-" => "-1".to_string(),
            other => other.to_string(),
        };
        let re = parse_rational(if re_text.is_empty() { "0" } else { re_text })?;
        let im = parse_rational(&im_text)?;
        return Some(GaussRational::new(re, im));
    }
    parse_rational(&t).map(GaussRational::from_rational)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3").unwrap(), rat(3, 1));
        assert_eq!(parse_rational("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_none());

        assert_eq!(parse_gauss("i").unwrap(), GaussRational::i());
        assert_eq!(parse_gauss("-2i").unwrap(), GaussRational::new(rat(0, 1), rat(-2, 1)));
        assert_eq!(parse_gauss("1/2+3i").unwrap(), GaussRational::new(rat(1, 2), rat(3, 1)));
        assert_eq!(parse_gauss("1-0.5i").unwrap(), GaussRational::new(rat(1, 1), rat(-1, 2)));
    }

    #[test]
    fn arithmetic_and_conj() {
        let z = GaussRational::new(rat(1, 2), rat(3, 4));
        let w = &z * &z.conj();
        assert!(w.is_real());
        assert_eq!(w.re, rat(13, 16));
    }

    #[test]
    fn big_to_f64() {
        let huge = BigRational::from_integer(BigInt::from(10).pow(400u32));
        let r = rational_to_f64(&(huge.clone() / (huge * BigRational::from_integer(BigInt::from(2)))));
        assert!((r - 0.5).abs() < 1e-12);
    }
}
