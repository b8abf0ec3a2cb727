//! Noncommutative polynomials P ∈ M_D(C) ⊗ C⟨s, s*⟩ with exact Gaussian
//! rational coefficients, and real scalar polynomials h used as test functions.
//!
//! Words of the generators index the terms; the canonical form merges terms
//! whose words are equal after free reduction. Decimal coefficient input is
//! accepted (decimals are exact rationals) but marks the polynomial as
//! approximate, which downstream code uses to skip exact-equality assertions.

use crate::error::{budget, precondition, Result};
use crate::free_group::{reduce, ReducedWord, Word};
use crate::gauss::{parse_gauss, rational_to_f64, GaussRational};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Dense D×D matrix over the Gaussian rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffMatrix {
    dim: usize,
    entries: Vec<GaussRational>,
}

impl CoeffMatrix {
    pub fn zero(dim: usize) -> Self {
        CoeffMatrix { dim, entries: vec![GaussRational::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = GaussRational::one();
        }
        m
    }

    pub fn scalar(dim: usize, c: GaussRational) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = c.clone();
        }
        m
    }

    pub fn from_entries(dim: usize, entries: Vec<GaussRational>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(precondition(format!(
                "matrix needs {} entries for dimension {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(CoeffMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussRational {
        &self.entries[i * self.dim + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|e| e.is_real())
    }

    pub fn add(&self, rhs: &CoeffMatrix) -> CoeffMatrix {
        debug_assert_eq!(self.dim, rhs.dim);
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect();
        CoeffMatrix { dim: self.dim, entries }
    }

    pub fn mul(&self, rhs: &CoeffMatrix) -> CoeffMatrix {
        debug_assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = CoeffMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = a * rhs.get(k, j);
                    out.entries[i * n + j] += &prod;
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussRational) -> CoeffMatrix {
        let entries = self.entries.iter().map(|e| e * c).collect();
        CoeffMatrix { dim: self.dim, entries }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CoeffMatrix {
        let n = self.dim;
        let mut out = CoeffMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.get(i, j).conj();
            }
        }
        out
    }

    /// Unnormalized trace.
    pub fn trace(&self) -> GaussRational {
        let mut t = GaussRational::zero();
        for i in 0..self.dim {
            t += self.get(i, i);
        }
        t
    }

    /// Frobenius norm, an upper bound on the operator norm.
    pub fn frobenius_f64(&self) -> f64 {
        let mut s = BigRational::zero();
        for e in &self.entries {
            s += e.norm_sqr();
        }
        rational_to_f64(&s).sqrt()
    }
}

/// A noncommutative polynomial Σ_w A_w ⊗ w in canonical (merged, reduced) form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcPolynomial {
    d: usize,
    dim: usize,
    approx: bool,
    terms: BTreeMap<ReducedWord, CoeffMatrix>,
}

impl NcPolynomial {
    pub fn zero(d: usize, dim: usize) -> Self {
        NcPolynomial { d, dim, approx: false, terms: BTreeMap::new() }
    }

    pub fn identity(d: usize, dim: usize) -> Self {
        let mut p = Self::zero(d, dim);
        p.add_term(&Word::new(d, vec![]).unwrap(), CoeffMatrix::identity(dim));
        p
    }

    /// The generator s_i (1-based), scalar coefficients.
    pub fn generator(d: usize, i: usize) -> Result<Self> {
        if i == 0 || i > 2 * d {
            return Err(precondition(format!("generator index {i} out of range for d = {d}")));
        }
        let mut p = Self::zero(d, 1);
        p.add_term(&Word::new(d, vec![i as u16])?, CoeffMatrix::identity(1));
        Ok(p)
    }

    /// The adjacency polynomial Σ_i (s_i + s_i*) of the 2d-regular model.
    pub fn adjacency(d: usize) -> Self {
        let mut p = Self::zero(d, 1);
        for i in 1..=(2 * d) {
            p.add_term(&Word::new(d, vec![i as u16]).unwrap(), CoeffMatrix::identity(1));
        }
        p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_approx(&self) -> bool {
        self.approx
    }

    pub fn set_approx(&mut self, approx: bool) {
        self.approx = approx;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ReducedWord, &CoeffMatrix)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Max reduced word length over the terms.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Add A ⊗ w, merging with any existing term for the same reduced word.
    pub fn add_term(&mut self, word: &Word, coeff: CoeffMatrix) {
        debug_assert_eq!(coeff.dim, self.dim);
        let key = reduce(word);
        let entry = self.terms.entry(key.clone()).or_insert_with(|| CoeffMatrix::zero(self.dim));
        *entry = entry.add(&coeff);
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, rhs: &NcPolynomial) -> Result<NcPolynomial> {
        self.check_compatible(rhs)?;
        let mut out = self.clone();
        out.approx = self.approx || rhs.approx;
        for (w, m) in &rhs.terms {
            out.add_term(&w.as_word(), m.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussRational) -> NcPolynomial {
        let mut out = NcPolynomial::zero(self.d, self.dim);
        out.approx = self.approx;
        if c.is_zero() {
            return out;
        }
        for (w, m) in &self.terms {
            out.terms.insert(w.clone(), m.scale(c));
        }
        out
    }

    fn check_compatible(&self, rhs: &NcPolynomial) -> Result<()> {
        if self.d != rhs.d || self.dim != rhs.dim {
            return Err(precondition(format!(
                "incompatible polynomials: (d={}, D={}) vs (d={}, D={})",
                self.d, self.dim, rhs.d, rhs.dim
            )));
        }
        Ok(())
    }

    /// Distributive product; words concatenate and reduce.
    pub fn multiply(&self, rhs: &NcPolynomial) -> Result<NcPolynomial> {
        self.check_compatible(rhs)?;
        let mut out = NcPolynomial::zero(self.d, self.dim);
        out.approx = self.approx || rhs.approx;
        for (w1, m1) in &self.terms {
            for (w2, m2) in &rhs.terms {
                let w = w1.concat(w2);
                let m = m1.mul(m2);
                if m.is_zero() {
                    continue;
                }
                let entry =
                    out.terms.entry(w.clone()).or_insert_with(|| CoeffMatrix::zero(self.dim));
                *entry = entry.add(&m);
                if entry.is_zero() {
                    out.terms.remove(&w);
                }
            }
        }
        Ok(out)
    }

    /// Adjoint: coefficients conjugate-transposed, words inverted.
    pub fn adjoint(&self) -> NcPolynomial {
        let mut out = NcPolynomial::zero(self.d, self.dim);
        out.approx = self.approx;
        for (w, m) in &self.terms {
            out.terms.insert(w.inverse(), m.adjoint());
        }
        out
    }

    pub fn is_self_adjoint(&self) -> bool {
        *self == self.adjoint()
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|m| m.is_real())
    }

    /// True iff this is exactly Σ_i (s_i + s_i*) with scalar coefficient 1.
    pub fn is_standard_adjacency(&self) -> bool {
        self.dim == 1
            && self.terms.len() == 2 * self.d
            && self.terms.iter().all(|(w, m)| {
                w.len() == 1 && m.entries.len() == 1 && m.entries[0] == GaussRational::one()
            })
    }

    /// Upper bound on ‖P‖ over all unitary substitutions: each word maps to a
    /// unitary, so the sum of coefficient operator norms dominates; Frobenius
    /// norms dominate those.
    pub fn coeff_norm_bound(&self) -> f64 {
        self.terms.values().map(|m| m.frobenius_f64()).sum()
    }
}

impl fmt::Display for NcPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, m) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if self.dim == 1 {
                write!(f, "({})*{}", m.get(0, 0), w)?;
            } else {
                write!(f, "[")?;
                for i in 0..self.dim {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    for j in 0..self.dim {
                        if j > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{}", m.get(i, j))?;
                    }
                }
                write!(f, "]*{}", w)?;
            }
        }
        Ok(())
    }
}

/// Real univariate polynomial h, low-to-high coefficients, trailing zeros
/// trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarPolynomial {
    coeffs: Vec<BigRational>,
}

impl ScalarPolynomial {
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ScalarPolynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    /// x^p
    pub fn monomial(p: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); p + 1];
        coeffs[p] = BigRational::one();
        ScalarPolynomial { coeffs }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// Parse comma-separated coefficients, constant term first: `0,0,1` = x².
    pub fn parse(text: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for part in text.split(',') {
            let c = crate::gauss::parse_rational(part)
                .ok_or_else(|| precondition(format!("invalid coefficient {part:?}")))?;
            coeffs.push(c);
        }
        Ok(Self::from_coeffs(coeffs))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

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

    pub fn derivative(&self) -> ScalarPolynomial {
        if self.coeffs.len() <= 1 {
            return ScalarPolynomial { coeffs: Vec::new() };
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect();
        ScalarPolynomial::from_coeffs(coeffs)
    }

    pub fn add(&self, rhs: &ScalarPolynomial) -> ScalarPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ScalarPolynomial::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }
}

/// Expansion of (tr_D ⊗ id)(h(P)) into words with exact scalar coefficients.
/// Words have length ≤ deg(h)·deg(P); the raw-term count (#terms)^deg(h) must
/// fit in `max_raw_terms`.
pub fn trace_word_expansion(
    p: &NcPolynomial,
    h: &ScalarPolynomial,
    max_raw_terms: u64,
) -> Result<Vec<(GaussRational, ReducedWord)>> {
    let q = h.degree();
    let raw = (p.term_count().max(1) as f64).powi(q as i32);
    if raw > max_raw_terms as f64 {
        return Err(budget(format!(
            "trace_word_expansion would touch ~{raw:.3e} raw words; budget is {max_raw_terms}"
        )));
    }
    let dim = p.dim();
    let d = p.d();
    let mut acc: BTreeMap<ReducedWord, GaussRational> = BTreeMap::new();
    let mut power = NcPolynomial::identity(d, dim);
    let dim_rat = GaussRational::from_rational(BigRational::new(
        BigInt::one(),
        BigInt::from(dim as i64),
    ));
    for pidx in 0..=q {
        let c = h.coeff(pidx);
        if !c.is_zero() {
            let c = GaussRational::from_rational(c);
            for (w, m) in power.terms() {
                let scalar = &(&m.trace() * &dim_rat) * &c;
                if scalar.is_zero() {
                    continue;
                }
                let entry = acc.entry(w.clone()).or_insert_with(GaussRational::zero);
                *entry += &scalar;
            }
        }
        if pidx < q {
            power = power.multiply(p)?;
        }
    }
    Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(w, c)| (c, w)).collect())
}

/// Parse the CLI text form: terms joined by top-level `+`/`-`, each
/// `coeff*word`, `word`, or a bare coefficient (times the identity word).
/// Coefficients: rationals/decimals, `(re+imi)` Gaussian rationals, or
/// row-major matrices `[a,b;c,d]`. `adjacency` is accepted as a shorthand.
pub fn parse_nc_polynomial(text: &str, d: Option<usize>) -> Result<NcPolynomial> {
    let trimmed = text.trim();
    if trimmed.eq_ignore_ascii_case("adjacency") {
        let d = d.ok_or_else(|| precondition("--poly adjacency requires --d"))?;
        return Ok(NcPolynomial::adjacency(d));
    }
    if trimmed.starts_with('{') {
        return parse_nc_polynomial_json(trimmed, d);
    }
    // Split into signed terms at top level.
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    for ch in trimmed.chars() {
        match ch {
            '(' | '[' => {
                depth += 1;
                cur.push(ch);
            }
            ')' | ']' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if cur.trim().is_empty() && ch == '-' {
                    neg = !neg;
                } else if cur.trim().is_empty() {
                    // leading '+'
                } else {
                    terms.push((neg, std::mem::take(&mut cur)));
                    neg = ch == '-';
                }
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        terms.push((neg, cur));
    }
    if terms.is_empty() {
        return Err(precondition("empty polynomial"));
    }

    struct RawTerm {
        negate: bool,
        coeff: Option<CoeffText>,
        word: String,
    }
    enum CoeffText {
        Scalar(String),
        Matrix(Vec<Vec<String>>),
    }

    let mut raw_terms = Vec::new();
    let mut matrix_dim: Option<usize> = None;
    let mut approx = false;
    for (negate, t) in terms {
        let t = t.trim().to_string();
        let (coeff, word) = if let Some((c, w)) = split_top_level_star(&t) {
            (Some(c), w)
        } else if t.starts_with('[') || t.starts_with('(') || t.chars().next().is_some_and(|c| c.is_ascii_digit() && t.chars().all(|c| !c.is_ascii_alphabetic())) {
            (Some(t.clone()), "1".to_string())
        } else {
            (None, t.clone())
        };
        let coeff = match coeff {
            None => None,
            Some(c) => {
                let c = c.trim().to_string();
                if c.contains('.') {
                    approx = true;
                }
                if let Some(inner) = c.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                    let rows: Vec<Vec<String>> = inner
                        .split(';')
                        .map(|row| row.split(',').map(|e| e.trim().to_string()).collect())
                        .collect();
                    let n = rows.len();
                    for row in &rows {
                        if row.len() != n {
                            return Err(precondition(format!("non-square matrix in term {t:?}")));
                        }
                    }
                    match matrix_dim {
                        Some(m) if m != n => {
                            return Err(precondition("matrix coefficients of mixed dimension"))
                        }
                        _ => matrix_dim = Some(n),
                    }
                    Some(CoeffText::Matrix(rows))
                } else {
                    let c = c.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(&c);
                    Some(CoeffText::Scalar(c.to_string()))
                }
            }
        };
        raw_terms.push(RawTerm { negate, coeff, word });
    }

    let dim = matrix_dim.unwrap_or(1);
    // Infer d from all words if not given.
    let mut max_gen = 0usize;
    for t in &raw_terms {
        let w = Word::parse(&t.word, None)?;
        max_gen = max_gen.max(w.d().min(26));
        let _ = w;
    }
    let d = d.unwrap_or(max_gen.max(1));

    let mut poly = NcPolynomial::zero(d, dim);
    poly.approx = approx;
    for t in raw_terms {
        let word = Word::parse(&t.word, Some(d))?;
        let mut m = match t.coeff {
            None => CoeffMatrix::identity(dim),
            Some(CoeffText::Scalar(s)) => {
                let g = parse_gauss(&s)
                    .ok_or_else(|| precondition(format!("invalid coefficient {s:?}")))?;
                CoeffMatrix::scalar(dim, g)
            }
            Some(CoeffText::Matrix(rows)) => {
                let mut entries = Vec::with_capacity(dim * dim);
                for row in rows {
                    for e in row {
                        entries.push(
                            parse_gauss(&e)
                                .ok_or_else(|| precondition(format!("invalid entry {e:?}")))?,
                        );
                    }
                }
                CoeffMatrix::from_entries(dim, entries)?
            }
        };
        if t.negate {
            m = m.scale(&GaussRational::from_int(-1));
        }
        poly.add_term(&word, m);
    }
    Ok(poly)
}

/// JSON input schema for programmatic polynomial construction:
/// `{"d": 2, "terms": [{"word": "ab", "coeff": "1/2"},
///                     {"word": "A", "coeff": [["0","1"],["1","0"]]}]}`
/// Coefficients are Gaussian-rational strings; matrix coefficients are
/// row-major arrays of rows; a missing coeff means 1.
pub fn parse_nc_polynomial_json(text: &str, d: Option<usize>) -> Result<NcPolynomial> {
    #[derive(serde::Deserialize)]
    struct JsonTerm {
        word: String,
        #[serde(default)]
        coeff: Option<serde_json::Value>,
    }
    #[derive(serde::Deserialize)]
    struct JsonPoly {
        #[serde(default)]
        d: Option<usize>,
        terms: Vec<JsonTerm>,
    }
    let doc: JsonPoly = serde_json::from_str(text)
        .map_err(|e| precondition(format!("invalid polynomial JSON: {e}")))?;
    let d = d.or(doc.d);
    // Infer d from words when absent.
    let mut max_gen = 1usize;
    for t in &doc.terms {
        max_gen = max_gen.max(Word::parse(&t.word, None)?.d());
    }
    let d = d.unwrap_or(max_gen);
    // Dimension from the first matrix coefficient, scalars broadcast.
    let mut dim = 1usize;
    for t in &doc.terms {
        if let Some(serde_json::Value::Array(rows)) = &t.coeff {
            dim = rows.len();
            break;
        }
    }
    let mut poly = NcPolynomial::zero(d, dim);
    for t in &doc.terms {
        let word = Word::parse(&t.word, Some(d))?;
        let m = match &t.coeff {
            None => CoeffMatrix::identity(dim),
            Some(serde_json::Value::String(s)) => {
                if s.contains('.') {
                    poly.approx = true;
                }
                let g =
                    parse_gauss(s).ok_or_else(|| precondition(format!("bad coefficient {s:?}")))?;
                CoeffMatrix::scalar(dim, g)
            }
            Some(serde_json::Value::Number(n)) => {
                let g = parse_gauss(&n.to_string())
                    .ok_or_else(|| precondition(format!("bad coefficient {n}")))?;
                if n.is_f64() {
                    poly.approx = true;
                }
                CoeffMatrix::scalar(dim, g)
            }
            Some(serde_json::Value::Array(rows)) => {
                if rows.len() != dim {
                    return Err(precondition("matrix coefficients of mixed dimension"));
                }
                let mut entries = Vec::with_capacity(dim * dim);
                for row in rows {
                    let row = row
                        .as_array()
                        .ok_or_else(|| precondition("matrix rows must be arrays"))?;
                    if row.len() != dim {
                        return Err(precondition("non-square matrix coefficient"));
                    }
                    for e in row {
                        let s = match e {
                            serde_json::Value::String(s) => s.clone(),
                            serde_json::Value::Number(n) => n.to_string(),
                            other => {
                                return Err(precondition(format!("bad matrix entry {other}")))
                            }
                        };
                        if s.contains('.') {
                            poly.approx = true;
                        }
                        entries.push(
                            parse_gauss(&s)
                                .ok_or_else(|| precondition(format!("bad entry {s:?}")))?,
                        );
                    }
                }
                CoeffMatrix::from_entries(dim, entries)?
            }
            Some(other) => {
                return Err(precondition(format!("unsupported coefficient shape {other}")))
            }
        };
        poly.add_term(&word, m);
    }
    Ok(poly)
}

fn split_top_level_star(t: &str) -> Option<(String, String)> {
    let mut depth = 0;
    for (i, ch) in t.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            '*' if depth == 0 => {
                return Some((t[..i].to_string(), t[i + 1..].trim().to_string()));
            }
            _ => {}
        }
    }
    None
}
