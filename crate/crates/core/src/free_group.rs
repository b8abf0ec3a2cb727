//! Words over the free group F_d: reduction, cyclic reduction, proper-power
//! decomposition, divisor counts, and the first-visit relation.
//!
//! Letters are indices in [0, 2d]: 0 is the identity letter, i in [1, d] is
//! the generator g_i, and d+i is g_i⁻¹. Text form: `a`..`z` for generators,
//! `A`..`Z` for inverses, `1` for the identity letter.

use crate::error::{precondition, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

pub type Letter = u16;

/// Inverse of a letter relative to rank d; inverse(0) = 0.
pub fn inverse_letter(letter: Letter, d: usize) -> Letter {
    let d = d as Letter;
    if letter == 0 {
        0
    } else if letter <= d {
        letter + d
    } else {
        letter - d
    }
}

/// A finite word over the letters [0, 2d]; may contain identity letters and
/// cancellable pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    d: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(d: usize, letters: Vec<Letter>) -> Result<Self> {
        if d == 0 {
            return Err(precondition("rank d must be positive"));
        }
        for &l in &letters {
            if l as usize > 2 * d {
                return Err(precondition(format!("letter index {l} exceeds 2d = {}", 2 * d)));
            }
        }
        Ok(Word { d, letters })
    }

    /// Parse from text; `d` is inferred from the largest generator used when
    /// not given explicitly.
    pub fn parse(text: &str, d: Option<usize>) -> Result<Self> {
        let mut gens: Vec<(bool, usize)> = Vec::new();
        let mut max_gen = 0usize;
        for ch in text.chars() {
            if ch.is_whitespace() {
                continue;
            }
            if ch == '1' {
                gens.push((false, 0));
            } else if ch.is_ascii_lowercase() {
                let i = (ch as usize) - ('a' as usize) + 1;
                max_gen = max_gen.max(i);
                gens.push((false, i));
            } else if ch.is_ascii_uppercase() {
                let i = (ch as usize) - ('A' as usize) + 1;
                max_gen = max_gen.max(i);
                gens.push((true, i));
            } else {
                return Err(precondition(format!("invalid character {ch:?} in word")));
            }
        }
        let d = match d {
            Some(d) => {
                if max_gen > d {
                    return Err(precondition(format!(
                        "word uses generator {max_gen} but d = {d}"
                    )));
                }
                d
            }
            None => max_gen.max(1),
        };
        let letters = gens
            .into_iter()
            .map(|(inv, i)| if i == 0 { 0 } else if inv { (i + d) as Letter } else { i as Letter })
            .collect();
        Word::new(d, letters)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// A freely reduced word: no identity letters, no adjacent inverse pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReducedWord {
    d: usize,
    letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn identity(d: usize) -> Self {
        ReducedWord { d, letters: Vec::new() }
    }

    pub fn parse(text: &str, d: Option<usize>) -> Result<Self> {
        let w = Word::parse(text, d)?;
        let r = reduce(&w);
        // Identity letters are stripped (they denote e), anything else must
        // already be reduced.
        let effective = w.letters().iter().filter(|&&l| l != 0).count();
        if r.len() != effective {
            return Err(precondition(format!("word {text:?} is not reduced")));
        }
        Ok(r)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn as_word(&self) -> Word {
        Word { d: self.d, letters: self.letters.clone() }
    }

    pub fn inverse(&self) -> ReducedWord {
        let letters = self.letters.iter().rev().map(|&l| inverse_letter(l, self.d)).collect();
        ReducedWord { d: self.d, letters }
    }

    /// Left multiplication by a single letter, staying reduced.
    pub fn push_left(&mut self, letter: Letter) {
        if letter == 0 {
            return;
        }
        if self.letters.first() == Some(&inverse_letter(letter, self.d)) {
            self.letters.remove(0);
        } else {
            self.letters.insert(0, letter);
        }
    }

    /// Reduced concatenation self · rhs.
    pub fn concat(&self, rhs: &ReducedWord) -> ReducedWord {
        debug_assert_eq!(self.d, rhs.d);
        let mut left = self.letters.clone();
        let mut start = 0usize;
        while let Some(&last) = left.last() {
            match rhs.letters.get(start) {
                Some(&next) if next == inverse_letter(last, self.d) => {
                    left.pop();
                    start += 1;
                }
                _ => break,
            }
        }
        left.extend_from_slice(&rhs.letters[start..]);
        ReducedWord { d: self.d, letters: left }
    }

    pub fn pow(&self, k: u32) -> ReducedWord {
        let mut out = ReducedWord::identity(self.d);
        for _ in 0..k {
            out = out.concat(self);
        }
        out
    }
}

fn format_letters(letters: &[Letter], d: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if letters.is_empty() {
        return write!(f, "1");
    }
    for &l in letters {
        let ch = if l == 0 {
            '1'
        } else if (l as usize) <= d {
            (b'a' + (l as u8) - 1) as char
        } else {
            (b'A' + (l as u8) - (d as u8) - 1) as char
        };
        write!(f, "{ch}")?;
    }
    Ok(())
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_letters(&self.letters, self.d, f)
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_letters(&self.letters, self.d, f)
    }
}

/// Free reduction: strip identity letters, cancel adjacent inverse pairs.
/// Idempotent; the result is the unique reduced form.
pub fn reduce(w: &Word) -> ReducedWord {
    let d = w.d;
    let mut stack: Vec<Letter> = Vec::with_capacity(w.letters.len());
    for &l in &w.letters {
        if l == 0 {
            continue;
        }
        if stack.last() == Some(&inverse_letter(l, d)) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    ReducedWord { d, letters: stack }
}

/// Cyclic reduction: v = conjugator · core · conjugator⁻¹ with the core
/// cyclically reduced. The decomposition is unique.
pub fn cyclic_reduce(v: &ReducedWord) -> (ReducedWord, ReducedWord) {
    let d = v.d;
    let mut lo = 0usize;
    let mut hi = v.letters.len();
    while hi - lo >= 2 && v.letters[hi - 1] == inverse_letter(v.letters[lo], d) {
        lo += 1;
        hi -= 1;
    }
    let conjugator = ReducedWord { d, letters: v.letters[..lo].to_vec() };
    let core = ReducedWord { d, letters: v.letters[lo..hi].to_vec() };
    (conjugator, core)
}

pub fn is_cyclically_reduced(v: &ReducedWord) -> bool {
    match (v.letters.first(), v.letters.last()) {
        (Some(&f), Some(&l)) => l != inverse_letter(f, v.d),
        _ => true,
    }
}

/// Unique decomposition v = base^exponent with the base a non-power.
/// The period search runs over divisors of the core length with direct
/// prefix comparison; word lengths in this toolkit stay small.
pub fn power_decompose(v: &ReducedWord) -> Result<(ReducedWord, u32)> {
    if v.is_identity() {
        return Err(precondition("identity has no power decomposition"));
    }
    let (conj, core) = cyclic_reduce(v);
    let n = core.letters.len();
    for period in 1..=n {
        if n % period != 0 {
            continue;
        }
        let reps = n / period;
        let ok = (period..n).all(|i| core.letters[i] == core.letters[i - period]);
        if ok {
            let base_core = ReducedWord { d: v.d, letters: core.letters[..period].to_vec() };
            let base = conj.concat(&base_core).concat(&conj.inverse());
            return Ok((base, reps as u32));
        }
    }
    unreachable!("period = n always matches");
}

/// True iff v is not a proper power.
pub fn is_non_power(v: &ReducedWord) -> Result<bool> {
    Ok(power_decompose(v)?.1 == 1)
}

/// Allocation-free exponent of the unique decomposition v = base^k for a
/// reduced letter slice; returns 0 for the empty slice. Used in the hot
/// ball-enumeration loops.
pub fn max_power_exponent(letters: &[Letter], d: usize) -> u32 {
    if letters.is_empty() {
        return 0;
    }
    let mut lo = 0usize;
    let mut hi = letters.len();
    while hi - lo >= 2 && letters[hi - 1] == inverse_letter(letters[lo], d) {
        lo += 1;
        hi -= 1;
    }
    let core = &letters[lo..hi];
    let n = core.len();
    for period in 1..=n {
        if !n.is_multiple_of(period) {
            continue;
        }
        if (period..n).all(|i| core[i] == core[i - period]) {
            return (n / period) as u32;
        }
    }
    1
}

/// Number of divisors ω(k).
pub fn divisor_count(k: u64) -> Result<u64> {
    if k == 0 {
        return Err(precondition("divisor count of 0 is undefined"));
    }
    let mut count = 0;
    let mut i = 1;
    while i * i <= k {
        if k.is_multiple_of(i) {
            count += if i * i == k { 1 } else { 2 };
        }
        i += 1;
    }
    Ok(count)
}

/// The first-visit relation: the walk read right to left reaches v for the
/// first time at its endpoint. Equivalently the full product reduces to v and
/// no proper suffix product g_{i_l}···g_{i_k} (l > 1) does.
pub fn is_first_visit(w: &Word, v: &ReducedWord) -> bool {
    debug_assert_eq!(w.d, v.d);
    let mut suffix = ReducedWord::identity(w.d);
    for (pos, &l) in w.letters.iter().enumerate().rev() {
        suffix.push_left(l);
        let is_full = pos == 0;
        if !is_full && suffix == *v {
            return false;
        }
        if is_full {
            return suffix == *v;
        }
    }
    // Empty word: first visit to v iff v = e... but l ranges over 1 < l ≤ k
    // vacuously, so only the full (empty) product counts.
    v.is_identity()
}

/// All reduced words of length exactly `len` over F_d, in lexicographic order.
pub fn reduced_words_of_length(d: usize, len: usize) -> Vec<ReducedWord> {
    let mut out = Vec::new();
    let mut current: Vec<Letter> = Vec::with_capacity(len);
    fn rec(d: usize, len: usize, current: &mut Vec<Letter>, out: &mut Vec<ReducedWord>) {
        if current.len() == len {
            out.push(ReducedWord { d, letters: current.clone() });
            return;
        }
        for l in 1..=(2 * d) as Letter {
            if let Some(&last) = current.last() {
                if l == inverse_letter(last, d) {
                    continue;
                }
            }
            current.push(l);
            rec(d, len, current, out);
            current.pop();
        }
    }
    rec(d, len, &mut current, &mut out);
    out
}
