//! Exact expected traces of words in random permutation matrices as rational
//! functions of x = 1/N, by enumerating coincidence patterns (quotients of the
//! word cycle). Each admissible pattern Γ contributes the falling-factorial
//! ratio (N)_{v_Γ} / Π_j (N)_{e_Γ^j} to the expected fixed-point count; the
//! normalized trace is E[tr_N w(S^N)] = (E[Fix] − 1)/N.
//!
//! The symbolic function f_w/g_q is exact for N ≥ q. Evaluation at a concrete
//! N instead sums the falling factorials at that N, dropping patterns with
//! more blocks than points; that route is exact for every N ≥ 1 and is the
//! one tested against the brute-force oracle at small N.

use crate::error::{budget, internal, precondition, Result};
use crate::free_group::{cyclic_reduce, reduce, Letter, ReducedWord, Word};
use crate::gauss::GaussRational;
use crate::nc_poly::{trace_word_expansion, NcPolynomial, ScalarPolynomial};
use crate::ratfun::{
    falling_factorial_poly, falling_factorial_value, FactoredDen, QPoly, RationalFunctionQ,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// Default cap on word length for quotient enumeration.
pub const DEFAULT_WORD_CAP: usize = 12;
/// Default cap on raw words touched by a polynomial trace expansion.
pub const DEFAULT_EXPANSION_BUDGET: u64 = 5_000_000;

/// A quotient of the word cycle: a partition of the q positions whose induced
/// edge identifications are admissible (every color a partial injection).
#[derive(Clone, Debug)]
pub struct QuotientGraph {
    /// Position → block, in restricted-growth form.
    pub blocks: Vec<usize>,
    /// Number of blocks v_Γ.
    pub v: usize,
    /// Distinct directed edges per color, as block pairs.
    pub color_edges: Vec<Vec<(usize, usize)>>,
}

impl QuotientGraph {
    /// Distinct color-j edge count e_Γ^j (1-based color).
    pub fn edge_count(&self, color: usize) -> usize {
        self.color_edges[color - 1].len()
    }

    /// Total distinct edge count e_Γ.
    pub fn total_edges(&self) -> usize {
        self.color_edges.iter().map(|e| e.len()).sum()
    }

    /// The structural invariants: partial injections, v ≥ max_j e_j, and
    /// e − v + 1 ≥ 0 (connectivity of the quotient of a cycle).
    pub fn validate(&self) -> Result<()> {
        for edges in &self.color_edges {
            for (i, a) in edges.iter().enumerate() {
                for b in edges.iter().skip(i + 1) {
                    if a.0 == b.0 || a.1 == b.1 {
                        return Err(internal("quotient edges not a partial injection"));
                    }
                }
            }
            if edges.len() > self.v {
                return Err(internal("color edge count exceeds block count"));
            }
        }
        if self.total_edges() + 1 < self.v {
            return Err(internal("quotient of a cycle must be connected"));
        }
        Ok(())
    }
}

/// Directed colored edges of the word cycle. Position t of the walk (read
/// right to left) consumes letter w[q−1−t]; a generator letter g_j gives a
/// color-j edge t → t+1, an inverse letter g_j⁻¹ gives t+1 → t.
fn cycle_edges(letters: &[Letter], d: usize) -> Vec<(usize, usize, usize)> {
    let q = letters.len();
    let mut edges = Vec::with_capacity(q);
    for t in 0..q {
        let l = letters[q - 1 - t] as usize;
        debug_assert!(l != 0);
        let next = (t + 1) % q;
        if l <= d {
            edges.push((t, next, l));
        } else {
            edges.push((next, t, l - d));
        }
    }
    edges
}

/// Enumerate every admissible quotient of the cycle of `w` (identity letters
/// stripped first), invoking `f` once per quotient. Returns the number of
/// quotients yielded.
pub fn enumerate_quotients(
    w: &Word,
    cap: usize,
    mut f: impl FnMut(&QuotientGraph),
) -> Result<usize> {
    let letters: Vec<Letter> = w.letters().iter().copied().filter(|&l| l != 0).collect();
    let q = letters.len();
    if q > cap {
        return Err(budget(format!("word length {q} exceeds the enumeration cap {cap}")));
    }
    if q == 0 {
        return Err(precondition("cannot enumerate quotients of the empty word"));
    }
    let d = w.d();
    let edges = cycle_edges(&letters, d);
    // Edges become checkable once both endpoints are assigned; index them by
    // the larger endpoint.
    let mut edges_by_max: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); q];
    for &(s, t, c) in &edges {
        edges_by_max[s.max(t)].push((s, t, c));
    }

    let mut assign = vec![usize::MAX; q];
    assign[0] = 0;
    // Fully-assigned projected edges per color, as block pairs.
    let mut placed: Vec<Vec<(usize, usize)>> = vec![Vec::new(); d];
    let mut count = 0usize;

    fn admissible(placed: &[(usize, usize)], e: (usize, usize)) -> bool {
        placed.iter().all(|&p| (p.0 == e.0) == (p.1 == e.1))
    }

    struct Ctx<'a, F: FnMut(&QuotientGraph)> {
        q: usize,
        assign: &'a mut Vec<usize>,
        edges_by_max: &'a Vec<Vec<(usize, usize, usize)>>,
        placed: &'a mut Vec<Vec<(usize, usize)>>,
        f: &'a mut F,
        count: &'a mut usize,
    }

    fn rec<F: FnMut(&QuotientGraph)>(ctx: &mut Ctx<'_, F>, t: usize, max_block: usize) {
        if t == ctx.q {
            let v = max_block + 1;
            let mut color_edges: Vec<Vec<(usize, usize)>> =
                ctx.placed.iter().map(|edges| {
                    let mut dedup = edges.clone();
                    dedup.sort_unstable();
                    dedup.dedup();
                    dedup
                }).collect();
            // `placed` may hold duplicates of one projected edge; dedup above.
            let g = QuotientGraph {
                blocks: ctx.assign.clone(),
                v,
                color_edges: std::mem::take(&mut color_edges),
            };
            debug_assert!(g.validate().is_ok());
            (ctx.f)(&g);
            *ctx.count += 1;
            return;
        }
        for b in 0..=max_block + 1 {
            ctx.assign[t] = b;
            let mut placed_here: Vec<usize> = Vec::new();
            let mut ok = true;
            for &(s, dst, c) in &ctx.edges_by_max[t] {
                let e = (ctx.assign[s], ctx.assign[dst]);
                if !admissible(&ctx.placed[c - 1], e) {
                    ok = false;
                    break;
                }
                ctx.placed[c - 1].push(e);
                placed_here.push(c - 1);
            }
            if ok {
                rec(ctx, t + 1, max_block.max(b));
            }
            for &c in placed_here.iter().rev() {
                ctx.placed[c].pop();
            }
        }
        ctx.assign[t] = usize::MAX;
    }

    // Edges whose max endpoint is 0 (loops on a length-1 cycle) must be
    // checked before recursing from t = 1.
    let mut ok0 = true;
    let mut placed0 = Vec::new();
    for &(s, t2, c) in &edges_by_max[0] {
        let e = (assign[s], assign[t2]);
        if !admissible(&placed[c - 1], e) {
            ok0 = false;
            break;
        }
        placed[c - 1].push(e);
        placed0.push(c - 1);
    }
    if ok0 {
        if q == 1 {
            let mut color_edges: Vec<Vec<(usize, usize)>> = placed
                .iter()
                .map(|edges| {
                    let mut dedup = edges.clone();
                    dedup.sort_unstable();
                    dedup.dedup();
                    dedup
                })
                .collect();
            let g = QuotientGraph {
                blocks: assign.clone(),
                v: 1,
                color_edges: std::mem::take(&mut color_edges),
            };
            f(&g);
            count = 1;
        } else {
            let mut ctx = Ctx {
                q,
                assign: &mut assign,
                edges_by_max: &edges_by_max,
                placed: &mut placed,
                f: &mut f,
                count: &mut count,
            };
            rec(&mut ctx, 1, 0);
        }
    }
    Ok(count)
}

/// Aggregated pattern statistics: (v, sorted nonzero per-color edge counts) →
/// multiplicity. Both the symbolic term and the finite-N value of a pattern
/// depend only on these, and they are invariant under the canonicalization
/// group (rotation, inversion, relabeling), so they are safe to cache.
#[derive(Clone, Debug, Default)]
pub struct QuotientStats {
    pub q_core: usize,
    pub d: usize,
    pub patterns: BTreeMap<(usize, Vec<usize>), u64>,
    pub pattern_total: u64,
}

fn quotient_stats(core: &ReducedWord, cap: usize) -> Result<QuotientStats> {
    let mut stats = QuotientStats {
        q_core: core.len(),
        d: core.d(),
        patterns: BTreeMap::new(),
        pattern_total: 0,
    };
    enumerate_quotients(&core.as_word(), cap, |g| {
        let mut counts: Vec<usize> =
            g.color_edges.iter().map(|e| e.len()).filter(|&c| c > 0).collect();
        counts.sort_unstable_by(|a, b| b.cmp(a));
        *stats.patterns.entry((g.v, counts)).or_insert(0) += 1;
        stats.pattern_total += 1;
    })?;
    Ok(stats)
}

/// g_q(x) = Π_{j=1}^{q−1} (1 − jx)^{d_j} with d_j = min(d, ⌊q/(j+1)⌋).
pub fn denominator_gq(q: usize, d: usize) -> FactoredDen {
    let mut factors = BTreeMap::new();
    for j in 1..q {
        let dj = d.min(q / (j + 1));
        if dj > 0 {
            factors.insert(j as u64, dj as u32);
        }
    }
    FactoredDen { factors }
}

/// Degree cap q(1 + log d) on numerator and denominator (natural log).
pub fn degree_bound(q: usize, d: usize) -> f64 {
    q as f64 * (1.0 + (d as f64).ln())
}

/// The symbolic expected trace of a word, with provenance.
#[derive(Clone, Debug)]
pub struct WordExpectation {
    /// The free reduction of the input word.
    pub reduced: ReducedWord,
    /// Length of the input word after stripping identity letters (the stated q).
    pub q: usize,
    pub d: usize,
    /// E[tr_N w(S^N)] as a reduced rational function of x = 1/N; exact for N ≥ q.
    pub psi: RationalFunctionQ,
    /// Linear factors of the reduced denominator (divides g_q).
    pub den_factors: FactoredDen,
}

/// Engine holding the enumeration cap and the canonical-form cache shared
/// across words and polynomial expansions.
pub struct ExpectationEngine {
    cap: usize,
    stats_cache: HashMap<(usize, Vec<Letter>), Arc<QuotientStats>>,
    psi_cache: HashMap<(usize, Vec<Letter>), Arc<WordExpectation>>,
}

impl ExpectationEngine {
    pub fn new() -> Self {
        Self::with_cap(DEFAULT_WORD_CAP)
    }

    pub fn with_cap(cap: usize) -> Self {
        ExpectationEngine { cap, stats_cache: HashMap::new(), psi_cache: HashMap::new() }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn stats_for_core(&mut self, core: &ReducedWord) -> Result<Arc<QuotientStats>> {
        let key = (core.d(), canonical_core_form(core));
        if let Some(s) = self.stats_cache.get(&key) {
            return Ok(s.clone());
        }
        let stats = Arc::new(quotient_stats(core, self.cap)?);
        self.stats_cache.insert(key, stats.clone());
        Ok(stats)
    }

    /// E[tr_N w(S^N)] symbolically. Words reducing to the identity give 1 − x;
    /// otherwise the expectation is computed on the cyclically reduced core
    /// (the trace is conjugation invariant) and asserted against the degree
    /// and denominator bounds of the rational form f_w/g_q.
    pub fn word_expectation(&mut self, w: &Word) -> Result<Arc<WordExpectation>> {
        let stripped: Vec<Letter> = w.letters().iter().copied().filter(|&l| l != 0).collect();
        let q = stripped.len();
        let d = w.d();
        let reduced = reduce(w);
        if reduced.is_identity() {
            let psi = RationalFunctionQ::from_poly(QPoly::from_ints(&[1, -1]));
            return Ok(Arc::new(WordExpectation {
                reduced,
                q,
                d,
                den_factors: FactoredDen::one(),
                psi,
            }));
        }
        let key = (d, canonical_core_form(&cyclic_reduce(&reduced).1));
        if let Some(we) = self.psi_cache.get(&key) {
            // Cached Ψ is for the shared core; q may differ across callers, so
            // rebuild the lightweight wrapper with this word's metadata.
            return Ok(Arc::new(WordExpectation {
                reduced,
                q,
                d,
                psi: we.psi.clone(),
                den_factors: we.den_factors.clone(),
            }));
        }
        let core = cyclic_reduce(&reduced).1;
        let stats = self.stats_for_core(&core)?;
        let psi = assemble_symbolic(&stats)?;
        let den_factors = psi
            .denominator_factors()
            .ok_or_else(|| internal("reduced denominator is not a product of (1−jx) factors"))?;
        // Structural bound: the reduced denominator divides g_{q_core} | g_q.
        let gq = denominator_gq(stats.q_core, d);
        if !den_factors.divides(&gq) {
            return Err(internal(format!(
                "denominator {den_factors:?} does not divide g_q for q = {}",
                stats.q_core
            )));
        }
        let bound = degree_bound(stats.q_core, d) + 1e-9;
        if psi.numerator().degree() as f64 > bound || psi.denominator().degree() as f64 > bound {
            return Err(internal(format!(
                "degree bound violated: deg f = {}, deg g = {}, bound = {bound}",
                psi.numerator().degree(),
                psi.denominator().degree()
            )));
        }
        let we = Arc::new(WordExpectation { reduced, q, d, psi, den_factors });
        self.psi_cache.insert(key, we.clone());
        Ok(we)
    }

    /// Exact E[tr_N w(S^N)] at a concrete N ≥ 1, summing falling factorials
    /// at that N (patterns with v_Γ > N are unrealizable and dropped). Exact
    /// for every N ≥ 1, unlike the symbolic form which needs N ≥ q.
    pub fn expectation_at(&mut self, w: &Word, n: u64) -> Result<BigRational> {
        if n == 0 {
            return Err(precondition("N must be ≥ 1"));
        }
        let reduced = reduce(w);
        let n_rat = BigRational::from_integer(BigInt::from(n));
        if reduced.is_identity() {
            return Ok((n_rat.clone() - BigRational::one()) / n_rat);
        }
        let core = cyclic_reduce(&reduced).1;
        let stats = self.stats_for_core(&core)?;
        let mut fix = BigRational::zero();
        for (&(v, ref e_counts), &mult) in &stats.patterns {
            if v as u64 > n {
                continue;
            }
            let mut term = BigRational::from_integer(falling_factorial_value(n, v as u64));
            for &e in e_counts {
                term /= BigRational::from_integer(falling_factorial_value(n, e as u64));
            }
            fix += term * BigRational::from_integer(BigInt::from(mult));
        }
        Ok((fix - BigRational::one()) / n_rat)
    }

    /// Ψ_h for (tr_D ⊗ tr_N) h(P(S^N, S^N*)): the sum over the trace word
    /// expansion of coefficient × word expectation. Exact for N ≥ q·q₀.
    /// P must be self-adjoint (functional calculus) and the imaginary part of
    /// the assembled sum must cancel exactly.
    pub fn polynomial_trace_expectation(
        &mut self,
        p: &NcPolynomial,
        h: &ScalarPolynomial,
        max_raw_terms: u64,
    ) -> Result<RationalFunctionQ> {
        if !p.is_self_adjoint() {
            return Err(precondition(
                "polynomial_trace_expectation requires a self-adjoint polynomial (use P*P)",
            ));
        }
        let q_total = h.degree() * p.degree();
        if q_total > self.cap {
            return Err(budget(format!(
                "expansion words of length up to {q_total} exceed the word cap {} (Monte Carlo via `weak-probe` covers larger products)",
                self.cap
            )));
        }
        let expansion = trace_word_expansion(p, h, max_raw_terms)?;
        // Group by canonical class so each Ψ is computed once.
        let mut grouped: BTreeMap<Vec<Letter>, (GaussRational, Word)> = BTreeMap::new();
        for (c, w) in expansion {
            let core = cyclic_reduce(&w).1;
            let key = canonical_core_form(&core);
            match grouped.entry(key) {
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    e.get_mut().0 += &c;
                }
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert((c, w.as_word()));
                }
            }
        }
        let mut re_acc = RationalFunctionQ::zero();
        let mut im_acc = RationalFunctionQ::zero();
        for (_, (c, w)) in grouped {
            let we = self.word_expectation(&w)?;
            if !c.re.is_zero() {
                re_acc = re_acc.add(&we.psi.scale(&c.re));
            }
            if !c.im.is_zero() {
                im_acc = im_acc.add(&we.psi.scale(&c.im));
            }
        }
        if !im_acc.numerator().is_zero() {
            if p.is_approx() {
                // Approximate-coefficient pipelines skip the exactness assert.
            } else {
                return Err(internal("imaginary part of a self-adjoint trace did not cancel"));
            }
        }
        Ok(re_acc)
    }

    /// Exact E[tr_DN h(P(S^N,S^N*))] at a concrete N, word by word through
    /// the finite-N evaluator; exact for every N ≥ 1.
    pub fn polynomial_trace_expectation_at(
        &mut self,
        p: &NcPolynomial,
        h: &ScalarPolynomial,
        n: u64,
        max_raw_terms: u64,
    ) -> Result<BigRational> {
        if !p.is_self_adjoint() {
            return Err(precondition(
                "polynomial_trace_expectation requires a self-adjoint polynomial (use P*P)",
            ));
        }
        let expansion = trace_word_expansion(p, h, max_raw_terms)?;
        let mut re = BigRational::zero();
        let mut im = BigRational::zero();
        for (c, w) in expansion {
            let value = self.expectation_at(&w.as_word(), n)?;
            re += &c.re * &value;
            im += &c.im * value;
        }
        if !im.is_zero() && !p.is_approx() {
            return Err(internal("imaginary part of a self-adjoint trace did not cancel"));
        }
        Ok(re)
    }
}

impl Default for ExpectationEngine {
    fn default() -> Self {
        Self::new()
    }
}

/// Assemble f_w/g_q from pattern statistics:
/// E[tr] = −x + Σ_Γ x^{e−v+1} Π_{l<v}(1−lx) Π_i (1−ix)^{d_i−d_i^Γ} / g_q.
fn assemble_symbolic(stats: &QuotientStats) -> Result<RationalFunctionQ> {
    let q = stats.q_core;
    let d = stats.d;
    let gq = denominator_gq(q, d);
    let mut numerator = QPoly::zero();
    for (&(v, ref e_counts), &mult) in &stats.patterns {
        let e_total: usize = e_counts.iter().sum();
        if e_total + 1 < v {
            return Err(internal("disconnected quotient pattern"));
        }
        let mut term = falling_factorial_poly(v).mul_xpow(e_total + 1 - v);
        // d_i^Γ = #{colors with e_j ≥ i+1}; multiply the complement up to g_q.
        for (&j, &dj) in &gq.factors {
            let i = j as usize;
            let d_gamma = e_counts.iter().filter(|&&e| e > i).count();
            if d_gamma > dj as usize {
                return Err(internal("pattern denominator exceeds g_q"));
            }
            let lin = QPoly::from_coeffs(vec![
                BigRational::one(),
                -BigRational::from_integer(BigInt::from(j)),
            ]);
            for _ in 0..(dj as usize - d_gamma) {
                term = term.mul(&lin);
            }
        }
        numerator = numerator.add(&term.scale(&BigRational::from_integer(BigInt::from(mult))));
    }
    let g = gq.expand();
    let f = numerator.sub(&g.mul_xpow(1));
    RationalFunctionQ::new(f, g)
}

/// Canonical form of a cyclically reduced core under rotation, inversion, and
/// signed generator relabeling (all exact symmetries of the expected trace).
/// Relabelings are enumerated only for d ≤ 4; beyond that rotation and
/// inversion still dedupe, just with less sharing.
pub fn canonical_core_form(core: &ReducedWord) -> Vec<Letter> {
    let d = core.d();
    let base = core.letters().to_vec();
    if base.is_empty() {
        return base;
    }
    let mut best: Option<Vec<Letter>> = None;
    let inv: Vec<Letter> = core.inverse().letters().to_vec();
    let relabelings = if d <= 4 { signed_relabelings(d) } else { vec![identity_relabeling(d)] };
    for word in [&base, &inv] {
        for relab in &relabelings {
            let mapped: Vec<Letter> = word.iter().map(|&l| relab[l as usize]).collect();
            for r in 0..mapped.len() {
                let rotated: Vec<Letter> =
                    mapped[r..].iter().chain(mapped[..r].iter()).copied().collect();
                if best.as_ref().is_none_or(|b| rotated < *b) {
                    best = Some(rotated);
                }
            }
        }
    }
    best.unwrap()
}

fn identity_relabeling(d: usize) -> Vec<Letter> {
    (0..=(2 * d) as Letter).collect()
}

/// All maps letter → letter induced by a permutation of the d generators
/// combined with per-generator inversion flips.
fn signed_relabelings(d: usize) -> Vec<Vec<Letter>> {
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut idx: Vec<usize> = (0..d).collect();
    heap_permutations(&mut idx, 0, &mut perms);
    let mut out = Vec::with_capacity(perms.len() << d);
    for perm in &perms {
        for mask in 0..(1u32 << d) {
            let mut map = vec![0 as Letter; 2 * d + 1];
            for g in 1..=d {
                let target = perm[g - 1] + 1;
                let flip = (mask >> (g - 1)) & 1 == 1;
                let (fwd, bwd) =
                    if flip { ((target + d) as Letter, target as Letter) } else { (target as Letter, (target + d) as Letter) };
                map[g] = fwd;
                map[g + d] = bwd;
            }
            out.push(map);
        }
    }
    out
}

fn heap_permutations(arr: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == arr.len() {
        out.push(arr.clone());
        return;
    }
    for i in k..arr.len() {
        arr.swap(k, i);
        heap_permutations(arr, k + 1, out);
        arr.swap(k, i);
    }
}

/// Ground-truth oracle: the exact average of tr_N w(S^N) over all permutation
/// tuples, enumerated over the generators the word actually uses. Guarded to
/// desk scale.
pub fn brute_force_expectation(w: &Word, n: u64) -> Result<BigRational> {
    if n == 0 {
        return Err(precondition("N must be ≥ 1"));
    }
    if n > 8 {
        return Err(budget(format!("brute force caps at N = 8, got {n}")));
    }
    let d = w.d();
    let mut used: Vec<usize> = Vec::new();
    for &l in w.letters() {
        if l == 0 {
            continue;
        }
        let g = if (l as usize) <= d { l as usize } else { l as usize - d };
        if !used.contains(&g) {
            used.push(g);
        }
    }
    used.sort_unstable();
    let n_usize = n as usize;
    let perms = all_permutations(n_usize);
    let tuple_count = (perms.len() as f64).powi(used.len() as i32);
    if tuple_count > 2.0e9 {
        return Err(budget(format!(
            "brute force would enumerate {tuple_count:.3e} permutation tuples"
        )));
    }

    // Odometer over tuples of permutation indices, one per used generator.
    let mut indices = vec![0usize; used.len()];
    let mut sum_fix: u64 = 0;
    let mut tuples: u64 = 0;
    let letters = w.letters();
    loop {
        // Walk each start point through the word, rightmost letter first.
        let mut fix = 0u64;
        for start in 0..n_usize {
            let mut x = start;
            for &l in letters.iter().rev() {
                if l == 0 {
                    continue;
                }
                let (g, inv) =
                    if (l as usize) <= d { (l as usize, false) } else { (l as usize - d, true) };
                let which = used.iter().position(|&u| u == g).unwrap();
                let sigma = &perms[indices[which]];
                x = if inv {
                    sigma.iter().position(|&y| y == x).unwrap()
                } else {
                    sigma[x]
                };
            }
            if x == start {
                fix += 1;
            }
        }
        sum_fix += fix;
        tuples += 1;
        // Advance the odometer.
        let mut pos = 0;
        loop {
            if pos == indices.len() {
                let total = BigRational::new(
                    BigInt::from(sum_fix) - BigInt::from(tuples),
                    BigInt::from(tuples) * BigInt::from(n),
                );
                return Ok(total);
            }
            indices[pos] += 1;
            if indices[pos] < perms.len() {
                break;
            }
            indices[pos] = 0;
            pos += 1;
        }
    }
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut arr: Vec<usize> = (0..n).collect();
    fn rec(arr: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == arr.len() {
            out.push(arr.clone());
            return;
        }
        for i in k..arr.len() {
            arr.swap(k, i);
            rec(arr, k + 1, out);
            arr.swap(k, i);
        }
    }
    rec(&mut arr, 0, &mut out);
    out
}
