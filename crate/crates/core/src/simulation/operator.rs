//! Sampled permutation tuples and the matrix-free operator P(S^N, S^N*)
//! acting on the orthogonal complement of the all-ones vector in each
//! coordinate block.

use crate::error::{precondition, Result};
use crate::free_group::Letter;
use crate::gauss::rational_to_f64;
use crate::nc_poly::NcPolynomial;
use crate::simulation::rng::{random_permutation, random_permutation_fixing_zero, stream_rng};
use serde::Serialize;

/// d independent uniform permutations of [N], reproducible from
/// (master seed, trial index).
#[derive(Clone, Debug)]
pub struct PermTuple {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub trial: u64,
    perms: Vec<Vec<u32>>,
    inverses: Vec<Vec<u32>>,
}

impl PermTuple {
    /// Sample σ₁..σ_d i.i.d. uniform; generator i draws from stream index i−1.
    pub fn sample(n: usize, d: usize, seed: u64, trial: u64) -> Result<Self> {
        Self::sample_planted(n, d, seed, trial, 0)
    }

    /// Sample with the first `planted` generators conditioned to fix vertex 0
    /// (uniform over permutations fixing it); the rest are uniform.
    pub fn sample_planted(
        n: usize,
        d: usize,
        seed: u64,
        trial: u64,
        planted: usize,
    ) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(precondition("need N ≥ 1 and d ≥ 1"));
        }
        if planted > d {
            return Err(precondition("cannot plant more generators than d"));
        }
        let mut perms = Vec::with_capacity(d);
        for i in 0..d {
            let mut rng = stream_rng(seed, trial, i as u64);
            let p = if i < planted {
                random_permutation_fixing_zero(&mut rng, n)
            } else {
                random_permutation(&mut rng, n)
            };
            perms.push(p);
        }
        let inverses = perms
            .iter()
            .map(|p| {
                let mut inv = vec![0u32; n];
                for (x, &y) in p.iter().enumerate() {
                    inv[y as usize] = x as u32;
                }
                inv
            })
            .collect();
        Ok(PermTuple { n, d, seed, trial, perms, inverses })
    }

    pub fn perm(&self, i: usize) -> &[u32] {
        &self.perms[i]
    }

    pub fn inverse(&self, i: usize) -> &[u32] {
        &self.inverses[i]
    }

    /// Apply the permutation matrix of letter l (S for generators, S* for
    /// inverse letters) to src, writing into dst: (S_σ v)(x) = v(σ⁻¹(x)).
    fn apply_letter(&self, l: Letter, src: &[f64], dst: &mut [f64]) {
        let li = l as usize;
        let table = if li <= self.d { &self.inverses[li - 1] } else { &self.perms[li - 1 - self.d] };
        for (x, out) in dst.iter_mut().enumerate() {
            *out = src[table[x] as usize];
        }
    }

    /// Number of fixed points of w(σ) for a letter word, read right to left.
    pub fn count_fixed(&self, letters: &[Letter]) -> u64 {
        let mut fixed = 0u64;
        for start in 0..self.n {
            let mut x = start as u32;
            for &l in letters.iter().rev() {
                if l == 0 {
                    continue;
                }
                let li = l as usize;
                x = if li <= self.d {
                    self.perms[li - 1][x as usize]
                } else {
                    self.inverses[li - 1 - self.d][x as usize]
                };
            }
            if x == start as u32 {
                fixed += 1;
            }
        }
        fixed
    }
}

/// Matrix-free P(S^N, S^N*) on C^D ⊗ C^N with the all-ones direction of every
/// coordinate block deflated on demand. Coefficient matrices must be real
/// (every experiment in this toolkit is; complex input is refused).
pub struct SparsePermOperator {
    tuple: PermTuple,
    dim: usize,
    n: usize,
    /// (word letters, D×D real coefficient, row-major).
    terms: Vec<(Vec<Letter>, Vec<f64>)>,
    scratch_a: std::cell::RefCell<Vec<f64>>,
    scratch_b: std::cell::RefCell<Vec<f64>>,
}

impl SparsePermOperator {
    pub fn new(poly: &NcPolynomial, tuple: PermTuple) -> Result<Self> {
        if poly.d() != tuple.d {
            return Err(precondition("polynomial rank does not match the tuple"));
        }
        if !poly.is_real() {
            return Err(precondition(
                "simulation operators support real coefficient matrices only",
            ));
        }
        let dim = poly.dim();
        let n = tuple.n;
        let mut terms = Vec::new();
        for (w, m) in poly.terms() {
            let mut coeff = Vec::with_capacity(dim * dim);
            for i in 0..dim {
                for j in 0..dim {
                    coeff.push(rational_to_f64(&m.get(i, j).re));
                }
            }
            terms.push((w.letters().to_vec(), coeff));
        }
        Ok(SparsePermOperator {
            tuple,
            dim,
            n,
            terms,
            scratch_a: std::cell::RefCell::new(vec![0.0; n]),
            scratch_b: std::cell::RefCell::new(vec![0.0; n]),
        })
    }

    /// Total dimension D·N of the ambient space.
    pub fn len(&self) -> usize {
        self.dim * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tuple(&self) -> &PermTuple {
        &self.tuple
    }

    /// y = P x on the full space (no projection). Blocks are contiguous:
    /// x[j·N..(j+1)·N] is coordinate j.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.len());
        assert_eq!(y.len(), self.len());
        y.fill(0.0);
        let n = self.n;
        let mut word_buf = self.scratch_a.borrow_mut();
        let mut flip_buf = self.scratch_b.borrow_mut();
        for (letters, coeff) in &self.terms {
            for j in 0..self.dim {
                // w(S) applied to block j, letters acting rightmost first.
                let src = &x[j * n..(j + 1) * n];
                word_buf.copy_from_slice(src);
                for &l in letters.iter().rev() {
                    self.tuple.apply_letter(l, &word_buf, &mut flip_buf);
                    std::mem::swap(&mut *word_buf, &mut *flip_buf);
                }
                for i in 0..self.dim {
                    let a = coeff[i * self.dim + j];
                    if a != 0.0 {
                        let dst = &mut y[i * n..(i + 1) * n];
                        for (dy, &wv) in dst.iter_mut().zip(word_buf.iter()) {
                            *dy += a * wv;
                        }
                    }
                }
            }
        }
    }

    /// Remove the all-ones component of every coordinate block in place.
    pub fn project(&self, x: &mut [f64]) {
        let n = self.n;
        for j in 0..self.dim {
            let block = &mut x[j * n..(j + 1) * n];
            let mean: f64 = block.iter().sum::<f64>() / n as f64;
            for v in block.iter_mut() {
                *v -= mean;
            }
        }
    }

    /// y = Π P Π x: the operator restricted to the invariant complement.
    pub fn apply_projected(&self, x: &mut [f64], y: &mut [f64]) {
        self.project(x);
        self.apply(x, y);
        self.project(y);
    }

    /// Dense matrix of the unprojected operator, for the N ≤ 200 oracle.
    pub fn dense(&self) -> Vec<Vec<f64>> {
        let len = self.len();
        let mut cols = vec![vec![0.0; len]; len];
        let mut e = vec![0.0; len];
        for j in 0..len {
            e.fill(0.0);
            e[j] = 1.0;
            let mut out = vec![0.0; len];
            self.apply(&e, &mut out);
            cols[j] = out;
        }
        // Transpose into row-major.
        let mut rows = vec![vec![0.0; len]; len];
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                rows[i][j] = v;
            }
        }
        rows
    }
}

/// Result rows of an eigenvalue computation.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    /// The k largest-magnitude eigenvalues of the projected operator, sorted
    /// by decreasing magnitude.
    pub eigenvalues: Vec<f64>,
    /// Residual norms ‖Ay − θy‖ for the reported Ritz pairs.
    pub residuals: Vec<f64>,
    /// Largest (signed) and smallest (signed) eigenvalues on the complement.
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub iterations: usize,
    pub wall_ms: f64,
}
