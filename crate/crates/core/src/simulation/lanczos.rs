//! Matrix-free Lanczos with full reorthogonalization for the extreme spectrum
//! of P(S^N, S^N*) on the complement of the all-ones directions, plus a dense
//! Jacobi eigensolver used as the small-N oracle.

use crate::error::{precondition, Error, Result};
use crate::simulation::operator::{SparsePermOperator, SpectralReport};
use crate::simulation::rng::{stream_rng, uniform_f64};

/// Eigenvalues and eigenvectors of a symmetric tridiagonal matrix by the
/// implicit QL algorithm. Returns (values ascending, column eigenvectors).
fn tridiag_eig(diag: &[f64], offdiag: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(&offdiag[..n - 1]);
    let mut z = vec![vec![0.0; n]; n];
    for (i, row) in z.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 50, "tridiagonal QL did not converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if r == 0.0 && m > l + 1 {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    // Sort ascending, carrying columns.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors: Vec<Vec<f64>> =
        order.iter().map(|&i| z.iter().map(|row| row[i]).collect()).collect();
    (values, vectors)
}

/// k largest-magnitude eigenvalues of the projected operator, residual
/// certified. Also reports the signed extremes λ_max and λ_min of the
/// complement spectrum. Errors with diagnostics when the residual tolerance
/// is not met within `max_iter` Krylov steps.
pub fn extreme_eigs(
    op: &SparsePermOperator,
    k: usize,
    tol: f64,
    max_iter: usize,
) -> Result<SpectralReport> {
    if op.n() < 2 {
        return Err(precondition("projected spectra need N ≥ 2"));
    }
    if k == 0 {
        return Err(precondition("k must be ≥ 1"));
    }
    let start = std::time::Instant::now();
    let dim = op.len();
    let free_dim = dim - op.dim(); // all-ones removed per block
    let m_cap = max_iter.min(free_dim).max(1);
    if k > free_dim {
        return Err(precondition(format!(
            "requested {k} eigenvalues but the projected space has dimension {free_dim}"
        )));
    }

    // Deterministic start vector from the tuple's own stream family.
    let mut rng = stream_rng(op.tuple().seed, op.tuple().trial, u64::MAX);
    let mut v: Vec<f64> = (0..dim).map(|_| uniform_f64(&mut rng) - 0.5).collect();
    op.project(&mut v);
    normalize(&mut v);

    let mut basis: Vec<Vec<f64>> = vec![v];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; dim];
    let mut converged_at = None;

    for j in 0..m_cap {
        let mut vj = basis[j].clone();
        op.apply_projected(&mut vj, &mut w);
        let alpha = dot(&basis[j], &w);
        alphas.push(alpha);
        axpy(&mut w, -alpha, &basis[j]);
        if j > 0 {
            let b = betas[j - 1];
            axpy(&mut w, -b, &basis[j - 1]);
        }
        // Full reorthogonalization, two passes.
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                axpy(&mut w, -c, q);
            }
        }
        let beta = norm(&w);
        let exhausted = beta < 1e-13;
        if !exhausted && j + 1 < m_cap {
            betas.push(beta);
            let mut next = w.clone();
            scale(&mut next, 1.0 / beta);
            op.project(&mut next);
            basis.push(next);
        }
        let steps = alphas.len();
        // Checks cost O(steps³); space them exponentially: 20, 40, 80, ...
        let scheduled =
            steps >= 20 && steps.is_multiple_of(20) && (steps / 20).is_power_of_two();
        let should_check = exhausted || steps == m_cap || scheduled;
        if should_check {
            let (vals, vecs) = tridiag_eig(&alphas, &betas);
            let last_beta = if exhausted { 0.0 } else { beta };
            let interesting = interesting_indices(&vals, k);
            let worst = interesting
                .iter()
                .map(|&i| (last_beta * vecs[i][steps - 1]).abs())
                .fold(0.0f64, f64::max);
            if worst <= tol || exhausted {
                converged_at = Some((vals, vecs, steps, last_beta));
                break;
            }
        }
        if exhausted {
            break;
        }
    }

    let (vals, vecs, steps, _) = converged_at.ok_or_else(|| {
        Error::NonConvergence(format!(
            "Lanczos residual above tol = {tol:.2e} after {m_cap} iterations \
             (dim = {dim}, k = {k}); raise the iteration cap"
        ))
    })?;

    // Reconstruct the Ritz vectors we report and certify residuals explicitly.
    let mut report_indices = interesting_indices(&vals, k);
    report_indices.sort_unstable();
    report_indices.dedup();
    let mut pairs: Vec<(f64, f64)> = Vec::new(); // (theta, residual)
    for &i in &report_indices {
        let mut y = vec![0.0; dim];
        for (j, q) in basis.iter().enumerate().take(steps) {
            axpy(&mut y, vecs[i][j], q);
        }
        let mut ay = vec![0.0; dim];
        let mut yc = y.clone();
        op.apply_projected(&mut yc, &mut ay);
        axpy(&mut ay, -vals[i], &y);
        pairs.push((vals[i], norm(&ay) / norm(&y).max(1e-300)));
    }
    let lambda_max = vals[steps - 1];
    let lambda_min = vals[0];
    let mut by_magnitude = pairs.clone();
    by_magnitude.sort_by(|a, b| b.0.abs().partial_cmp(&a.0.abs()).unwrap());
    by_magnitude.truncate(k);
    let worst = by_magnitude.iter().map(|p| p.1).fold(0.0f64, f64::max);
    if worst > tol * 10.0 {
        return Err(Error::NonConvergence(format!(
            "explicit Ritz residual {worst:.3e} exceeds 10×tol after {steps} iterations"
        )));
    }
    Ok(SpectralReport {
        eigenvalues: by_magnitude.iter().map(|p| p.0).collect(),
        residuals: by_magnitude.iter().map(|p| p.1).collect(),
        lambda_max,
        lambda_min,
        iterations: steps,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Ritz indices worth certifying: the k largest by magnitude plus both ends.
fn interesting_indices(vals: &[f64], k: usize) -> Vec<usize> {
    let n = vals.len();
    let mut by_mag: Vec<usize> = (0..n).collect();
    by_mag.sort_by(|&a, &b| vals[b].abs().partial_cmp(&vals[a].abs()).unwrap());
    let mut out: Vec<usize> = by_mag.into_iter().take(k).collect();
    out.push(0);
    out.push(n - 1);
    out.sort_unstable();
    out.dedup();
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn scale(y: &mut [f64], alpha: f64) {
    for yi in y.iter_mut() {
        *yi *= alpha;
    }
}

fn normalize(y: &mut [f64]) {
    let n = norm(y);
    if n > 0.0 {
        scale(y, 1.0 / n);
    }
}

/// All eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations.
/// O(n³) per sweep; intended for the N ≤ 200 oracle.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_eigenvalues(matrix: &[Vec<f64>]) -> Vec<f64> {
    let n = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off.sqrt() < 1e-12 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-15 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let api = a[p][i];
                    let aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    vals
}
