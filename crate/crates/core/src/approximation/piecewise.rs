//! Piecewise polynomials with exact convolution against box kernels, the
//! machinery behind the smooth test-function construction. Pieces are stored
//! in local coordinates (u = x − left breakpoint) for conditioning.

/// A compactly supported piecewise polynomial: zero outside
/// [breaks[0], breaks[last]], polynomial `pieces[i]` (monomial coefficients in
/// u = x − breaks[i]) on [breaks[i], breaks[i+1]).
#[derive(Clone, Debug)]
pub struct PiecewisePoly {
    pub breaks: Vec<f64>,
    pub pieces: Vec<Vec<f64>>,
}

fn eval_local(coeffs: &[f64], u: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * u + c;
    }
    acc
}

/// Taylor shift: coefficients of p(u + dx) given those of p(u).
fn shift_poly(coeffs: &[f64], dx: f64) -> Vec<f64> {
    let n = coeffs.len();
    let mut out = coeffs.to_vec();
    // Repeated synthetic division (Horner shift), numerically stable for the
    // modest degrees (≤ ~30) used here.
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let (lo, hi) = out.split_at_mut(j + 1);
            lo[j] += dx * hi[0];
            let _ = lo;
        }
    }
    out
}

impl PiecewisePoly {
    /// The zero function.
    pub fn zero() -> Self {
        PiecewisePoly { breaks: vec![0.0, 1.0], pieces: vec![vec![]] }
    }

    /// A single polynomial piece on [a, b] (local coordinates at a).
    pub fn single(a: f64, b: f64, coeffs: Vec<f64>) -> Self {
        PiecewisePoly { breaks: vec![a, b], pieces: vec![coeffs] }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.breaks[0], *self.breaks.last().unwrap())
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x < self.breaks[0] || x >= *self.breaks.last().unwrap() {
            return 0.0;
        }
        let idx = match self.breaks.binary_search_by(|b| b.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.pieces.len() - 1),
            Err(i) => i - 1,
        };
        eval_local(&self.pieces[idx], x - self.breaks[idx])
    }

    /// Pointwise derivative (defined off the breakpoints).
    pub fn derivative(&self) -> PiecewisePoly {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                p.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, &c)| c * i as f64)
                    .collect::<Vec<f64>>()
            })
            .collect();
        PiecewisePoly { breaks: self.breaks.clone(), pieces }
    }

    /// Antiderivative pieces with accumulated constants so the result is
    /// continuous, plus the total integral over the support.
    fn antiderivative(&self) -> (PiecewisePoly, f64) {
        let mut pieces = Vec::with_capacity(self.pieces.len());
        let mut acc = 0.0;
        for (i, p) in self.pieces.iter().enumerate() {
            let mut anti = vec![0.0; p.len() + 1];
            anti[0] = acc;
            for (k, &c) in p.iter().enumerate() {
                anti[k + 1] = c / (k + 1) as f64;
            }
            let width = self.breaks[i + 1] - self.breaks[i];
            acc = eval_local(&anti, width);
            pieces.push(anti);
        }
        (PiecewisePoly { breaks: self.breaks.clone(), pieces }, acc)
    }

    /// Definite integral over the whole support.
    pub fn total_integral(&self) -> f64 {
        self.antiderivative().1
    }

    /// Cumulative integral ∫_{−∞}^x, clamped to the total after the support.
    pub fn cumulative(&self) -> CumulativePoly {
        let (anti, total) = self.antiderivative();
        CumulativePoly { anti, total }
    }

    /// Convolution with the box kernel H_a = a⁻¹·1_{[0,a]}:
    /// (f * H_a)(x) = (F(x) − F(x−a))/a with F the cumulative integral.
    pub fn convolve_box(&self, a: f64) -> PiecewisePoly {
        assert!(a > 0.0, "box width must be positive");
        let cum = self.cumulative();
        let mut breaks: Vec<f64> = self
            .breaks
            .iter()
            .copied()
            .chain(self.breaks.iter().map(|&b| b + a))
            .collect();
        breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
        breaks.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
        let mut pieces = Vec::with_capacity(breaks.len() - 1);
        for w in breaks.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            // On (lo, hi) both F(x) and F(x − a) stay on a single source piece,
            // so the difference is one polynomial; express it locally at lo.
            let p1 = cum.piece_at(lo, hi);
            let p0 = cum.piece_at(lo - a, hi - a);
            let n = p1.len().max(p0.len());
            let mut diff = vec![0.0; n];
            for (i, &c) in p1.iter().enumerate() {
                diff[i] += c / a;
            }
            for (i, &c) in p0.iter().enumerate() {
                diff[i] -= c / a;
            }
            while diff.last().is_some_and(|c| *c == 0.0) {
                diff.pop();
            }
            pieces.push(diff);
        }
        PiecewisePoly { breaks, pieces }
    }
}

/// Continuous cumulative integral of a compactly supported piecewise
/// polynomial: 0 before the support, `total` after it.
#[derive(Clone, Debug)]
pub struct CumulativePoly {
    anti: PiecewisePoly,
    pub total: f64,
}

impl CumulativePoly {
    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.anti.support();
        if x <= lo {
            0.0
        } else if x >= hi {
            self.total
        } else {
            let idx = match self.anti.breaks.binary_search_by(|b| b.partial_cmp(&x).unwrap()) {
                Ok(i) => i.min(self.anti.pieces.len() - 1),
                Err(i) => i - 1,
            };
            eval_local(&self.anti.pieces[idx], x - self.anti.breaks[idx])
        }
    }

    /// Local-coordinate polynomial (at `lo`) representing x ↦ F(x) on the
    /// interval (lo, hi), assuming (lo, hi) does not straddle a breakpoint.
    fn piece_at(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mid = 0.5 * (lo + hi);
        let (s_lo, s_hi) = self.anti.support();
        if mid <= s_lo {
            return vec![];
        }
        if mid >= s_hi {
            return vec![self.total];
        }
        let idx = match self.anti.breaks.binary_search_by(|b| b.partial_cmp(&mid).unwrap()) {
            Ok(i) => i.min(self.anti.pieces.len() - 1),
            Err(i) => i - 1,
        };
        // Re-center from the source breakpoint to `lo`.
        shift_poly(&self.anti.pieces[idx], lo - self.anti.breaks[idx])
    }
}

/// Standard adaptive Simpson quadrature with absolute/relative tolerance
/// `tol`, recursion capped at `max_depth`.
#[allow(clippy::too_many_arguments)]
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, max_depth: u32) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
                + rec(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(a, fa, b, fb, fm);
    let scale = (whole.abs() + 1.0) * tol;
    rec(f, a, fa, b, fb, fm, whole, scale, max_depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_convolution_of_box_is_tent() {
        // 1_{[0,1]} * H_1 is the tent on [0,2] peaking at 1.
        let b = PiecewisePoly::single(0.0, 1.0, vec![1.0]);
        let tent = b.convolve_box(1.0);
        assert!((tent.eval(1.0) - 1.0).abs() < 1e-12);
        assert!((tent.eval(0.5) - 0.5).abs() < 1e-12);
        assert!((tent.eval(1.5) - 0.5).abs() < 1e-12);
        assert_eq!(tent.eval(-0.1), 0.0);
        assert_eq!(tent.eval(2.1), 0.0);
        assert!((tent.total_integral() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn convolution_preserves_mass_and_smooths() {
        let bump = PiecewisePoly::single(0.0, 1.0, vec![0.0, 0.0, 6.0, -6.0]); // 6u²−6u³? mass:
        let mass = bump.total_integral();
        let c = bump.convolve_box(0.25).convolve_box(0.25);
        assert!((c.total_integral() - mass).abs() < 1e-10);
        // Convolution against matched numerical quadrature at a few points.
        let direct = |x: f64| {
            let f = |t: f64| bump.eval(x - t) * 16.0;
            adaptive_simpson(&f, 0.0, 0.25, 1e-10, 30)
        };
        let once = bump.convolve_box(0.25);
        for x in [0.1, 0.3, 0.7, 1.05] {
            let expect = direct(x) / 16.0 * 4.0;
            assert!((once.eval(x) - expect).abs() < 1e-8, "x = {x}");
        }
    }

    #[test]
    fn simpson_exact_on_cubics() {
        let f = |x: f64| 3.0 * x * x * x - x + 2.0;
        let v = adaptive_simpson(&f, -1.0, 2.0, 1e-12, 20);
        // ∫ = 3/4 x⁴ − x²/2 + 2x on [−1,2] = (12−2+4) − (3/4−1/2−2)
        let exact = (0.75 * 16.0 - 2.0 + 4.0) - (0.75 - 0.5 - 2.0);
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn shift_poly_correct() {
        let p = vec![1.0, -2.0, 3.0]; // 1 − 2u + 3u²
        let s = shift_poly(&p, 0.5);
        for u in [-1.0, 0.0, 0.25, 2.0] {
            let direct = 1.0 - 2.0 * (u + 0.5) + 3.0 * (u + 0.5) * (u + 0.5);
            assert!((eval_local(&s, u) - direct).abs() < 1e-12);
        }
    }
}
