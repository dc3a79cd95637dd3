//! Independent oracles shared by the integration tests.
//!
//! Nothing here goes through the crate's Fourier kernel or eigensolver: the
//! Gram matrix is rebuilt from the textbook antiderivative and the two
//! constrained problems are solved by accelerated projected gradient.

#![allow(dead_code)]

use std::f64::consts::PI;

use expsys::IntervalUnion;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// `∫_a^b e^{2πixt} dt`, straight from the antiderivative.
pub fn exp_integral(a: f64, b: f64, x: f64) -> Complex64 {
    if x == 0.0 {
        return Complex64::new(b - a, 0.0);
    }
    let e = |t: f64| Complex64::from_polar(1.0, 2.0 * PI * x * t);
    (e(b) - e(a)) / Complex64::new(0.0, 2.0 * PI * x)
}

/// `⟨e_λ, e_γ⟩ = ∫_S e^{2πi(λ-γ)t} dt`.
pub fn inner(set: &IntervalUnion, lambda: f64, gamma: f64) -> Complex64 {
    set.bounds().iter().map(|&(a, b)| exp_integral(a, b, lambda - gamma)).sum()
}

/// `A[k][j] = ⟨e_j, e_k⟩`, so `‖Σ c_j e_j‖² = c*Ac`.
pub fn synthesis(set: &IntervalUnion, pts: &[f64]) -> CMat {
    CMat::from_fn(pts.len(), pts.len(), |k, j| inner(set, pts[j], pts[k]))
}

/// `h[k] = ⟨e_w, e_k⟩`.
pub fn analysis(set: &IntervalUnion, pts: &[f64], w: f64) -> CVec {
    CVec::from_iterator(pts.len(), pts.iter().map(|&p| inner(set, w, p)))
}

fn project_ball(x: &mut CVec, radius: f64) {
    let n = x.norm();
    if n > radius {
        *x *= Complex64::new(radius / n, 0.0);
    }
}

/// Power iteration for the largest eigenvalue of a PSD matrix.
pub fn top_eigenvalue(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut v = CVec::from_fn(n, |i, _| Complex64::new(1.0 + i as f64 * 0.01, 0.3));
    let mut est = 0.0;
    for _ in 0..500 {
        let w = a * &v;
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        est = v.dotc(&w).re / v.norm_squared();
        v = w / Complex64::new(nw, 0.0);
    }
    est * (1.0 + 1e-6)
}

/// FISTA with gradient-based adaptive restart for
/// `min f(x)` over `‖x‖ ≤ radius`, `f` with Lipschitz gradient `lip`.
pub fn fista<G>(grad: G, dim: usize, radius: f64, lip: f64, max_iter: usize) -> CVec
where
    G: Fn(&CVec) -> CVec,
{
    let step = Complex64::new(1.0 / lip, 0.0);
    let mut x = CVec::zeros(dim);
    let mut y = x.clone();
    let mut t = 1.0_f64;
    let mut quiet = 0;
    for _ in 0..max_iter {
        let mut next = &y - grad(&y) * step;
        project_ball(&mut next, radius);
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let moved = &next - &x;
        if (&y - &next).dotc(&moved).re > 0.0 {
            t = 1.0;
            y = next.clone();
        } else {
            y = &next + &moved * Complex64::new((t - 1.0) / t_next, 0.0);
            t = t_next;
        }
        let change = moved.norm();
        x = next;
        if change <= 1e-16 * (1.0 + x.norm()) {
            quiet += 1;
            if quiet > 50 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    x
}

/// Oracle minimality residual: `min ‖Ac - δ_k‖` over `c*Ac ≤ M²`, solved in
/// Cholesky coordinates `y = L*c` where the constraint is a plain ball.
pub fn oracle_minimality(a: &CMat, index: usize, budget: f64, max_iter: usize) -> Option<f64> {
    let l = a.clone().cholesky()?.l();
    let n = a.nrows();
    let mut delta = CVec::zeros(n);
    delta[index] = Complex64::new(1.0, 0.0);
    let lip = 2.0 * top_eigenvalue(a);
    let y = fista(
        |y| (l.adjoint() * (&l * y - &delta)) * Complex64::new(2.0, 0.0),
        n,
        budget,
        lip,
        max_iter,
    );
    Some((&l * y - delta).norm())
}

/// Oracle completeness residual: `min |S| - 2Re(a*h) + a*Aa` over `‖a‖² ≤ C`.
pub fn oracle_completeness(a: &CMat, h: &CVec, measure: f64, budget: f64, max_iter: usize) -> f64 {
    let lip = 2.0 * top_eigenvalue(a);
    let x = fista(
        |x| (a * x - h) * Complex64::new(2.0, 0.0),
        a.nrows(),
        budget.sqrt(),
        lip,
        max_iter,
    );
    let r2 = measure - 2.0 * x.dotc(h).re + x.dotc(&(a * &x)).re;
    r2.max(0.0).sqrt()
}

/// Up to `max_pieces` disjoint intervals inside `[lo, hi]`, each at least `min_len` long.
pub fn random_set<R: Rng>(rng: &mut R, lo: f64, hi: f64, max_pieces: usize, min_len: f64) -> IntervalUnion {
    loop {
        let k = rng.random_range(1..=max_pieces);
        let mut cuts: Vec<f64> = (0..2 * k).map(|_| rng.random_range(lo..hi)).collect();
        cuts.sort_by(f64::total_cmp);
        let pairs: Vec<(f64, f64)> = cuts.chunks(2).map(|c| (c[0], c[1])).collect();
        if pairs.iter().all(|(a, b)| b - a >= min_len) && pairs.windows(2).all(|w| w[1].0 - w[0].1 >= 1e-3) {
            return IntervalUnion::from_f64(&pairs).unwrap();
        }
    }
}

/// `n` sorted points in `[-reach, reach]` with gaps at least `gap`.
pub fn random_points<R: Rng>(rng: &mut R, n: usize, reach: f64, gap: f64) -> Vec<f64> {
    loop {
        let mut p: Vec<f64> = (0..n).map(|_| rng.random_range(-reach..reach)).collect();
        p.sort_by(f64::total_cmp);
        if p.windows(2).all(|w| w[1] - w[0] >= gap) {
            return p;
        }
    }
}
