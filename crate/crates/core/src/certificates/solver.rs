//! Ball-constrained diagonal quadratic
//!
//! ```text
//! minimize  const - 2 Re(y* b) + Σ σ_k |y_k|²   subject to  ‖y‖² ≤ budget
//! ```
//!
//! with `σ ≥ 0`. Stationarity gives `(σ_k + μ) y_k = b_k` with `μ ≥ 0`, and
//! `φ(μ) = Σ |b_k|²/(σ_k + μ)²` is decreasing, so the active multiplier is
//! found by bisection on `φ(μ) = budget`.

use num_complex::Complex64;

/// Relative tolerance on `‖y‖²` when the budget is active.
pub const BUDGET_TOLERANCE: f64 = 1e-10;

const MAX_BISECTIONS: usize = 400;

#[derive(Clone, Debug)]
pub(crate) struct BallSolution {
    pub y: Vec<Complex64>,
    pub multiplier: f64,
    pub active: bool,
}

fn phi(sigma: &[f64], b: &[Complex64], mu: f64) -> f64 {
    sigma
        .iter()
        .zip(b)
        .map(|(&s, bk)| {
            let den = s + mu;
            if den > 0.0 {
                bk.norm_sqr() / (den * den)
            } else if bk.norm_sqr() == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .sum()
}

/// `sigma` must already be clamped: entries at or below the rank floor are 0.
pub(crate) fn solve_ball(sigma: &[f64], b: &[Complex64], budget: f64) -> BallSolution {
    debug_assert_eq!(sigma.len(), b.len());
    let b_sq: f64 = b.iter().map(|z| z.norm_sqr()).sum();
    let null_sq: f64 = sigma.iter().zip(b).filter(|(&s, _)| s == 0.0).map(|(_, z)| z.norm_sqr()).sum();
    // Pseudo-inverse solution, valid when it fits and b has no null-mode part.
    if null_sq <= 1e-24 * b_sq.max(1e-300) {
        let y: Vec<Complex64> = sigma
            .iter()
            .zip(b)
            .map(|(&s, &bk)| if s > 0.0 { bk / s } else { Complex64::new(0.0, 0.0) })
            .collect();
        let norm_sq: f64 = y.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq <= budget {
            return BallSolution {
                y,
                multiplier: 0.0,
                active: false,
            };
        }
    }

    // φ(hi) ≤ ‖b‖²/hi² = budget.
    let mut hi = (b_sq / budget).sqrt();
    let mut lo = hi;
    // Geometric bracket first: the multiplier can be many decades below hi.
    for _ in 0..200 {
        lo *= 0.5;
        if phi(sigma, b, lo) > budget {
            break;
        }
        hi = lo;
        if lo < f64::MIN_POSITIVE {
            lo = 0.0;
            break;
        }
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let value = phi(sigma, b, mid);
        if value > budget {
            lo = mid;
        } else {
            hi = mid;
            if budget - value <= BUDGET_TOLERANCE * budget {
                break;
            }
        }
    }
    let mu = hi;
    let y = sigma
        .iter()
        .zip(b)
        .map(|(&s, &bk)| if s + mu > 0.0 { bk / (s + mu) } else { Complex64::new(0.0, 0.0) })
        .collect();
    BallSolution {
        y,
        multiplier: mu,
        active: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn interior_solution() {
        let s = solve_ball(&[1.0, 2.0], &[c(0.5), c(1.0)], 1.0);
        assert!(!s.active);
        assert!((s.y[0] - c(0.5)).norm() < 1e-15 && (s.y[1] - c(0.5)).norm() < 1e-15);
    }

    #[test]
    fn active_budget_is_met() {
        let s = solve_ball(&[1.0, 0.5, 0.0], &[c(1.0), c(2.0), c(0.3)], 0.25);
        assert!(s.active && s.multiplier > 0.0);
        let n: f64 = s.y.iter().map(|z| z.norm_sqr()).sum();
        assert!((0.25 * (1.0 - 1e-9)..=0.25).contains(&n), "{n}");
    }

    #[test]
    fn scalar_closed_form() {
        // minimize -2y + y² over |y| ≤ r has y = min(1, r)
        for r in [0.1_f64, 0.7, 1.0, 3.0] {
            let s = solve_ball(&[1.0], &[c(1.0)], r * r);
            assert!((s.y[0].re - r.min(1.0)).abs() < 1e-9, "{r}: {:?}", s.y);
        }
    }

    #[test]
    fn zero_rhs() {
        let s = solve_ball(&[0.0, 1.0], &[c(0.0), c(0.0)], 1.0);
        assert!(!s.active);
        assert!(s.y.iter().all(|z| z.norm() == 0.0));
    }
}
