use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fourier::{analysis_vector, interval_transform, synthesis_gram};
use crate::geometry::{Interval, IntervalUnion};

/// `S = [0, 1] ∪ [1, 1 + α] ∪ ... ∪ [n, n + α]` with `α = d²/(n(1 - d²) + 1)`.
///
/// Every `e_x` is approximated on `S` by the Fourier series of the 1-periodic
/// function that vanishes on `[0, α]` and equals `e_x` on `[α, 1]`; the
/// coefficients have `ℓ²` norm at most 1 and the error is exactly
/// `(n + 1)α = d²|S|`.
#[derive(Clone, Debug, Serialize)]
pub struct SharpnessInstance {
    #[serde(serialize_with = "ser_rational")]
    pub d: Rational64,
    pub n: u32,
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational64,
    pub set: IntervalUnion,
}

fn ser_rational<S: serde::Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn alpha_for(d2: Rational64, n: i64) -> Rational64 {
    d2 / (Rational64::from_integer(n) * (Rational64::one() - d2) + Rational64::one())
}

impl SharpnessInstance {
    /// Instance for a fixed block count `n ≥ 1`.
    pub fn with_blocks(d: Rational64, n: u32) -> Result<Self> {
        if !(d > Rational64::zero() && d < Rational64::one()) {
            return Err(Error::param("d", format!("must lie in (0, 1), got {d}")));
        }
        if n == 0 {
            return Err(Error::param("n", "needs at least one block"));
        }
        let d2 = d * d;
        let alpha = alpha_for(d2, n as i64);
        let mut pieces = vec![Interval::new(0i64, 1i64)?];
        for j in 1..=n as i64 {
            pieces.push(Interval::new(
                Rational64::from_integer(j),
                Rational64::from_integer(j) + alpha,
            )?);
        }
        Ok(SharpnessInstance {
            d,
            n,
            alpha,
            set: IntervalUnion::new(pieces)?,
        })
    }

    pub fn d2(&self) -> Rational64 {
        self.d * self.d
    }

    pub fn measure(&self) -> Rational64 {
        self.set.exact_measure().expect("sharpness sets are exact")
    }

    pub fn alpha_f64(&self) -> f64 {
        self.alpha.to_f64().unwrap_or(f64::NAN)
    }

    /// `d·√|S|`, the residual the construction achieves.
    pub fn target_residual(&self) -> f64 {
        self.d.to_f64().unwrap_or(f64::NAN) * self.set.measure().sqrt()
    }

    /// The three exact identities: `α = d²/(n(1-d²)+1)`, `|S| = 1 + nα`,
    /// `d²|S| = (n+1)α`; plus `|S|(1 - d²) = 1 - α`.
    pub fn identities_hold(&self) -> bool {
        let n = Rational64::from_integer(self.n as i64);
        let one = Rational64::one();
        let m = self.measure();
        self.alpha == alpha_for(self.d2(), self.n as i64)
            && m == one + n * self.alpha
            && self.d2() * m == (n + one) * self.alpha
            && m * (one - self.d2()) == one - self.alpha
    }
}

/// Picks the smallest `n ≥ 1` with `α_n ≤ ε`.
pub fn sharpness_set(d: Rational64, eps: Rational64) -> Result<SharpnessInstance> {
    if !(eps > Rational64::zero() && eps < Rational64::one()) {
        return Err(Error::param("eps", format!("must lie in (0, 1), got {eps}")));
    }
    if !(d > Rational64::zero() && d < Rational64::one()) {
        return Err(Error::param("d", format!("must lie in (0, 1), got {d}")));
    }
    let d2 = d * d;
    // α_n ≤ ε  ⇔  n ≥ (d²/ε - 1)/(1 - d²)
    let lower = (d2 / eps - Rational64::one()) / (Rational64::one() - d2);
    let n = lower.ceil().to_integer().max(1);
    let n = u32::try_from(n).map_err(|_| Error::param("eps", "requires too many blocks"))?;
    let inst = SharpnessInstance::with_blocks(d, n)?;
    debug_assert!(inst.alpha <= eps);
    debug_assert!(n == 1 || alpha_for(d2, n as i64 - 1) > eps);
    debug_assert!(inst.measure() * (Rational64::one() - d2) >= Rational64::one() - eps);
    Ok(inst)
}

#[derive(Clone, Debug, Serialize)]
pub struct TruncationApproximant {
    pub x: f64,
    /// Coefficients `a_k` for `k = -N..=N`.
    pub coefficients: Vec<Complex64>,
    pub residual: f64,
    pub coeff_norm_sq: f64,
    /// `Σ_{|k| > N} |a_k|²`, from Parseval.
    pub tail: f64,
}

/// Truncated Fourier approximation of `e_x` on the sharpness set, with the
/// exact `L²(S)` error.
pub fn truncation_approximant(inst: &SharpnessInstance, x: f64, order: u32) -> Result<TruncationApproximant> {
    let alpha = inst.alpha_f64();
    let freqs: Vec<f64> = (-(order as i64)..=order as i64).map(|k| k as f64).collect();
    // a_k = ∫_α^1 e^{2πi(x-k)t} dt
    let coefficients: Vec<Complex64> = freqs.iter().map(|&k| interval_transform(alpha, 1.0, k - x)).collect();
    let gram = synthesis_gram(&inst.set, &freqs, Exec::Sequential);
    let h = analysis_vector(&inst.set, &freqs, x);
    let a = nalgebra::DVector::from_vec(coefficients.clone());
    let quad = (a.adjoint() * &gram * &a)[(0, 0)].re;
    let cross: Complex64 = a.iter().zip(&h).map(|(ak, hk)| ak.conj() * hk).sum();
    let residual_sq = (inst.set.measure() - 2.0 * cross.re + quad).max(0.0);
    let coeff_norm_sq: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
    Ok(TruncationApproximant {
        x,
        residual: residual_sq.sqrt(),
        tail: ((1.0 - alpha) - coeff_norm_sq).max(0.0),
        coeff_norm_sq,
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn half_with_large_eps() {
        // α_1 = (1/4)/(3/4 + 1) = 1/7
        let inst = sharpness_set(q(1, 2), q(1, 5)).unwrap();
        assert_eq!(inst.n, 1);
        assert_eq!(inst.alpha, q(1, 7));
        assert_eq!(inst.set.len(), 1, "[0,1] and [1,8/7] touch and merge");
        assert_eq!(inst.measure(), q(8, 7));
        assert_eq!(inst.d2() * inst.measure(), q(2, 7));
        assert!(inst.identities_hold());
    }

    #[test]
    fn half_with_small_eps() {
        // α_5 = 1/19 > 1/20, α_6 = 1/22 ≤ 1/20
        let inst = sharpness_set(q(1, 2), q(1, 20)).unwrap();
        assert_eq!(inst.n, 6);
        assert_eq!(inst.alpha, q(1, 22));
        assert_eq!(inst.measure() * q(3, 4), q(21, 22));
        assert_eq!(alpha_for(q(1, 4), 5), q(1, 19));
        assert!(inst.identities_hold());
        assert_eq!(inst.set.len(), 6);
    }

    #[test]
    fn small_d_still_uses_one_block() {
        let inst = sharpness_set(q(1, 100), q(1, 2)).unwrap();
        assert_eq!(inst.n, 1);
        assert!((inst.alpha_f64() - 1e-4 / 1.9999).abs() < 1e-15);
        assert!(inst.identities_hold());
    }

    #[test]
    fn decimal_inputs_stay_exact() {
        for (d, n) in [(q(3, 10), 1), (q(7, 10), 8)] {
            let inst = sharpness_set(d, q(1, 10)).unwrap();
            assert_eq!(inst.n, n);
            assert!(inst.identities_hold());
        }
        assert!(sharpness_set(q(1, 1), q(1, 10)).is_err());
        assert!(sharpness_set(q(1, 2), q(0, 1)).is_err());
    }

    #[test]
    fn zeroth_order_approximant() {
        let inst = sharpness_set(q(1, 2), q(1, 5)).unwrap();
        let t = truncation_approximant(&inst, 0.0, 0).unwrap();
        let alpha = 1.0 / 7.0;
        assert_eq!(t.coefficients.len(), 1);
        assert!((t.coefficients[0] - Complex64::new(1.0 - alpha, 0.0)).norm() < 1e-15);
        // one-term oracle: ‖1 - (1-α)‖² over S = (1-α)... constant error α on all of S
        let closed = (alpha * alpha * (1.0 + alpha)).sqrt();
        assert!((t.residual - closed).abs() < 1e-14, "{} vs {closed}", t.residual);
    }

    #[test]
    fn approximant_reaches_target() {
        let inst = sharpness_set(q(1, 2), q(1, 5)).unwrap();
        let target = inst.target_residual();
        let t = truncation_approximant(&inst, 0.37, 64).unwrap();
        assert!(t.coeff_norm_sq <= 1.0);
        assert!(t.residual >= target - 1e-9 && t.residual <= target + 0.02, "{} vs {target}", t.residual);
    }
}
