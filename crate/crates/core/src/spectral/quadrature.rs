//! Adaptive Gauss–Kronrod (7/15) quadrature.

use crate::exec::Exec;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 48;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Sum of the per-panel |Kronrod − Gauss| estimates.
    pub error: f64,
    pub evaluations: usize,
}

impl std::ops::Add for QuadResult {
    type Output = QuadResult;
    fn add(self, o: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + o.value,
            error: self.error + o.error,
            evaluations: self.evaluations + o.evaluations,
        }
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * half, (kronrod - gauss).abs() * half)
}

/// Integrates `f` over `[a, b]`, bisecting until every panel's error
/// estimate is below `tol` (absolute, per panel).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> QuadResult {
    let mut total = QuadResult::default();
    // Left-to-right depth-first traversal keeps the summation order fixed.
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let (value, error) = gk15(&f, lo, hi);
        total.evaluations += 15;
        if error <= tol || depth >= MAX_DEPTH || (hi - lo).abs() < 1e-14 * (1.0 + lo.abs()) {
            total.value += value;
            total.error += error;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    total
}

/// Splits `[a, b]` into equal panels no wider than `panel_width`, integrates
/// each adaptively and sums in panel order.
pub fn integrate_panels<F>(f: F, a: f64, b: f64, panel_width: f64, tol: f64, exec: Exec) -> QuadResult
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let panels = (((b - a) / panel_width).ceil() as usize).max(1);
    let width = (b - a) / panels as f64;
    exec.map_range(panels, |i| {
        let lo = a + i as f64 * width;
        let hi = if i + 1 == panels { b } else { lo + width };
        integrate(&f, lo, hi, tol)
    })
    .into_iter()
    .fold(QuadResult::default(), |acc, r| acc + r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x + 1.0, -1.0, 2.0, 1e-12);
        assert!((r.value - (64.0 / 6.0 - 1.0 / 6.0 - 9.0 + 3.0)).abs() < 1e-12);
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn oscillatory() {
        let r = integrate(|x| (40.0 * x).cos(), 0.0, PI, 1e-12);
        assert!((r.value - (40.0 * PI).sin() / 40.0).abs() < 1e-11);
        let p = integrate_panels(|x| (x * x).sin(), 0.0, 10.0, 1.0, 1e-13, Exec::Parallel);
        let s = integrate_panels(|x| (x * x).sin(), 0.0, 10.0, 1.0, 1e-13, Exec::Sequential);
        assert_eq!(p.value, s.value);
        // Fresnel-type reference value
        assert!((p.value - 0.583_670_899_929_623_2).abs() < 1e-10);
    }

    #[test]
    fn sinc_squared_over_wide_range() {
        // ∫ sinc²(πx) over [-T, T] approaches 1 with tail ≤ 1/(π² T)
        let t = 50.0;
        let f = |x: f64| {
            if x == 0.0 {
                1.0
            } else {
                ((PI * x).sin() / (PI * x)).powi(2)
            }
        };
        let r = integrate_panels(f, -t, t, 1.0, 1e-12, Exec::default());
        assert!(r.value < 1.0 && r.value > 1.0 - 1.0 / (PI * PI * t) - 1e-9);
    }
}
