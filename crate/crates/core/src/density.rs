//! Windowed estimates of the upper and lower Beurling densities
//!
//! ```text
//! D⁺(Λ) = lim_r max_x #(Λ ∩ [x, x + r]) / r
//! D⁻(Λ) = lim_r min_x #(Λ ∩ [x, x + r]) / r
//! ```
//!
//! The counting function `x ↦ #(Λ ∩ [x, x + r])` is piecewise constant and
//! only jumps where `x` or `x + r` crosses a point, so the extremes over `x`
//! are attained at windows whose left edge sits exactly on a point (max) or
//! just to the right of one (min). The limit in `r` is replaced by a
//! geometric ladder of radii.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::Generator;

/// Default `r_max` in units of the separation constant.
pub const DEFAULT_RADIUS_FACTOR: f64 = 4096.0;

/// Smallest rung of the ladder, in units of the separation constant.
const MIN_RADIUS_FACTOR: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMode {
    Upper,
    Lower,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityEstimate {
    pub mode: DensityMode,
    pub radii: Vec<f64>,
    pub extremal_counts: Vec<usize>,
    pub estimates: Vec<f64>,
    /// Estimate at the largest radius.
    pub plateau: f64,
    /// Whether the last two rungs differ by less than `1/r`.
    pub converged: bool,
    /// Discretization slack `1/r_max`.
    pub slack: f64,
}

impl DensityEstimate {
    /// CSV with columns `r,extremal_count,estimate`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,extremal_count,estimate\n");
        for ((r, c), e) in self.radii.iter().zip(&self.extremal_counts).zip(&self.estimates) {
            let _ = writeln!(out, "{r},{c},{e}");
        }
        out
    }
}

/// Radii `r_max / 2^k`, ascending, down to `8δ`.
pub fn radius_ladder(separation: f64, r_max: f64) -> Vec<f64> {
    let mut radii = vec![r_max];
    let mut r = r_max / 2.0;
    while r >= MIN_RADIUS_FACTOR * separation {
        radii.push(r);
        r /= 2.0;
    }
    radii.reverse();
    radii
}

/// Points enumerated once for all rungs, covering the origin and enough room
/// on both sides for every window of length `r_max`.
struct Scan {
    points: Vec<f64>,
    hi: f64,
    tol: f64,
}

impl Scan {
    fn new(generator: &Generator, r_max: f64) -> Result<Self> {
        let delta = generator.separation()?;
        let reach = 2.0 * r_max + 64.0 * delta;
        let window = generator.window(-reach, reach)?;
        Ok(Scan {
            points: window.into_points(),
            hi: reach,
            tol: 1e-9 * delta,
        })
    }

    /// Extremal count over windows of length `r` lying inside the scan range.
    fn extremal(&self, r: f64, mode: DensityMode) -> Option<usize> {
        let p = &self.points;
        let mut best: Option<usize> = None;
        let mut j = 0usize;
        for (i, &left) in p.iter().enumerate() {
            if left + r > self.hi {
                break;
            }
            let edge = left + r + self.tol;
            j = j.max(i);
            while j < p.len() && p[j] <= edge {
                j += 1;
            }
            let count = match mode {
                // [left, left + r]
                DensityMode::Upper => j - i,
                // (left, left + r]
                DensityMode::Lower => j - i - 1,
            };
            best = Some(match (best, mode) {
                (None, _) => count,
                (Some(b), DensityMode::Upper) => b.max(count),
                (Some(b), DensityMode::Lower) => b.min(count),
            });
        }
        best
    }
}

pub fn density_with(generator: &Generator, r_max: f64, mode: DensityMode, exec: Exec) -> Result<DensityEstimate> {
    let delta = generator.separation()?;
    if !(r_max >= 10.0 * delta) || !r_max.is_finite() {
        return Err(Error::param("r_max", format!("must be at least 10·δ = {}, got {r_max}", 10.0 * delta)));
    }
    let scan = Scan::new(generator, r_max)?;
    if scan.points.is_empty() {
        return Err(Error::EmptyFrequencySet);
    }
    let radii = radius_ladder(delta, r_max);
    let counts = exec.map(&radii, |&r| scan.extremal(r, mode));
    let extremal_counts: Vec<usize> = counts
        .into_iter()
        .map(|c| c.ok_or_else(|| Error::Numerical("no point inside the scan range".into())))
        .collect::<Result<_>>()?;
    let estimates: Vec<f64> = extremal_counts.iter().zip(&radii).map(|(&c, &r)| c as f64 / r).collect();
    let plateau = *estimates.last().expect("ladder is never empty");
    let converged = match estimates.len() {
        0 | 1 => false,
        n => (estimates[n - 1] - estimates[n - 2]).abs() < 1.0 / radii[n - 2],
    };
    Ok(DensityEstimate {
        mode,
        radii,
        extremal_counts,
        estimates,
        plateau,
        converged,
        slack: 1.0 / r_max,
    })
}

/// Upper density estimate, ladder up to `r_max`.
pub fn upper_density(generator: &Generator, r_max: f64) -> Result<DensityEstimate> {
    density_with(generator, r_max, DensityMode::Upper, Exec::default())
}

/// Lower density estimate, ladder up to `r_max`.
pub fn lower_density(generator: &Generator, r_max: f64) -> Result<DensityEstimate> {
    density_with(generator, r_max, DensityMode::Lower, Exec::default())
}

/// `r_max = 4096·δ`.
pub fn default_radius(generator: &Generator) -> Result<f64> {
    Ok(DEFAULT_RADIUS_FACTOR * generator.separation()?)
}

/// `#(Λ ∩ [x, x + r])`.
pub fn window_count(generator: &Generator, x: f64, r: f64) -> Result<usize> {
    Ok(generator.window(x, x + r)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::NamedSequence;

    fn within(est: &DensityEstimate, exact: f64) -> bool {
        (est.plateau - exact).abs() <= est.slack + 1e-12
    }

    #[test]
    fn lattice_densities() {
        let half = Generator::lattice(0.5);
        let up = upper_density(&half, default_radius(&half).unwrap()).unwrap();
        assert!(within(&up, 2.0), "{}", up.plateau);
        let two = Generator::lattice(2.0);
        let lo = lower_density(&two, default_radius(&two).unwrap()).unwrap();
        assert!(within(&lo, 0.5), "{}", lo.plateau);
        assert!(up.converged && lo.converged);
    }

    #[test]
    fn union_of_lattices() {
        let g = Generator::Union {
            parts: vec![
                Generator::integers(),
                Generator::Lattice {
                    step: 1.0,
                    offset: 0.4,
                },
            ],
        };
        let up = upper_density(&g, 1024.0).unwrap();
        assert!((up.plateau - 2.0).abs() <= 1.0 / 1024.0 + 1e-12);
    }

    #[test]
    fn named_sequence_has_density_one_half() {
        let g = Generator::named(NamedSequence::OddEvenZero);
        let up = upper_density(&g, 4096.0).unwrap();
        let lo = lower_density(&g, 4096.0).unwrap();
        // odd negatives and even positives: one point per two units on each side
        assert!(within(&up, 0.5) && within(&lo, 0.5), "{} {}", up.plateau, lo.plateau);
    }

    #[test]
    fn finite_defect_does_not_change_density() {
        let g = Generator::Without {
            base: Box::new(Generator::integers()),
            removed: vec![0.0],
        };
        let lo = lower_density(&g, 4096.0).unwrap();
        assert!(within(&lo, 1.0));
        let full = lower_density(&Generator::integers(), 4096.0).unwrap();
        for (a, b) in lo.extremal_counts.iter().zip(&full.extremal_counts) {
            assert!(a.abs_diff(*b) <= 1);
        }
    }

    #[test]
    fn snapped_integers_and_their_lattice_complement() {
        let eta = 0.25;
        let snapped = Generator::snapped(Generator::integers(), eta);
        let gamma = Generator::lattice_complement_of(Generator::integers(), eta);
        let lo = lower_density(&snapped, 4096.0).unwrap();
        let up = upper_density(&gamma, 4096.0).unwrap();
        assert!(within(&lo, 1.0));
        assert!((up.plateau - (1.0 / eta - lo.plateau)).abs() <= 2.0 / 4096.0, "{} vs {}", up.plateau, lo.plateau);
        assert!((up.plateau - 3.0).abs() <= 2.0 / 4096.0);
    }

    #[test]
    fn lower_never_exceeds_upper() {
        let g = Generator::named(NamedSequence::OddEven);
        let up = upper_density(&g, 512.0).unwrap();
        let lo = lower_density(&g, 512.0).unwrap();
        for (u, l) in up.extremal_counts.iter().zip(&lo.extremal_counts) {
            assert!(l <= u);
        }
    }

    #[test]
    fn translation_invariance() {
        let a = Generator::list((0..3000).map(|k| k as f64 * 1.0 + (k % 3) as f64 * 0.2).collect());
        let b = Generator::list((0..3000).map(|k| k as f64 * 1.0 + (k % 3) as f64 * 0.2 + 17.3).collect());
        let ua = density_with(&a, 256.0, DensityMode::Upper, Exec::Sequential).unwrap();
        let ub = density_with(&b, 256.0, DensityMode::Upper, Exec::Sequential).unwrap();
        assert_eq!(ua.extremal_counts, ub.extremal_counts);
    }

    #[test]
    fn radius_precondition() {
        assert!(upper_density(&Generator::integers(), 5.0).is_err());
    }

    #[test]
    fn csv_columns() {
        let e = upper_density(&Generator::integers(), 64.0).unwrap();
        let csv = e.to_csv();
        assert!(csv.starts_with("r,extremal_count,estimate\n"));
        assert_eq!(csv.lines().count(), e.radii.len() + 1);
    }
}
