use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::FrequencySet;

/// Nearest point of `eta * Z`, ties broken toward `-inf`.
pub fn snap_point(x: f64, eta: f64) -> f64 {
    (x / eta - 0.5).ceil() * eta
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnappedSet {
    pub set: FrequencySet,
    /// `|ρ_λ - λ|`, in the order of the input points.
    pub displacements: Vec<f64>,
}

impl SnappedSet {
    pub fn max_displacement(&self) -> f64 {
        self.displacements.iter().copied().fold(0.0, f64::max)
    }
}

/// Moves every frequency to its nearest point of `eta * Z`.
///
/// Requires `0 < eta <= min(δ/3, 1)`, which keeps the images distinct.
pub fn snap_to_lattice(set: &FrequencySet, eta: f64) -> Result<SnappedSet> {
    let delta = set.separation();
    if !(eta > 0.0 && eta <= (delta / 3.0).min(1.0) * (1.0 + 1e-12)) {
        return Err(Error::Hypothesis(format!(
            "eta = {eta} exceeds min(delta/3, 1) = {}",
            (delta / 3.0).min(1.0)
        )));
    }
    let images: Vec<f64> = set.points().iter().map(|&p| snap_point(p, eta)).collect();
    let displacements = set.points().iter().zip(&images).map(|(p, r)| (p - r).abs()).collect();
    if images.windows(2).any(|w| w[1] - w[0] < 0.5 * eta) {
        return Err(Error::Numerical("two frequencies snapped to the same lattice point".into()));
    }
    Ok(SnappedSet {
        set: FrequencySet::new(images, delta - eta)?,
        displacements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_are_fixed() {
        let z = FrequencySet::new((-5..=5).map(f64::from).collect(), 1.0).unwrap();
        let s = snap_to_lattice(&z, 0.25).unwrap();
        assert_eq!(s.set.points(), z.points());
        assert_eq!(s.max_displacement(), 0.0);
    }

    #[test]
    fn nearest_multiple() {
        let l = FrequencySet::with_min_gap(vec![0.0, 1.1, 2.6]).unwrap();
        let s = snap_to_lattice(&l, 0.25).unwrap();
        assert_eq!(s.set.points(), &[0.0, 1.0, 2.5]);
        for (got, want) in s.displacements.iter().zip([0.0, 0.1, 0.1]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(s.max_displacement() <= 0.125 + 1e-12);
    }

    #[test]
    fn ties_go_down() {
        assert_eq!(snap_point(0.125, 0.25), 0.0);
        assert_eq!(snap_point(-0.125, 0.25), -0.25);
    }

    #[test]
    fn step_too_large() {
        let l = FrequencySet::new(vec![0.0, 0.3], 0.3).unwrap();
        assert!(matches!(snap_to_lattice(&l, 0.2), Err(Error::Hypothesis(_))));
    }
}
