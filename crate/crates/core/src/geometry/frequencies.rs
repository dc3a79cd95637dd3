use serde::{Deserialize, Serialize};

use crate::constructions::sequences::NamedSequence;
use crate::constructions::snap::snap_point;
use crate::error::{Error, Result};

/// Relative slack allowed when checking separations and lattice membership.
const LATTICE_TOLERANCE: f64 = 1e-9;

/// A finite, sorted, uniformly discrete set of frequencies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencySet {
    points: Vec<f64>,
    separation: f64,
}

impl FrequencySet {
    /// Sorts `points` and checks that consecutive gaps are at least `separation`.
    pub fn new(mut points: Vec<f64>, separation: f64) -> Result<Self> {
        if !(separation > 0.0 && separation.is_finite()) {
            return Err(Error::param("separation", format!("must be positive and finite, got {separation}")));
        }
        if let Some(bad) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::param("points", format!("non-finite frequency {bad}")));
        }
        points.sort_by(f64::total_cmp);
        for w in points.windows(2) {
            if w[1] - w[0] < separation * (1.0 - LATTICE_TOLERANCE) {
                return Err(Error::NotSeparated {
                    a: w[0],
                    b: w[1],
                    separation,
                });
            }
        }
        Ok(FrequencySet { points, separation })
    }

    /// Uses the smallest consecutive gap as the separation constant.
    pub fn with_min_gap(mut points: Vec<f64>) -> Result<Self> {
        points.sort_by(f64::total_cmp);
        let gap = min_gap(&points).ok_or_else(|| {
            Error::param("points", "at least two distinct points are needed to infer a separation")
        })?;
        if gap <= 0.0 {
            return Err(Error::param("points", "frequencies must be pairwise distinct"));
        }
        Self::new(points, gap)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, point: f64) -> Option<usize> {
        let tol = self.separation * LATTICE_TOLERANCE;
        self.points.iter().position(|&p| (p - point).abs() <= tol)
    }

    pub fn contains(&self, point: f64) -> bool {
        self.index_of(point).is_some()
    }

    pub fn negated(&self) -> FrequencySet {
        let mut points: Vec<f64> = self.points.iter().map(|p| -p).collect();
        points.reverse();
        FrequencySet {
            points,
            separation: self.separation,
        }
    }

    pub fn into_points(self) -> Vec<f64> {
        self.points
    }
}

fn min_gap(sorted: &[f64]) -> Option<f64> {
    sorted.windows(2).map(|w| w[1] - w[0]).min_by(f64::total_cmp)
}

/// Index `k` with `point = k * step`, if `point` lies on the lattice.
pub(crate) fn lattice_index(point: f64, step: f64) -> Option<i64> {
    let k = (point / step).round();
    if (point - k * step).abs() <= LATTICE_TOLERANCE * step.max(1.0) {
        Some(k as i64)
    } else {
        None
    }
}

/// Integer range `k` with `lo <= offset + k * step <= hi`.
fn lattice_range(step: f64, offset: f64, lo: f64, hi: f64) -> std::ops::RangeInclusive<i64> {
    let first = ((lo - offset) / step - LATTICE_TOLERANCE).ceil() as i64;
    let last = ((hi - offset) / step + LATTICE_TOLERANCE).floor() as i64;
    first..=last
}

/// `(ηZ ∩ [lo, hi]) \ window`, for a window lying on `ηZ`.
pub fn lattice_complement(window: &FrequencySet, eta: f64, lo: f64, hi: f64) -> Result<FrequencySet> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::param("eta", format!("must be positive, got {eta}")));
    }
    let mut taken = std::collections::BTreeSet::new();
    for &p in window.points() {
        let k = lattice_index(p, eta).ok_or(Error::OffLattice { point: p, step: eta })?;
        taken.insert(k);
    }
    let points = lattice_range(eta, 0.0, lo, hi)
        .filter(|k| !taken.contains(k))
        .map(|k| k as f64 * eta)
        .collect();
    FrequencySet::new(points, eta)
}

/// An enumerable, possibly infinite, uniformly discrete frequency sequence.
///
/// JSON form is tagged by `kind`, e.g. `{"kind":"lattice","step":0.5}` or
/// `{"kind":"named","name":"odd_even_zero"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    /// `step * Z + offset`.
    Lattice {
        step: f64,
        #[serde(default)]
        offset: f64,
    },
    /// An explicit finite list.
    List {
        points: Vec<f64>,
        #[serde(default)]
        separation: Option<f64>,
    },
    /// A named sequence built from integers; `integer_complement` needs `of`.
    Named {
        name: NamedSequence,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        of: Option<Box<Generator>>,
    },
    Union { parts: Vec<Generator> },
    /// `base` with finitely many points removed.
    Without { base: Box<Generator>, removed: Vec<f64> },
    /// Every point of `base` moved to its nearest point of `eta * Z`.
    Snapped { base: Box<Generator>, eta: f64 },
    /// `eta * Z` minus the snapped copy of `base`.
    LatticeComplement { base: Box<Generator>, eta: f64 },
}

impl Generator {
    pub fn lattice(step: f64) -> Self {
        Generator::Lattice { step, offset: 0.0 }
    }

    pub fn integers() -> Self {
        Self::lattice(1.0)
    }

    pub fn list(points: Vec<f64>) -> Self {
        Generator::List {
            points,
            separation: None,
        }
    }

    pub fn named(name: NamedSequence) -> Self {
        Generator::Named { name, of: None }
    }

    /// `Z \ base` for a base sequence of integers.
    pub fn integer_complement(base: Generator) -> Self {
        Generator::Named {
            name: NamedSequence::IntegerComplement,
            of: Some(Box::new(base)),
        }
    }

    pub fn snapped(base: Generator, eta: f64) -> Self {
        Generator::Snapped {
            base: Box::new(base),
            eta,
        }
    }

    pub fn lattice_complement_of(base: Generator, eta: f64) -> Self {
        Generator::LatticeComplement {
            base: Box::new(base),
            eta,
        }
    }

    /// Separation constant of the whole sequence.
    pub fn separation(&self) -> Result<f64> {
        match self {
            Generator::Lattice { step, .. } => {
                if *step > 0.0 && step.is_finite() {
                    Ok(*step)
                } else {
                    Err(Error::param("step", format!("lattice step must be positive, got {step}")))
                }
            }
            Generator::List { points, separation } => match separation {
                Some(s) => Ok(*s),
                None => {
                    let mut p = points.clone();
                    p.sort_by(f64::total_cmp);
                    Ok(min_gap(&p).unwrap_or(1.0))
                }
            },
            Generator::Named { .. } => Ok(1.0),
            Generator::Union { parts } => {
                if parts.is_empty() {
                    return Err(Error::param("parts", "union of nothing"));
                }
                // Parts are assumed translation-periodic, so a window a few
                // periods wide around the origin sees every gap.
                let scale = parts
                    .iter()
                    .map(Generator::separation)
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .fold(1.0_f64, f64::max);
                let pts = self.raw_points(-32.0 * scale, 32.0 * scale)?;
                min_gap(&pts).ok_or(Error::EmptyFrequencySet)
            }
            Generator::Without { base, .. } => base.separation(),
            Generator::Snapped { base, eta } => {
                let delta = base.separation()?;
                check_snap_step(*eta, delta)?;
                Ok(delta - eta)
            }
            Generator::LatticeComplement { base, eta } => {
                check_snap_step(*eta, base.separation()?)?;
                Ok(*eta)
            }
        }
    }

    /// The sorted points in `[lo, hi]`, without wrapping them in a set.
    fn raw_points(&self, lo: f64, hi: f64) -> Result<Vec<f64>> {
        if !(lo <= hi) {
            return Err(Error::param("window", format!("empty or invalid range [{lo}, {hi}]")));
        }
        let mut pts = match self {
            Generator::Lattice { step, offset } => {
                self.separation()?;
                lattice_range(*step, *offset, lo, hi)
                    .map(|k| offset + k as f64 * step)
                    .collect()
            }
            Generator::List { points, .. } => points.iter().copied().filter(|p| *p >= lo && *p <= hi).collect(),
            Generator::Named { name, of } => name.points(of.as_deref(), lo, hi)?,
            Generator::Union { parts } => {
                let mut all = Vec::new();
                for part in parts {
                    all.extend(part.raw_points(lo, hi)?);
                }
                all.sort_by(f64::total_cmp);
                all.dedup_by(|a, b| (*a - *b).abs() <= LATTICE_TOLERANCE);
                all
            }
            Generator::Without { base, removed } => base
                .raw_points(lo, hi)?
                .into_iter()
                .filter(|p| !removed.iter().any(|r| (r - p).abs() <= LATTICE_TOLERANCE))
                .collect(),
            Generator::Snapped { base, eta } => {
                check_snap_step(*eta, base.separation()?)?;
                base.raw_points(lo - eta, hi + eta)?
                    .into_iter()
                    .map(|p| snap_point(p, *eta))
                    .filter(|p| *p >= lo - LATTICE_TOLERANCE * eta && *p <= hi + LATTICE_TOLERANCE * eta)
                    .collect()
            }
            Generator::LatticeComplement { base, eta } => {
                let snapped = Generator::Snapped {
                    base: base.clone(),
                    eta: *eta,
                }
                .raw_points(lo, hi)?;
                let taken: std::collections::BTreeSet<i64> =
                    snapped.iter().filter_map(|p| lattice_index(*p, *eta)).collect();
                lattice_range(*eta, 0.0, lo, hi)
                    .filter(|k| !taken.contains(k))
                    .map(|k| k as f64 * eta)
                    .collect()
            }
        };
        pts.sort_by(f64::total_cmp);
        Ok(pts)
    }

    /// `Λ ∩ [lo, hi]` together with the generator's separation constant.
    /// An empty window is legal and comes back as an empty set.
    pub fn window(&self, lo: f64, hi: f64) -> Result<FrequencySet> {
        let separation = self.separation()?;
        FrequencySet::new(self.raw_points(lo, hi)?, separation)
    }

    /// Symmetric window `Λ ∩ [-radius, radius]`.
    pub fn symmetric_window(&self, radius: f64) -> Result<FrequencySet> {
        self.window(-radius, radius)
    }

    /// True if every point is an integer (checked on a window around zero).
    pub fn is_integer_valued(&self, radius: f64) -> Result<bool> {
        Ok(self
            .raw_points(-radius, radius)?
            .iter()
            .all(|p| lattice_index(*p, 1.0).is_some()))
    }
}

fn check_snap_step(eta: f64, delta: f64) -> Result<()> {
    if !(eta > 0.0 && eta <= (delta / 3.0).min(1.0) * (1.0 + LATTICE_TOLERANCE)) {
        return Err(Error::Hypothesis(format!(
            "lattice step eta = {eta} must satisfy 0 < eta <= min(delta/3, 1) with delta = {delta}"
        )));
    }
    Ok(())
}
