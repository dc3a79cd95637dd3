use std::cmp::Ordering;
use std::fmt;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Adjacency tolerance used whenever a floating-point endpoint is involved.
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// An interval endpoint, exact when it was supplied as a rational.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Endpoint {
    Exact(Rational64),
    Float(f64),
}

impl Endpoint {
    pub fn value(&self) -> f64 {
        match self {
            Endpoint::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Endpoint::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<Rational64> {
        match self {
            Endpoint::Exact(r) => Some(*r),
            Endpoint::Float(_) => None,
        }
    }

    /// Total order with floats compared up to [`MERGE_TOLERANCE`].
    fn compare(&self, other: &Endpoint) -> Ordering {
        match (self, other) {
            (Endpoint::Exact(a), Endpoint::Exact(b)) => a.cmp(b),
            _ => {
                let (a, b) = (self.value(), other.value());
                if (a - b).abs() <= MERGE_TOLERANCE {
                    Ordering::Equal
                } else {
                    a.total_cmp(&b)
                }
            }
        }
    }

    fn sub(&self, other: &Endpoint) -> Endpoint {
        match (self, other) {
            (Endpoint::Exact(a), Endpoint::Exact(b)) => Endpoint::Exact(a - b),
            _ => Endpoint::Float(self.value() - other.value()),
        }
    }

    fn add(&self, other: &Endpoint) -> Endpoint {
        match (self, other) {
            (Endpoint::Exact(a), Endpoint::Exact(b)) => Endpoint::Exact(a + b),
            _ => Endpoint::Float(self.value() + other.value()),
        }
    }
}

impl From<f64> for Endpoint {
    fn from(x: f64) -> Self {
        Endpoint::Float(x)
    }
}

impl From<i64> for Endpoint {
    fn from(x: i64) -> Self {
        Endpoint::Exact(Rational64::from_integer(x))
    }
}

impl From<Rational64> for Endpoint {
    fn from(r: Rational64) -> Self {
        Endpoint::Exact(r)
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Exact(r) => write!(f, "{r}"),
            Endpoint::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Parses `"3"`, `"-1/7"` or a finite decimal such as `"0.125"` into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("`{s}` is not a rational number"));
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(num, den));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) || frac_part.len() > 15 {
        return Err(bad());
    }
    let den = 10i64.pow(frac_part.len() as u32);
    let digits = format!("{int_part}{frac_part}");
    let num: i64 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
    let r = Rational64::new(num, den);
    Ok(if negative { -r } else { r })
}

/// A closed interval `[left, right]` with `left < right`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub left: Endpoint,
    pub right: Endpoint,
}

impl Interval {
    pub fn new(left: impl Into<Endpoint>, right: impl Into<Endpoint>) -> Result<Self> {
        let (left, right) = (left.into(), right.into());
        if left.compare(&right) != Ordering::Less || !left.value().is_finite() || !right.value().is_finite() {
            return Err(Error::InvalidInterval {
                left: left.value(),
                right: right.value(),
            });
        }
        Ok(Interval { left, right })
    }

    pub fn length(&self) -> f64 {
        self.right.sub(&self.left).value()
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.left.value(), self.right.value())
    }

    fn contains_interval(&self, other: &Interval) -> bool {
        self.left.compare(&other.left) != Ordering::Greater && other.right.compare(&self.right) != Ordering::Greater
    }
}

/// A finite union of disjoint closed intervals of positive total measure.
///
/// Intervals are kept sorted; overlapping or touching pieces are merged at
/// construction, so two unions describing the same set compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
}

impl IntervalUnion {
    pub fn new(mut intervals: Vec<Interval>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::ZeroMeasure);
        }
        intervals.sort_by(|a, b| a.left.compare(&b.left));
        let mut merged: Vec<Interval> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                Some(last) if iv.left.compare(&last.right) != Ordering::Greater => {
                    if iv.right.compare(&last.right) == Ordering::Greater {
                        last.right = iv.right;
                    }
                }
                _ => merged.push(iv),
            }
        }
        Ok(IntervalUnion { intervals: merged })
    }

    /// Convenience constructor from floating-point pairs.
    pub fn from_f64(pairs: &[(f64, f64)]) -> Result<Self> {
        let ivs = pairs
            .iter()
            .map(|&(a, b)| Interval::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ivs)
    }

    /// Convenience constructor from exact rational pairs.
    pub fn from_rationals(pairs: &[(Rational64, Rational64)]) -> Result<Self> {
        let ivs = pairs
            .iter()
            .map(|&(a, b)| Interval::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ivs)
    }

    /// The single interval `[a, b]`.
    pub fn interval(a: impl Into<Endpoint>, b: impl Into<Endpoint>) -> Result<Self> {
        Self::new(vec![Interval::new(a, b)?])
    }

    /// The unit interval `[0, 1]`, exact.
    pub fn unit() -> Self {
        Self::interval(0i64, 1i64).expect("unit interval")
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn bounds(&self) -> Vec<(f64, f64)> {
        self.intervals.iter().map(Interval::bounds).collect()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        match self.exact_measure() {
            Some(m) => m.to_f64().unwrap_or(f64::NAN),
            None => self.intervals.iter().map(Interval::length).sum(),
        }
    }

    /// The measure as an exact rational when every endpoint is exact.
    pub fn exact_measure(&self) -> Option<Rational64> {
        self.intervals.iter().try_fold(Rational64::zero(), |acc, iv| {
            Some(acc + iv.right.exact()? - iv.left.exact()?)
        })
    }

    pub fn is_exact(&self) -> bool {
        self.exact_measure().is_some()
    }

    /// Smallest and largest point of the set.
    pub fn hull(&self) -> (f64, f64) {
        (
            self.intervals[0].left.value(),
            self.intervals[self.intervals.len() - 1].right.value(),
        )
    }

    pub fn is_subset_of(&self, ambient: &IntervalUnion) -> bool {
        self.intervals
            .iter()
            .all(|iv| ambient.intervals.iter().any(|a| a.contains_interval(iv)))
    }

    /// `S + t`.
    pub fn shifted(&self, t: impl Into<Endpoint>) -> IntervalUnion {
        let t = t.into();
        IntervalUnion {
            intervals: self
                .intervals
                .iter()
                .map(|iv| Interval {
                    left: iv.left.add(&t),
                    right: iv.right.add(&t),
                })
                .collect(),
        }
    }

    /// `ambient \ self`, taken as a union of closed intervals.
    pub fn complement_in(&self, ambient: &IntervalUnion) -> Result<IntervalUnion> {
        if let Some(iv) = self.intervals.iter().find(|iv| !ambient.intervals.iter().any(|a| a.contains_interval(iv))) {
            return Err(Error::NotContained {
                left: iv.left.value(),
                right: iv.right.value(),
            });
        }
        let mut pieces = Vec::new();
        for amb in &ambient.intervals {
            let mut cursor = amb.left;
            for iv in self.intervals.iter().filter(|iv| amb.contains_interval(iv)) {
                if cursor.compare(&iv.left) == Ordering::Less {
                    pieces.push(Interval {
                        left: cursor,
                        right: iv.left,
                    });
                }
                cursor = iv.right;
            }
            if cursor.compare(&amb.right) == Ordering::Less {
                pieces.push(Interval {
                    left: cursor,
                    right: amb.right,
                });
            }
        }
        IntervalUnion::new(pieces)
    }
}

/// Free-function form of [`IntervalUnion::complement_in`].
pub fn complement_in(ambient: &IntervalUnion, set: &IntervalUnion) -> Result<IntervalUnion> {
    set.complement_in(ambient)
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "[{}, {}]", iv.left, iv.right)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EndpointRepr {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<&Endpoint> for EndpointRepr {
    fn from(e: &Endpoint) -> Self {
        match e {
            Endpoint::Exact(r) if r.is_integer() => EndpointRepr::Int(*r.numer()),
            Endpoint::Exact(r) => EndpointRepr::Text(r.to_string()),
            Endpoint::Float(x) => EndpointRepr::Float(*x),
        }
    }
}

impl TryFrom<EndpointRepr> for Endpoint {
    type Error = Error;
    fn try_from(r: EndpointRepr) -> Result<Self> {
        Ok(match r {
            EndpointRepr::Int(i) => Endpoint::from(i),
            EndpointRepr::Float(x) => Endpoint::Float(x),
            EndpointRepr::Text(s) => Endpoint::Exact(parse_rational(&s)?),
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum UnionRepr {
    Object { intervals: Vec<(EndpointRepr, EndpointRepr)> },
    Bare(Vec<(EndpointRepr, EndpointRepr)>),
}

impl Serialize for IntervalUnion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        UnionRepr::Object {
            intervals: self
                .intervals
                .iter()
                .map(|iv| ((&iv.left).into(), (&iv.right).into()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntervalUnion {
    /// Accepts `{"intervals": [[a, b], ...]}` or the bare `[[a, b], ...]`.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let pairs = match UnionRepr::deserialize(deserializer)? {
            UnionRepr::Object { intervals } | UnionRepr::Bare(intervals) => intervals,
        };
        let ivs = pairs
            .into_iter()
            .map(|(a, b)| {
                let a = Endpoint::try_from(a)?;
                let b = Endpoint::try_from(b)?;
                Interval::new(a, b)
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        IntervalUnion::new(ivs).map_err(D::Error::custom)
    }
}
