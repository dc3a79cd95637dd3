use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Generator;

/// Integer sequences used as standard test cases.
///
/// * `OddEven`: negative odd integers together with positive even integers,
///   `{..., -5, -3, -1, 2, 4, 6, ...}`. Uniformly minimal but not a Riesz
///   sequence on `[0, 1/2]`.
/// * `OddEvenZero`: the same with `0` added. Uniformly complete but not a
///   frame on `[0, 1/2]`.
/// * `NegOddEvenZero`: the reflection of `OddEvenZero`.
/// * `IntegerComplement`: `Z` minus another integer sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedSequence {
    OddEven,
    OddEvenZero,
    NegOddEvenZero,
    IntegerComplement,
}

impl NamedSequence {
    pub fn parse(name: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(name.to_owned()))
            .map_err(|_| Error::UnknownName(name.to_owned()))
    }

    fn contains(self, k: i64) -> bool {
        let odd = k.rem_euclid(2) == 1;
        match self {
            NamedSequence::OddEven => (k < 0 && odd) || (k > 0 && !odd),
            NamedSequence::OddEvenZero => k == 0 || NamedSequence::OddEven.contains(k),
            NamedSequence::NegOddEvenZero => NamedSequence::OddEvenZero.contains(-k),
            NamedSequence::IntegerComplement => unreachable!("complement is resolved against its base"),
        }
    }

    pub(crate) fn points(self, of: Option<&Generator>, lo: f64, hi: f64) -> Result<Vec<f64>> {
        let range = (lo.ceil() as i64)..=(hi.floor() as i64);
        match self {
            NamedSequence::IntegerComplement => {
                let base = of.ok_or_else(|| Error::param("of", "integer_complement needs a base sequence"))?;
                let taken = base.window(lo, hi)?;
                if let Some(p) = taken.points().iter().find(|p| p.fract() != 0.0) {
                    return Err(Error::OffLattice { point: *p, step: 1.0 });
                }
                let taken: std::collections::BTreeSet<i64> = taken.points().iter().map(|p| *p as i64).collect();
                Ok(range.filter(|k| !taken.contains(k)).map(|k| k as f64).collect())
            }
            _ => {
                if of.is_some() {
                    return Err(Error::param("of", format!("{self:?} does not take a base sequence")));
                }
                Ok(range.filter(|&k| self.contains(k)).map(|k| k as f64).collect())
            }
        }
    }
}

/// Generator for a named sequence. `IntegerComplement` is built with
/// [`Generator::integer_complement`] instead, since it needs a base.
pub fn example_sequence(name: NamedSequence) -> Result<Generator> {
    match name {
        NamedSequence::IntegerComplement => Err(Error::param(
            "name",
            "integer_complement needs a base; use Generator::integer_complement",
        )),
        _ => Ok(Generator::named(name)),
    }
}
