//! Eventually periodic sequences of exact rationals.
//!
//! An [`EPSeq`] denotes `n ↦ transient[n]` for `n < transient.len()` and
//! `period[(n - transient.len()) % period.len()]` afterwards. Every value is
//! normalized on construction, so two sequences denote the same function iff
//! they compare equal.

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A natural number or the first infinite ordinal; every natural is below ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndexOrOmega {
    Finite(usize),
    Omega,
}

impl IndexOrOmega {
    pub fn finite(self) -> Option<usize> {
        match self {
            IndexOrOmega::Finite(n) => Some(n),
            IndexOrOmega::Omega => None,
        }
    }
}

impl fmt::Display for IndexOrOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexOrOmega::Finite(n) => write!(f, "{n}"),
            IndexOrOmega::Omega => f.write_str("omega"),
        }
    }
}

impl Serialize for IndexOrOmega {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            IndexOrOmega::Finite(n) => s.serialize_u64(*n as u64),
            IndexOrOmega::Omega => s.serialize_str("omega"),
        }
    }
}

impl<'de> Deserialize<'de> for IndexOrOmega {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) => Ok(IndexOrOmega::Finite(n as usize)),
            Raw::Word(w) if w == "omega" => Ok(IndexOrOmega::Omega),
            Raw::Word(w) => Err(serde::de::Error::custom(format!("expected a natural or \"omega\", got {w:?}"))),
        }
    }
}

#[derive(Deserialize)]
struct RawSeq {
    #[serde(with = "rational::serde_vec")]
    transient: Vec<Rational>,
    #[serde(with = "rational::serde_vec")]
    period: Vec<Rational>,
}

/// Eventually periodic sequence in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSeq")]
pub struct EPSeq {
    #[serde(with = "rational::serde_vec")]
    transient: Vec<Rational>,
    #[serde(with = "rational::serde_vec")]
    period: Vec<Rational>,
}

impl TryFrom<RawSeq> for EPSeq {
    type Error = Error;

    fn try_from(raw: RawSeq) -> Result<Self> {
        EPSeq::new(raw.transient, raw.period)
    }
}

impl fmt::Debug for EPSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[Rational]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "[{}]({})^ω", show(&self.transient), show(&self.period))
    }
}

/// Shortest `d` dividing `v.len()` with `v` invariant under rotation by `d`.
fn minimal_period(v: &[Rational]) -> usize {
    let n = v.len();
    (1..=n).filter(|d| n.is_multiple_of(*d)).find(|&d| (d..n).all(|i| v[i] == v[i - d])).unwrap_or(n)
}

impl EPSeq {
    /// Builds the canonical representative of the given data. Fails only on
    /// an empty period.
    pub fn new(mut transient: Vec<Rational>, mut period: Vec<Rational>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::domain("eventually periodic sequence needs a nonempty period"));
        }
        let d = minimal_period(&period);
        period.truncate(d);
        // Absorb transient entries that already agree with the periodic part.
        while transient.last().is_some_and(|t| t == period.last().unwrap()) {
            transient.pop();
            period.rotate_right(1);
        }
        Ok(EPSeq { transient, period })
    }

    pub fn constant(value: Rational) -> Self {
        EPSeq { transient: Vec::new(), period: vec![value] }
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    /// Finitely supported sequence `values` followed by zeros.
    pub fn finite(values: Vec<Rational>) -> Self {
        EPSeq::new(values, vec![Rational::zero()]).expect("period is nonempty")
    }

    pub fn transient(&self) -> &[Rational] {
        &self.transient
    }

    pub fn period(&self) -> &[Rational] {
        &self.period
    }

    /// `transient.len() + period.len()`: every value the sequence takes
    /// appears among the first `window_len()` entries.
    pub fn window_len(&self) -> usize {
        self.transient.len() + self.period.len()
    }

    pub fn entry(&self, n: usize) -> &Rational {
        match self.transient.get(n) {
            Some(q) => q,
            None => &self.period[(n - self.transient.len()) % self.period.len()],
        }
    }

    pub fn prefix(&self, len: usize) -> Vec<Rational> {
        (0..len).map(|n| self.entry(n).clone()).collect()
    }

    /// All distinct positions' values: transient followed by one period.
    pub fn window(&self) -> impl Iterator<Item = &Rational> {
        self.transient.iter().chain(self.period.iter())
    }

    pub fn is_finitely_supported(&self) -> bool {
        self.period.len() == 1 && self.period[0].is_zero()
    }

    pub fn sup_abs(&self) -> Rational {
        self.window().map(|q| q.abs()).max().expect("period is nonempty")
    }

    pub fn max_entry(&self) -> Rational {
        self.window().max().cloned().expect("period is nonempty")
    }

    pub fn min_entry(&self) -> Rational {
        self.window().min().cloned().expect("period is nonempty")
    }

    /// Smallest value taken infinitely often, i.e. the liminf.
    pub fn min_period(&self) -> Rational {
        self.period.iter().min().cloned().expect("period is nonempty")
    }

    /// Entrywise image under `f`.
    pub fn map<F>(&self, mut f: F) -> Self
    where
        F: FnMut(&Rational) -> Rational,
    {
        let transient = self.transient.iter().map(&mut f).collect();
        let period = self.period.iter().map(&mut f).collect();
        EPSeq::new(transient, period).expect("period is nonempty")
    }

    /// Entrywise `alpha * x + beta * y`.
    pub fn add_scaled(x: &EPSeq, y: &EPSeq, alpha: &Rational, beta: &Rational) -> EPSeq {
        Self::zip_with(x, y, |a, b| alpha * a + beta * b)
    }

    /// Entrywise combination on a common transient length and lcm period.
    pub fn zip_with<F>(x: &EPSeq, y: &EPSeq, mut f: F) -> EPSeq
    where
        F: FnMut(&Rational, &Rational) -> Rational,
    {
        let t = x.transient.len().max(y.transient.len());
        let l = x.period.len().lcm(&y.period.len());
        let transient = (0..t).map(|n| f(x.entry(n), y.entry(n))).collect();
        let period = (t..t + l).map(|n| f(x.entry(n), y.entry(n))).collect();
        EPSeq::new(transient, period).expect("lcm period is nonempty")
    }

    pub fn add(&self, other: &EPSeq) -> EPSeq {
        Self::zip_with(self, other, |a, b| a + b)
    }

    pub fn sub(&self, other: &EPSeq) -> EPSeq {
        Self::zip_with(self, other, |a, b| a - b)
    }

    pub fn scale(&self, alpha: &Rational) -> EPSeq {
        self.map(|q| alpha * q)
    }

    pub fn neg(&self) -> EPSeq {
        self.map(|q| -q)
    }

    /// `S^j(x)`: `j` leading zeros, then `x`.
    pub fn shift(&self, j: usize) -> EPSeq {
        let mut transient = vec![Rational::zero(); j];
        transient.extend(self.transient.iter().cloned());
        EPSeq::new(transient, self.period.clone()).expect("period is nonempty")
    }

    /// `sup_abs(self - other)`.
    pub fn sup_distance(&self, other: &EPSeq) -> Rational {
        self.sub(other).sup_abs()
    }

    /// Length after which the pair `(self, other)` is jointly periodic, plus
    /// one joint period: every pair of values the two sequences take at a
    /// common index appears below this bound.
    pub fn joint_window(&self, other: &EPSeq) -> usize {
        self.transient.len().max(other.transient.len()) + self.period.len().lcm(&other.period.len())
    }
}

/// A point of the sequence model of the Urysohn sphere: entries in `[0, 1]`
/// and liminf 0, which for eventually periodic data means the period
/// contains a zero.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "EPSeq", into = "EPSeq")]
pub struct UPoint(EPSeq);

impl TryFrom<EPSeq> for UPoint {
    type Error = Error;

    fn try_from(seq: EPSeq) -> Result<Self> {
        UPoint::new(seq)
    }
}

impl From<UPoint> for EPSeq {
    fn from(u: UPoint) -> EPSeq {
        u.0
    }
}

impl fmt::Debug for UPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl UPoint {
    pub fn new(seq: EPSeq) -> Result<Self> {
        if seq.min_entry().is_negative() || seq.max_entry() > rational::one() {
            return Err(Error::domain("U-point entries must lie in [0, 1]"));
        }
        if !seq.min_period().is_zero() {
            return Err(Error::domain("U-point must have liminf 0 (a zero in its period)"));
        }
        Ok(UPoint(seq))
    }

    pub fn zero() -> Self {
        UPoint(EPSeq::zero())
    }

    pub fn seq(&self) -> &EPSeq {
        &self.0
    }

    pub fn entry(&self, n: usize) -> &Rational {
        self.0.entry(n)
    }

    pub fn into_seq(self) -> EPSeq {
        self.0
    }
}
