//! A sequence model of the Urysohn sphere.
//!
//! Points are `[0, 1]`-valued sequences with liminf 0. For a pair `x, y`,
//! `m(n)` is the running sup of `|x(k) - y(k)|` and `M(n)` the running inf of
//! `x(k) + y(k)` over `k <= n`. `m` climbs, `M` descends, `m(0) <= M(0)` and
//! `M(ω) <= m(ω)`, so the two curves cross. The distance is read off at the
//! first index `n` where `M(n) <= m(n)`:
//!
//! * if `m(n) = M(n)` that common value is the distance;
//! * otherwise exactly one of `m`, `M` was flat across the step `n-1 → n`,
//!   and its value there is the distance.
//!
//! Rigid surjections act on the right by precomposition and preserve the
//! distance.

mod embed;

pub use embed::{embed_metric, EmbeddedPoint, EmbeddingReport, FiniteMetricSpace};

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, rat, Rational};
use crate::rigidsurj::{apply_u, EARigidSurjection};
use crate::seqcore::{EPSeq, IndexOrOmega, UPoint};

/// `m(x, y, n)` and `M(x, y, n)` at one index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixBounds {
    #[serde(rename = "m", with = "rational::serde_str")]
    pub m_val: Rational,
    #[serde(rename = "M", with = "rational::serde_str")]
    pub big_m_val: Rational,
    pub n: IndexOrOmega,
}

/// Running `(m, M)` for `n = 0, 1, …, len - 1`.
fn bound_profile(x: &UPoint, y: &UPoint, len: usize) -> Vec<(Rational, Rational)> {
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(len);
    for k in 0..len {
        let (a, b) = (x.entry(k), y.entry(k));
        let diff = (a - b).abs();
        let sum = a + b;
        let next = match out.last() {
            None => (diff, sum),
            Some((m, big_m)) => (m.clone().max(diff), big_m.clone().min(sum)),
        };
        out.push(next);
    }
    out
}

/// Beyond `joint_window - 1` both running bounds are constant.
fn stable_len(x: &UPoint, y: &UPoint) -> usize {
    x.seq().joint_window(y.seq())
}

pub fn prefix_bounds(x: &UPoint, y: &UPoint, n: IndexOrOmega) -> PrefixBounds {
    let w = stable_len(x, y);
    let last = match n {
        IndexOrOmega::Finite(n) => n.min(w - 1),
        IndexOrOmega::Omega => w - 1,
    };
    let (m_val, big_m_val) = bound_profile(x, y, last + 1).pop().expect("profile is nonempty");
    PrefixBounds { m_val, big_m_val, n }
}

/// `(m(t), M(t))` for the extensions that are affine on each `[n, n+1]`.
pub fn affine_bounds_at(x: &UPoint, y: &UPoint, t: &Rational) -> Result<(Rational, Rational)> {
    if t.is_negative() {
        return Err(Error::domain("the affine extension is defined for t >= 0"));
    }
    let floor =
        rational::to_usize(&t.floor().to_integer()).ok_or_else(|| Error::domain(format!("t = {t} is out of range")))?;
    let frac = t - Rational::from_integer(floor.into());
    let lo = prefix_bounds(x, y, IndexOrOmega::Finite(floor));
    if frac.is_zero() {
        return Ok((lo.m_val, lo.big_m_val));
    }
    let hi = prefix_bounds(x, y, IndexOrOmega::Finite(floor + 1));
    let lerp = |a: &Rational, b: &Rational| a + &frac * (b - a);
    Ok((lerp(&lo.m_val, &hi.m_val), lerp(&lo.big_m_val, &hi.big_m_val)))
}

/// Least `n` with `M(x, y, n) <= m(x, y, n)`.
///
/// Always finite for eventually periodic points: both bounds are frozen from
/// the joint window on, and there `M <= m`.
pub fn crossing_index(x: &UPoint, y: &UPoint) -> IndexOrOmega {
    bound_profile(x, y, stable_len(x, y))
        .iter()
        .position(|(m, big_m)| big_m <= m)
        .map_or(IndexOrOmega::Omega, IndexOrOmega::Finite)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "equal")]
    Equal,
    #[serde(rename = "m_constant")]
    MConstant,
    #[serde(rename = "M_constant")]
    BigMConstant,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::Equal => "equal",
            CaseTag::MConstant => "m_constant",
            CaseTag::BigMConstant => "M_constant",
        })
    }
}

/// The distance together with how it was obtained.
///
/// `witness_t` is a point where the affine extensions of `m` and `M` both
/// equal `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceResult {
    #[serde(with = "rational::serde_str")]
    pub d: Rational,
    pub crossing: IndexOrOmega,
    #[serde(rename = "case")]
    pub case_tag: CaseTag,
    #[serde(with = "rational::serde_str")]
    pub witness_t: Rational,
}

pub fn try_dist(x: &UPoint, y: &UPoint) -> Result<DistanceResult> {
    let profile = bound_profile(x, y, stable_len(x, y));
    let n = profile
        .iter()
        .position(|(m, big_m)| big_m <= m)
        .ok_or_else(|| Error::invariant("running bounds never cross inside the joint window"))?;
    let crossing = IndexOrOmega::Finite(n);
    let (m_n, big_m_n) = &profile[n];
    if m_n == big_m_n {
        return Ok(DistanceResult {
            d: m_n.clone(),
            crossing,
            case_tag: CaseTag::Equal,
            witness_t: Rational::from_integer(n.into()),
        });
    }
    // m(0) <= M(0), so a strict crossing happens at some n = k + 1.
    let k = n.checked_sub(1).ok_or_else(|| Error::invariant("strict crossing at index 0"))?;
    let (m_k, big_m_k) = &profile[k];
    let base = Rational::from_integer(k.into());
    if m_k == m_n {
        let d = m_k.clone();
        let witness_t = base + (big_m_k - &d) / (big_m_k - big_m_n);
        Ok(DistanceResult { d, crossing, case_tag: CaseTag::MConstant, witness_t })
    } else if big_m_k == big_m_n {
        let d = big_m_k.clone();
        let witness_t = base + (&d - m_k) / (m_n - m_k);
        Ok(DistanceResult { d, crossing, case_tag: CaseTag::BigMConstant, witness_t })
    } else {
        Err(Error::invariant(format!("both m and M move across step {k} -> {n}")))
    }
}

/// The pseudometric on U-points.
pub fn dist(x: &UPoint, y: &UPoint) -> DistanceResult {
    try_dist(x, y).expect("eventually periodic U-points always have a finite crossing")
}

/// `w_r = (1, (r-1)/r, …, 1/r, 0, 0, …)`.
pub fn make_wr(r: usize) -> Result<UPoint> {
    if r == 0 {
        return Err(Error::domain("w_r needs r >= 1"));
    }
    let rr = r as i64;
    let values = (0..rr).map(|n| rat(rr - n, rr)).collect();
    UPoint::new(EPSeq::finite(values))
}

/// A rigid surjection `p` placing `w_r ∘ p` within `1/2r` of a given point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitProjection {
    pub p: EARigidSurjection,
    /// First index where the target drops to `1/2r` or below.
    pub n0: usize,
    #[serde(with = "rational::serde_str")]
    pub distance: Rational,
}

/// Buckets `y` onto the levels of `w_r` up to the first index `n0` with
/// `y(n0) <= 1/2r`, then continues affinely with `p(n) = n - n0 + r`.
///
/// Requires `y(0) = 1` and consecutive entries at most `1/r` apart.
pub fn orbit_projection(y: &UPoint, r: usize) -> Result<OrbitProjection> {
    let wr = make_wr(r)?;
    let rr = r as i64;
    if *y.entry(0) != rational::one() {
        return Err(Error::domain(format!("orbit projection needs y(0) = 1, got {}", y.entry(0))));
    }
    let step = rat(1, rr);
    if let Some(n) = (0..y.seq().window_len()).find(|&n| (y.entry(n + 1) - y.entry(n)).abs() > step) {
        return Err(Error::domain(format!("orbit projection needs |y(n+1) - y(n)| <= 1/{r}; fails at n = {n}")));
    }
    let half = rat(1, 2 * rr);
    let n0 = (0..y.seq().window_len())
        .find(|&n| *y.entry(n) <= half)
        .ok_or_else(|| Error::domain(format!("y never drops to 1/{}", 2 * r)))?;
    let two_r = rational::int(2 * rr);
    let prefix = (0..n0)
        .map(|n| {
            // y(n) in ((2j-1)/2r, (2j+1)/2r]  <=>  j = ceil((2r y(n) - 1) / 2)
            let j = rational::ceil_int(&((&two_r * y.entry(n) - rational::one()) / rational::int(2)));
            r - rational::to_usize(&j).expect("bucket index lies in [0, r]")
        })
        .collect();
    let tail_offset =
        n0.checked_sub(r).ok_or_else(|| Error::domain(format!("y drops to 1/{} before index {r}", 2 * r)))?;
    let p = EARigidSurjection::new(prefix, tail_offset)
        .map_err(|e| Error::domain(format!("bucketing does not give a rigid surjection: {e}")))?;
    let distance = dist(&apply_u(&wr, &p), y).d;
    Ok(OrbitProjection { p, n0, distance })
}

/// Largest pairwise distance in a nonempty sample.
pub fn oscillation(points: &[UPoint]) -> Result<Rational> {
    if points.is_empty() {
        return Err(Error::domain("oscillation of an empty sample is undefined"));
    }
    let mut best = rational::zero();
    for (i, x) in points.iter().enumerate() {
        for y in &points[i + 1..] {
            best = best.max(dist(x, y).d);
        }
    }
    Ok(best)
}
