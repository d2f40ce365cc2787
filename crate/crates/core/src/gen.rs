//! Seeded random instances for the property suites.
//!
//! Everything takes a caller-supplied `Rng`; the CLI drives these with
//! `ChaCha8Rng`, so a seed reproduces the same instances on every platform.

use num_traits::Signed;
use rand::seq::IndexedRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::rational::{self, rat, Rational};
use crate::rigidsurj::EARigidSurjection;
use crate::seqcore::{EPSeq, UPoint};
use crate::urysohn::FiniteMetricSpace;

/// The generator used throughout: ChaCha8 seeded from a `u64`, one stream per
/// suite.
pub fn suite_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Random `a/b` in `[0, 1]` with `b <= max_den`.
pub fn unit_rational<R: Rng>(rng: &mut R, max_den: i64) -> Rational {
    let den = rng.random_range(1..=max_den);
    rat(rng.random_range(0..=den), den)
}

pub fn signed_unit_rational<R: Rng>(rng: &mut R, max_den: i64) -> Rational {
    let den = rng.random_range(1..=max_den);
    rat(rng.random_range(-den..=den), den)
}

#[derive(Debug, Clone, Copy)]
pub struct SeqShape {
    pub max_transient: usize,
    pub max_period: usize,
    pub max_den: i64,
}

impl SeqShape {
    /// Transient ≤ 6, period ≤ 4, denominators ≤ 12.
    pub const STANDARD: SeqShape = SeqShape { max_transient: 6, max_period: 4, max_den: 12 };
}

/// Random U-point. Half of the entries repeat values from a four-element
/// palette drawn per point.
pub fn upoint<R: Rng>(rng: &mut R, shape: SeqShape) -> UPoint {
    let palette: Vec<Rational> = (0..4).map(|_| unit_rational(rng, shape.max_den)).collect();
    let draw = |rng: &mut R| {
        if rng.random_bool(0.5) {
            palette.choose(rng).unwrap().clone()
        } else {
            unit_rational(rng, shape.max_den)
        }
    };
    let t = rng.random_range(0..=shape.max_transient);
    let l = rng.random_range(1..=shape.max_period);
    let transient: Vec<Rational> = (0..t).map(|_| draw(rng)).collect();
    let mut period: Vec<Rational> = (0..l).map(|_| draw(rng)).collect();
    let z = rng.random_range(0..l);
    period[z] = rational::zero();
    UPoint::new(EPSeq::new(transient, period).expect("period is nonempty"))
        .expect("entries in [0, 1] with a zero in the period")
}

/// Random sequence with entries in `[-1, 1]`.
pub fn signed_seq<R: Rng>(rng: &mut R, shape: SeqShape) -> EPSeq {
    let t = rng.random_range(0..=shape.max_transient);
    let l = rng.random_range(1..=shape.max_period);
    let transient = (0..t).map(|_| signed_unit_rational(rng, shape.max_den)).collect();
    let period = (0..l).map(|_| signed_unit_rational(rng, shape.max_den)).collect();
    EPSeq::new(transient, period).expect("period is nonempty")
}

/// Extends a rigid prefix by `extra` random positions.
fn grow_rigid<R: Rng>(rng: &mut R, prefix: &mut Vec<usize>, extra: usize) {
    let mut next = prefix.iter().max().map_or(0, |m| m + 1);
    for _ in 0..extra {
        let v = if rng.random_bool(0.4) { next } else { rng.random_range(0..=next) };
        if v == next {
            next += 1;
        }
        prefix.push(v);
    }
}

/// Closes a rigid prefix with a random admissible affine tail.
fn close_rigid<R: Rng>(rng: &mut R, prefix: Vec<usize>) -> EARigidSurjection {
    let next = prefix.iter().max().map_or(0, |m| m + 1);
    let start = rng.random_range(0..=next);
    let c = prefix.len() - start.min(prefix.len());
    EARigidSurjection::new(prefix, c).expect("tail starts at or below the next fresh value")
}

/// Random eventually affine rigid surjection with prefix length ≤ `max_prefix`.
pub fn ea_rigid<R: Rng>(rng: &mut R, max_prefix: usize) -> EARigidSurjection {
    let mut prefix = Vec::new();
    let len = rng.random_range(0..=max_prefix);
    grow_rigid(rng, &mut prefix, len);
    close_rigid(rng, prefix)
}

/// A rigid `p`, a level `r`, the first index `n` with `p(n) = r`, and a `q`
/// agreeing with `p` on `[0, n]`.
pub fn agreeing_pair<R: Rng>(rng: &mut R) -> (EARigidSurjection, EARigidSurjection, usize, usize) {
    let p = ea_rigid(rng, 8);
    let r = rng.random_range(1..=4);
    let n = p.first_preimage(r);
    let mut prefix = p.values(n + 1);
    let extra = rng.random_range(0..=6);
    grow_rigid(rng, &mut prefix, extra);
    let q = close_rigid(rng, prefix);
    (p, q, r, n)
}

/// Finitely supported `a` with `|a(i)| <= 1`, support within 4 indices and one
/// entry equal to `±1`.
pub fn unit_sphere_finite<R: Rng>(rng: &mut R, max_len: usize, max_den: i64) -> EPSeq {
    let len = rng.random_range(1..=max_len);
    let mut values: Vec<Rational> = (0..len).map(|_| signed_unit_rational(rng, max_den)).collect();
    let peak = rng.random_range(0..len);
    values[peak] = if rng.random_bool(0.5) { rational::one() } else { -rational::one() };
    EPSeq::finite(values)
}

/// Nonnegative `a` with maximum 1 and offsets spaced at least `4k - 1` apart.
pub fn lemma_input<R: Rng>(rng: &mut R, k: usize, max_len: usize, max_den: i64) -> (EPSeq, Vec<usize>) {
    let a = unit_sphere_finite(rng, max_len, max_den).map(|q| q.abs());
    let mut offsets = Vec::with_capacity(a.transient().len());
    let mut at = rng.random_range(0..=5);
    for _ in 0..a.transient().len() {
        offsets.push(at);
        at += 4 * k - 1 + rng.random_range(0..=3);
    }
    (a, offsets)
}

/// Random metric space on up to `max_points` points with distances in
/// `(0, 1]` and denominators ≤ `max_den`, by rejection sampling.
#[allow(clippy::needless_range_loop)]
pub fn metric_space<R: Rng>(rng: &mut R, max_points: usize, max_den: i64) -> FiniteMetricSpace {
    let n = rng.random_range(1..=max_points);
    let names: Vec<String> = (0..n).map(|i| format!("P{i}")).collect();
    for _ in 0..500 {
        let mut d = vec![vec![rational::zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let den = rng.random_range(1..=max_den);
                let q = rat(rng.random_range(1..=den), den);
                d[i][j] = q.clone();
                d[j][i] = q;
            }
        }
        if let Ok(space) = FiniteMetricSpace::new(names.clone(), d) {
            return space;
        }
    }
    let d = (0..n).map(|i| (0..n).map(|j| if i == j { rational::zero() } else { rational::one() }).collect()).collect();
    FiniteMetricSpace::new(names, d).expect("equilateral space of diameter 1")
}
