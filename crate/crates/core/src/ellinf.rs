//! Orbit approximation in ℓ∞ under precomposition by rigid surjections.
//!
//! The staircase vector `x_k` has the property that the orbit
//! `{x_k ∘ p : p rigid}` comes within `2/k` of every unit vector in the image
//! of the isometric embedding `T(a) = Σ a(i) S^{4ki}(x_k)`. This module builds
//! `x_k`, the rounding map used to snap a vector onto that orbit, the rigid
//! surjection realizing the snap, and exact certificates for the distances.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, int, rat, Rational};
use crate::rigidsurj::{apply, EARigidSurjection};
use crate::seqcore::EPSeq;

/// The vector
/// `(0, 1/k, -1/k, …, (k-1)/k, -(k-1)/k, 1, -1, (k-1)/k, -(k-1)/k, …, 1/k, -1/k, 0, 0, …)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XkVector {
    k: usize,
    seq: EPSeq,
}

impl XkVector {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("x_k needs k >= 1"));
        }
        let kk = k as i64;
        let mut values = vec![rational::zero()];
        let ladder = (1..kk).chain(std::iter::once(kk)).chain((1..kk).rev());
        for j in ladder {
            values.push(rat(j, kk));
            values.push(rat(-j, kk));
        }
        debug_assert_eq!(values.len(), 4 * k - 1);
        Ok(XkVector { k, seq: EPSeq::finite(values) })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seq(&self) -> &EPSeq {
        &self.seq
    }

    pub fn entry(&self, n: usize) -> &Rational {
        self.seq.entry(n)
    }

    /// First and last index of the support, `⟦1, 4k-2⟧`.
    pub fn support(&self) -> (usize, usize) {
        (1, 4 * self.k - 2)
    }
}

pub fn make_xk(k: usize) -> Result<XkVector> {
    XkVector::new(k)
}

/// The step rounding `h` on `[-1, 1]`: 0 on `[-1/2k, 1/2k]`, `(l+1)/k` on
/// `((2l+1)/2k, (2l+3)/2k]` and the mirror image below zero.
pub fn round_h(u: &Rational, k: usize) -> Result<Rational> {
    if k == 0 {
        return Err(Error::domain("h needs k >= 1"));
    }
    if u.abs() > rational::one() {
        return Err(Error::domain(format!("h is defined on [-1, 1], got {u}")));
    }
    let two_k = int(2 * k as i64);
    let t = u.abs() * &two_k;
    if t <= rational::one() {
        return Ok(rational::zero());
    }
    // t in (2l+1, 2l+3]  <=>  l = ceil((t - 3) / 2)
    let l = rational::ceil_int(&((t - int(3)) / int(2)));
    let mag = Rational::new(l + 1, (k as i64).into());
    Ok(if u.is_negative() { -mag } else { mag })
}

/// A rigid surjection together with the exact sup distance it achieves and
/// the bound being certified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproximationCertificate {
    pub p: EARigidSurjection,
    #[serde(with = "rational::serde_str")]
    pub distance: Rational,
    #[serde(with = "rational::serde_str")]
    pub bound: Rational,
}

impl ApproximationCertificate {
    pub fn holds(&self) -> bool {
        self.distance <= self.bound
    }
}

fn require_finitely_supported(a: &EPSeq) -> Result<()> {
    if !a.is_finitely_supported() {
        return Err(Error::domain("a must be finitely supported (period [0])"));
    }
    Ok(())
}

/// `Σ a(i) S^{offsets[i]}(x_k)` over the transient of `a`.
pub fn lemma_vector(a: &EPSeq, offsets: &[usize], xk: &XkVector) -> EPSeq {
    a.transient()
        .iter()
        .zip(offsets)
        .filter(|(ai, _)| !ai.is_zero())
        .fold(EPSeq::zero(), |acc, (ai, &n)| acc.add(&xk.seq.shift(n).scale(ai)))
}

fn check_lemma_input(a: &EPSeq, offsets: &[usize], k: usize) -> Result<()> {
    require_finitely_supported(a)?;
    if let Some(i) = a.transient().iter().position(|q| q.is_negative()) {
        return Err(Error::domain(format!("a({i}) is negative; entries must be >= 0")));
    }
    if a.sup_abs() != rational::one() {
        return Err(Error::domain(format!("sup of a must be 1 and attained, got {}", a.sup_abs())));
    }
    if offsets.len() != a.transient().len() {
        return Err(Error::domain(format!(
            "need one offset per index 0..{} of a, got {}",
            a.transient().len(),
            offsets.len()
        )));
    }
    let min_gap = 4 * k - 1;
    if let Some(w) = offsets.windows(2).find(|w| w[1] < w[0] + min_gap) {
        return Err(Error::domain(format!("offset gap {} -> {} is smaller than 4k-1 = {min_gap}", w[0], w[1])));
    }
    Ok(())
}

/// Builds `p` with `x_k ∘ p = h ∘ x` for `x = Σ a(i) S^{offsets[i]}(x_k)`,
/// certifying `sup |x - x_k ∘ p| <= 1/2k`.
///
/// `a` must be nonnegative, finitely supported with maximum exactly 1, and
/// the offsets must be spaced at least `4k - 1` apart.
pub fn build_p(a: &EPSeq, offsets: &[usize], k: usize) -> Result<ApproximationCertificate> {
    let xk = XkVector::new(k)?;
    check_lemma_input(a, offsets, k)?;

    let x = lemma_vector(a, offsets, &xk);
    let mut h_err = None;
    let y = x.map(|u| {
        round_h(u, k).unwrap_or_else(|e| {
            h_err.get_or_insert(e);
            rational::zero()
        })
    });
    if let Some(e) = h_err {
        return Err(e);
    }

    let threshold = rat(2 * k as i64 - 1, 2 * k as i64);
    let i0 = a.transient().iter().position(|q| *q > threshold).expect("some entry equals 1");
    let big_n = offsets[i0] + 2 * k;
    let forced_end = big_n + 2 * k - 1;
    let len = forced_end.max(x.transient().len());

    // Index of the first occurrence of `v` among x_k(lo..=hi).
    let locate = |v: &Rational, lo: usize, hi: usize| (lo..=hi).find(|&m| xk.entry(m) == v);

    let mut prefix = Vec::with_capacity(len);
    for n in 0..=big_n {
        let m = locate(y.entry(n), 0, 2 * k)
            .ok_or_else(|| Error::invariant(format!("h(x)({n}) = {} is not among x_k(0..=2k)", y.entry(n))))?;
        prefix.push(m);
    }
    for j in 1..=(2 * k).saturating_sub(2) {
        let n = big_n + j;
        if y.entry(n) != xk.entry(2 * k + j) {
            return Err(Error::invariant(format!(
                "h(x)({n}) = {} but the descending run forces {}",
                y.entry(n),
                xk.entry(2 * k + j)
            )));
        }
        prefix.push(2 * k + j);
    }
    for n in forced_end..len {
        let v = y.entry(n);
        let m = if v.is_zero() {
            prefix.iter().max().map_or(0, |m| m + 1)
        } else {
            locate(v, 1, 2 * k).ok_or_else(|| Error::invariant(format!("h(x)({n}) = {v} is not among x_k(1..=2k)")))?
        };
        prefix.push(m);
    }
    // Past the support every entry of h(x) is 0, so p keeps climbing by one.
    let next = prefix.iter().max().map_or(0, |m| m + 1);
    let p = EARigidSurjection::new(prefix, len - next)
        .map_err(|e| Error::invariant(format!("constructed map is not a rigid surjection: {e}")))?;

    let image = apply(&xk.seq, &p);
    if image != y {
        return Err(Error::invariant("x_k ∘ p differs from h ∘ x"));
    }
    Ok(ApproximationCertificate { distance: x.sup_distance(&image), bound: rat(1, 2 * k as i64), p })
}

/// `T(a) = Σ a(i) S^{4ki}(x_k)`, a linear isometry on finitely supported `a`.
pub fn embed_t(a: &EPSeq, k: usize) -> Result<EPSeq> {
    let xk = XkVector::new(k)?;
    require_finitely_supported(a)?;
    if a.sup_abs() > rational::one() {
        return Err(Error::domain("T is applied to vectors with sup norm <= 1"));
    }
    let offsets: Vec<usize> = (0..a.transient().len()).map(|i| 4 * k * i).collect();
    Ok(lemma_vector(a, &offsets, &xk))
}

/// `4ki` for nonnegative `a(i)`, `4ki + 1` for negative ones.
pub fn sign_offsets(a: &EPSeq, k: usize) -> Vec<usize> {
    a.transient().iter().enumerate().map(|(i, q)| 4 * k * i + usize::from(q.is_negative())).collect()
}

/// `Σ |a(i)| S^{n_i}(x_k)` with the sign-dependent offsets; within `1/k` of
/// `T(a)`.
pub fn sign_adjusted_vector(a: &EPSeq, k: usize) -> Result<EPSeq> {
    let xk = XkVector::new(k)?;
    require_finitely_supported(a)?;
    Ok(lemma_vector(&a.map(|q| q.abs()), &sign_offsets(a, k), &xk))
}

/// Finds `p` with `sup |T(a) - x_k ∘ p| <= 2/k` for finitely supported `a`
/// of sup norm exactly 1.
pub fn approximate_in_orbit(a: &EPSeq, k: usize) -> Result<ApproximationCertificate> {
    let xk = XkVector::new(k)?;
    require_finitely_supported(a)?;
    if a.sup_abs() != rational::one() {
        return Err(Error::domain(format!("a must have sup norm 1, got {}", a.sup_abs())));
    }
    let abs = a.map(|q| q.abs());
    let lemma = build_p(&abs, &sign_offsets(a, k), k)?;
    let t = embed_t(a, k)?;
    Ok(ApproximationCertificate {
        distance: t.sup_distance(&apply(&xk.seq, &lemma.p)),
        bound: rat(2, k as i64),
        p: lemma.p,
    })
}
