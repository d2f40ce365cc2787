//! Rigid surjections: finite ones `[n] → [m]`, eventually affine ones
//! `ω → ω`, their composition, the partition correspondence, factorization
//! and the right action on sequences by precomposition.
//!
//! A surjection between initial segments of ω is rigid iff the first
//! occurrences of `0, 1, 2, …` appear at increasing positions, i.e. every
//! value is at most one more than the maximum of the values before it.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqcore::{EPSeq, UPoint};

/// True iff `values` is onto an initial segment of ω with first occurrences
/// of `0, 1, 2, …` in increasing positions.
pub fn is_rigid(values: &[usize]) -> bool {
    let mut next = 0usize;
    for &v in values {
        if v > next {
            return false;
        }
        if v == next {
            next += 1;
        }
    }
    true
}

#[derive(Deserialize)]
struct RawFinite {
    values: Vec<usize>,
}

/// Rigid surjection `[n] → [m]` stored as its list of values.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFinite")]
pub struct FiniteRigidSurjection {
    values: Vec<usize>,
}

impl TryFrom<RawFinite> for FiniteRigidSurjection {
    type Error = Error;

    fn try_from(raw: RawFinite) -> Result<Self> {
        FiniteRigidSurjection::new(raw.values)
    }
}

impl fmt::Debug for FiniteRigidSurjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.values)
    }
}

impl FiniteRigidSurjection {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        if !is_rigid(&values) {
            return Err(Error::domain(format!(
                "{values:?} is not a rigid surjection (first occurrences of 0, 1, 2, ... must be in increasing positions)"
            )));
        }
        Ok(FiniteRigidSurjection { values })
    }

    pub fn identity(n: usize) -> Self {
        FiniteRigidSurjection { values: (0..n).collect() }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn domain_len(&self) -> usize {
        self.values.len()
    }

    pub fn codomain_len(&self) -> usize {
        self.values.iter().max().map_or(0, |m| m + 1)
    }

    pub fn eval(&self, i: usize) -> usize {
        self.values[i]
    }

    /// `r ∘ p`, defined when the codomain of `p` is the domain of `r`.
    pub fn compose(r: &Self, p: &Self) -> Result<Self> {
        if r.domain_len() != p.codomain_len() {
            return Err(Error::domain(format!(
                "cannot compose: outer map has domain [{}], inner map has codomain [{}]",
                r.domain_len(),
                p.codomain_len()
            )));
        }
        Ok(FiniteRigidSurjection { values: p.values.iter().map(|&v| r.values[v]).collect() })
    }

    pub fn to_ordered_partition(&self) -> OrderedPartition {
        let mut blocks = vec![Vec::new(); self.codomain_len()];
        for (i, &v) in self.values.iter().enumerate() {
            blocks[v].push(i);
        }
        OrderedPartition { blocks }
    }

    pub fn from_ordered_partition(partition: &OrderedPartition) -> Self {
        let n = partition.ground_len();
        let mut values = vec![0; n];
        for (b, block) in partition.blocks.iter().enumerate() {
            for &i in block {
                values[i] = b;
            }
        }
        FiniteRigidSurjection { values }
    }
}

/// Partition of `[n]` into nonempty blocks listed by increasing minimum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderedPartition {
    blocks: Vec<Vec<usize>>,
}

impl OrderedPartition {
    /// Validates and sorts each block. Blocks must already be listed in
    /// order of their minima.
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::domain("partition blocks must be nonempty"));
            }
            b.sort_unstable();
        }
        if blocks.windows(2).any(|w| w[0][0] >= w[1][0]) {
            return Err(Error::domain("partition blocks must be ordered by strictly increasing minima"));
        }
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; n];
        for &i in blocks.iter().flatten() {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::domain(format!("blocks do not partition [{n}]")));
            }
        }
        Ok(OrderedPartition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn ground_len(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// True iff every block of `finer` lies inside a block of `self`.
    pub fn is_coarsening_of(&self, finer: &OrderedPartition) -> bool {
        if self.ground_len() != finer.ground_len() {
            return false;
        }
        let mut owner = vec![0; self.ground_len()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                owner[i] = b;
            }
        }
        finer.blocks.iter().all(|block| block.iter().all(|&i| owner[i] == owner[block[0]]))
    }
}

/// All rigid surjections `[n] → [m]` in lexicographic order.
pub fn enumerate_rigid(n: usize, m: usize) -> Result<Vec<FiniteRigidSurjection>> {
    if m == 0 || m > n {
        return Err(Error::domain(format!("no rigid surjections [{n}] -> [{m}] to enumerate: need 1 <= m <= n")));
    }
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(n);
    extend_rigid(n, m, &mut buf, 0, &mut out);
    Ok(out)
}

// `next` is the count of distinct values used so far.
fn extend_rigid(n: usize, m: usize, buf: &mut Vec<usize>, next: usize, out: &mut Vec<FiniteRigidSurjection>) {
    let pos = buf.len();
    if pos == n {
        if next == m {
            out.push(FiniteRigidSurjection { values: buf.clone() });
        }
        return;
    }
    let remaining_after = n - pos - 1;
    for v in 0..=next.min(m - 1) {
        let used = if v == next { next + 1 } else { next };
        if m - used > remaining_after {
            continue;
        }
        buf.push(v);
        extend_rigid(n, m, buf, used, out);
        buf.pop();
    }
}

/// The unique rigid `r` with `q = r ∘ p`, when the partition of `q` coarsens
/// the partition of `p`.
pub fn factorize(q: &FiniteRigidSurjection, p: &FiniteRigidSurjection) -> Option<FiniteRigidSurjection> {
    if q.domain_len() != p.domain_len() {
        return None;
    }
    let mut first = vec![None; p.codomain_len()];
    for (i, &v) in p.values.iter().enumerate() {
        first[v].get_or_insert(i);
    }
    let values: Vec<usize> = first.into_iter().map(|i| q.values[i.expect("p is onto")]).collect();
    let r = FiniteRigidSurjection::new(values).ok()?;
    let back = FiniteRigidSurjection::compose(&r, p).ok()?;
    (back == *q).then_some(r)
}

#[derive(Deserialize)]
struct RawEventual {
    prefix: Vec<usize>,
    tail_offset: usize,
}

/// Rigid surjection `ω → ω` given by `prefix` on `[0, N)` and
/// `p(n) = n - tail_offset` for `n >= N`, with `N` minimal.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawEventual")]
pub struct EARigidSurjection {
    prefix: Vec<usize>,
    tail_offset: usize,
}

impl TryFrom<RawEventual> for EARigidSurjection {
    type Error = Error;

    fn try_from(raw: RawEventual) -> Result<Self> {
        EARigidSurjection::new(raw.prefix, raw.tail_offset)
    }
}

impl fmt::Debug for EARigidSurjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} then n-{}", self.prefix, self.tail_offset)
    }
}

impl EARigidSurjection {
    pub fn new(mut prefix: Vec<usize>, tail_offset: usize) -> Result<Self> {
        if !is_rigid(&prefix) {
            return Err(Error::domain(format!("prefix {prefix:?} is not rigid")));
        }
        let n = prefix.len();
        let next = prefix.iter().max().map_or(0, |m| m + 1);
        // The tail starts at value n - c and must neither skip a value nor be negative.
        match n.checked_sub(tail_offset) {
            None => return Err(Error::domain(format!("tail n - {tail_offset} is negative at n = {n}"))),
            Some(start) if start > next => {
                return Err(Error::domain(format!(
                    "tail starts at value {start} but the prefix only reaches {}; not surjective",
                    next as isize - 1
                )))
            }
            Some(_) => {}
        }
        while let Some(&last) = prefix.last() {
            if prefix.len() > tail_offset && last == prefix.len() - 1 - tail_offset {
                prefix.pop();
            } else {
                break;
            }
        }
        Ok(EARigidSurjection { prefix, tail_offset })
    }

    pub fn identity() -> Self {
        EARigidSurjection { prefix: Vec::new(), tail_offset: 0 }
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn tail_offset(&self) -> usize {
        self.tail_offset
    }

    pub fn eval(&self, n: usize) -> usize {
        match self.prefix.get(n) {
            Some(&v) => v,
            None => n - self.tail_offset,
        }
    }

    pub fn values(&self, len: usize) -> Vec<usize> {
        (0..len).map(|n| self.eval(n)).collect()
    }

    /// `min p⁻¹({k})`.
    pub fn first_preimage(&self, k: usize) -> usize {
        self.prefix.iter().position(|&v| v == k).unwrap_or(k + self.tail_offset)
    }

    /// `r ∘ p`.
    pub fn compose(r: &Self, p: &Self) -> Self {
        let len = p.prefix.len().max(r.prefix.len() + p.tail_offset);
        let prefix = (0..len).map(|n| r.eval(p.eval(n))).collect();
        EARigidSurjection::new(prefix, p.tail_offset + r.tail_offset)
            .expect("rigid surjections are closed under composition")
    }
}

/// `x ∘ p`.
pub fn apply(x: &EPSeq, p: &EARigidSurjection) -> EPSeq {
    let t = p.prefix.len().max(x.transient().len() + p.tail_offset);
    let l = x.period().len();
    let transient = (0..t).map(|n| x.entry(p.eval(n)).clone()).collect();
    let period = (t..t + l).map(|n| x.entry(p.eval(n)).clone()).collect();
    EPSeq::new(transient, period).expect("period is nonempty")
}

/// `x ∘ p` for a U-point; the value set is unchanged, so the result is again
/// a U-point.
pub fn apply_u(x: &UPoint, p: &EARigidSurjection) -> UPoint {
    UPoint::new(apply(x.seq(), p)).expect("precomposition preserves values and liminf")
}

/// Counts rigid surjections by codomain size; handy for reports.
pub fn count_by_codomain(n: usize) -> BTreeMap<usize, usize> {
    (1..=n).map(|m| (m, enumerate_rigid(n, m).map_or(0, |v| v.len()))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn fr(v: &[usize]) -> FiniteRigidSurjection {
        FiniteRigidSurjection::new(v.to_vec()).unwrap()
    }

    fn ea(prefix: &[usize], c: usize) -> EARigidSurjection {
        EARigidSurjection::new(prefix.to_vec(), c).unwrap()
    }

    // S(n, m) by the recurrence S(n,m) = m S(n-1,m) + S(n-1,m-1).
    fn stirling2(n: usize, m: usize) -> usize {
        let mut t = vec![vec![0usize; m + 1]; n + 1];
        t[0][0] = 1;
        for i in 1..=n {
            for j in 1..=m.min(i) {
                t[i][j] = j * t[i - 1][j] + t[i - 1][j - 1];
            }
        }
        t[n][m]
    }

    #[test]
    fn rigidity_examples() {
        assert!(is_rigid(&[0, 1, 2, 3]));
        assert!(is_rigid(&[0, 1, 0, 2]));
        assert!(!is_rigid(&[1, 0]));
        assert!(!is_rigid(&[0, 2, 1]));
        assert!(is_rigid(&[]));
    }

    #[test]
    fn enumeration_counts_match_stirling_recurrence() {
        assert_eq!(enumerate_rigid(4, 4).unwrap(), vec![FiniteRigidSurjection::identity(4)]);
        assert_eq!(enumerate_rigid(4, 2).unwrap().len(), 7);
        assert_eq!(enumerate_rigid(3, 2).unwrap().len(), 3);
        for n in 1..=8 {
            for m in 1..=n {
                let all = enumerate_rigid(n, m).unwrap();
                assert_eq!(all.len(), stirling2(n, m), "S({n},{m})");
                assert!(all.windows(2).all(|w| w[0] < w[1]), "lexicographic and distinct");
                assert!(all.iter().all(|f| f.domain_len() == n && f.codomain_len() == m));
            }
        }
    }

    #[test]
    fn enumeration_rejects_bad_shapes() {
        assert!(enumerate_rigid(3, 0).is_err());
        assert!(enumerate_rigid(2, 3).is_err());
    }

    #[test]
    fn partition_correspondence() {
        let p = fr(&[0, 1, 0, 2]).to_ordered_partition();
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1], vec![3]]);
        assert_eq!(fr(&[0, 1, 2]).to_ordered_partition().blocks(), &[vec![0], vec![1], vec![2]]);
        let back = FiniteRigidSurjection::from_ordered_partition(&p);
        assert_eq!(back, fr(&[0, 1, 0, 2]));
        assert!(OrderedPartition::new(vec![vec![1], vec![0]]).is_err());
        assert!(OrderedPartition::new(vec![vec![0, 1], vec![1]]).is_err());
        assert!(OrderedPartition::new(vec![vec![0], vec![]]).is_err());
    }

    #[test]
    fn factorization_examples() {
        let q = fr(&[0, 1, 0, 2]);
        assert_eq!(factorize(&q, &q), Some(FiniteRigidSurjection::identity(3)));
        assert_eq!(factorize(&fr(&[0, 0, 1]), &fr(&[0, 1, 2])), Some(fr(&[0, 0, 1])));
        assert_eq!(factorize(&fr(&[0, 1, 0]), &fr(&[0, 0, 1])), None);
    }

    #[test]
    fn factorization_iff_coarsening_exhaustive() {
        for n in 1..=6 {
            let all: Vec<_> = (1..=n).flat_map(|m| enumerate_rigid(n, m).unwrap()).collect();
            for q in &all {
                for p in &all {
                    let coarser = q.to_ordered_partition().is_coarsening_of(&p.to_ordered_partition());
                    let r = factorize(q, p);
                    assert_eq!(r.is_some(), coarser, "q={q:?} p={p:?}");
                    if let Some(r) = r {
                        assert_eq!(FiniteRigidSurjection::compose(&r, p).unwrap(), *q);
                    }
                }
            }
        }
    }

    #[test]
    fn ea_validation_and_canonical_form() {
        assert!(EARigidSurjection::new(vec![1], 0).is_err());
        assert_eq!(EARigidSurjection::new(vec![0], 0).unwrap(), EARigidSurjection::identity());
        // tail would skip value 1
        assert!(EARigidSurjection::new(vec![0, 0], 0).is_err());
        assert!(EARigidSurjection::new(vec![], 1).is_err());
        let p = ea(&[0, 0, 1, 2], 1);
        assert_eq!(p.prefix(), &[0]);
        assert_eq!(p.values(6), vec![0, 0, 1, 2, 3, 4]);
    }

    #[test]
    fn composition_examples() {
        let id = EARigidSurjection::identity();
        let p = ea(&[0, 0], 1);
        assert_eq!(EARigidSurjection::compose(&id, &p), p);
        assert_eq!(EARigidSurjection::compose(&p, &id), p);
        let rp = EARigidSurjection::compose(&p, &p);
        assert_eq!(rp.values(8), vec![0, 0, 0, 1, 2, 3, 4, 5]);
        assert_eq!(rp.tail_offset(), 2);
        // value at index 2 already matches the tail 2 - 2 = 0
        assert_eq!(rp.prefix(), &[0, 0]);
    }

    #[test]
    fn first_preimage_reads_prefix_then_tail() {
        let p = ea(&[0, 0, 1, 0], 2);
        assert_eq!(p.first_preimage(0), 0);
        assert_eq!(p.first_preimage(1), 2);
        assert_eq!(p.first_preimage(2), 4);
        assert_eq!(p.first_preimage(5), 7);
    }

    #[test]
    fn apply_examples() {
        let w2 = EPSeq::finite(vec![int(1), rat(1, 2)]);
        let x = apply(&w2, &ea(&[0, 0], 1));
        assert_eq!(x, EPSeq::finite(vec![int(1), int(1), rat(1, 2)]));
        assert_eq!(apply(&w2, &EARigidSurjection::identity()), w2);
        let periodic = EPSeq::new(vec![int(1)], vec![rat(1, 3), int(0), rat(-1, 2)]).unwrap();
        let p = ea(&[0, 1, 1, 0, 2], 2);
        let y = apply(&periodic, &p);
        for n in 0..30 {
            assert_eq!(y.entry(n), periodic.entry(p.eval(n)));
        }
        assert_eq!(y.sup_abs(), periodic.sup_abs());
    }

    #[test]
    fn json_shapes() {
        let p = ea(&[0, 0], 2);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"prefix":[0,0],"tail_offset":2}"#);
        assert_eq!(serde_json::from_str::<EARigidSurjection>(&s).unwrap(), p);
        assert!(serde_json::from_str::<EARigidSurjection>(r#"{"prefix":[1],"tail_offset":0}"#).is_err());
        let f = fr(&[0, 1, 0]);
        assert_eq!(serde_json::to_string(&f).unwrap(), r#"{"values":[0,1,0]}"#);
        assert!(serde_json::from_str::<FiniteRigidSurjection>(r#"{"values":[1,0]}"#).is_err());
    }
}
