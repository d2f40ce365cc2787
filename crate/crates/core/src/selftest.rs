//! Seeded invariant suites behind `oscillab selftest`.
//!
//! Each suite draws its instances from its own ChaCha8 stream, so adding or
//! reordering suites never changes another suite's cases. Reports contain no
//! timings and are byte-identical for a given `(seed, cases)`.

use num_traits::{Signed, Zero};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dualramsey::{search_monochromatic, verify_witness, ColoringTable};
use crate::ellinf::{self, make_xk, round_h};
use crate::gen::{self, SeqShape};
use crate::rational::{self, rat, Rational};
use crate::rigidsurj::{apply, apply_u, enumerate_rigid, factorize, EARigidSurjection, FiniteRigidSurjection};
use crate::seqcore::{IndexOrOmega, UPoint};
use crate::urysohn::{affine_bounds_at, dist, embed_metric, make_wr, prefix_bounds};

/// Failures kept per suite; the count is always exact.
const MAX_RECORDED: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub passed: usize,
    pub violations: usize,
    pub examples: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub cases: usize,
    pub suites: Vec<SuiteReport>,
    pub all_passed: bool,
}

struct Tally {
    name: &'static str,
    cases: usize,
    passed: usize,
    violations: usize,
    examples: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, cases: 0, passed: 0, violations: 0, examples: Vec::new() }
    }

    /// Records one case; `check` returns the first violated property, if any.
    fn case(&mut self, check: impl FnOnce() -> Option<String>) {
        self.cases += 1;
        match check() {
            None => self.passed += 1,
            Some(msg) => {
                self.violations += 1;
                if self.examples.len() < MAX_RECORDED {
                    self.examples.push(msg);
                }
            }
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name,
            cases: self.cases,
            passed: self.passed,
            violations: self.violations,
            examples: self.examples,
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Some(format!($($msg)+));
        }
    };
}

type Suite = fn(&mut ChaCha8Rng, usize) -> SuiteReport;

/// Suites in report order. The stream index of each is its position here.
pub const SUITES: &[(&str, Suite)] = &[
    ("pseudometric", pseudometric),
    ("bounds", bounds),
    ("witness", witness),
    ("isometry", isometry),
    ("lemma", lemma),
    ("orbit_approximation", orbit_approximation),
    ("embedding", embedding),
    ("prefix_agreement", prefix_agreement),
    ("combinatorics", combinatorics),
    ("monoid", monoid),
    ("rounding", rounding),
];

pub fn run(seed: u64, cases: usize) -> SelftestReport {
    let suites: Vec<SuiteReport> =
        SUITES.iter().enumerate().map(|(i, (_, suite))| suite(&mut gen::suite_rng(seed, i as u64), cases)).collect();
    let all_passed = suites.iter().all(SuiteReport::ok);
    SelftestReport { seed, cases, suites, all_passed }
}

pub fn run_one(name: &str, seed: u64, cases: usize) -> Option<SuiteReport> {
    SUITES.iter().position(|(n, _)| *n == name).map(|i| SUITES[i].1(&mut gen::suite_rng(seed, i as u64), cases))
}

fn upoint(rng: &mut ChaCha8Rng) -> UPoint {
    gen::upoint(rng, SeqShape::STANDARD)
}

fn window3(x: &UPoint, y: &UPoint, z: &UPoint) -> usize {
    x.seq().joint_window(y.seq()).max(y.seq().joint_window(z.seq())).max(x.seq().joint_window(z.seq())) + 1
}

/// Symmetry, `d(x, x) = 0`, triangle inequality and diameter ≤ 1.
pub fn pseudometric(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut t = Tally::new("pseudometric");
    for _ in 0..cases {
        let (x, y, z) = (upoint(rng), upoint(rng), upoint(rng));
        t.case(|| {
            let (dxy, dyz, dxz) = (dist(&x, &y).d, dist(&y, &z).d, dist(&x, &z).d);
            ensure!(dist(&y, &x).d == dxy, "asymmetric: {x:?} {y:?}");
            ensure!(dist(&x, &x).d.is_zero(), "d(x,x) != 0 for {x:?}");
            ensure!(dxz <= &dxy + &dyz, "triangle fails: {x:?} {y:?} {z:?}");
            ensure!(dxy <= rational::one(), "diameter exceeded: {x:?} {y:?}");
            None
        });
    }
    t.finish()
}

/// Monotonicity and comparison facts for `m` and `M`, plus "at least one of
/// `m`, `M` is flat or they have crossed" at every step.
pub fn bounds(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut t = Tally::new("bounds");
    for _ in 0..cases {
        let (x, y, z) = (upoint(rng), upoint(rng), upoint(rng));
        t.case(|| {
            let w = window3(&x, &y, &z);
            let at = |a: &UPoint, b: &UPoint, n: IndexOrOmega| prefix_bounds(a, b, n);
            let idx: Vec<IndexOrOmega> =
                (0..=w).map(IndexOrOmega::Finite).chain(std::iter::once(IndexOrOmega::Omega)).collect();
            let xy: Vec<_> = idx.iter().map(|&n| at(&x, &y, n)).collect();
            let yz: Vec<_> = idx.iter().map(|&n| at(&y, &z, n)).collect();
            let xz: Vec<_> = idx.iter().map(|&n| at(&x, &z, n)).collect();
            for s in xy.windows(2) {
                ensure!(s[0].m_val <= s[1].m_val, "m decreases at {}", s[0].n);
                ensure!(s[0].big_m_val >= s[1].big_m_val, "M increases at {}", s[0].n);
            }
            ensure!(xy[0].m_val <= xy[0].big_m_val, "m(0) > M(0) for {x:?} {y:?}");
            let om = xy.last().unwrap();
            ensure!(om.big_m_val <= om.m_val, "M(ω) > m(ω) for {x:?} {y:?}");
            for i in 0..idx.len() {
                ensure!(xz[i].m_val <= &xy[i].m_val + &yz[i].m_val, "m triangle fails at {}", idx[i]);
                ensure!(xz[i].big_m_val <= &xy[i].big_m_val + &yz[i].m_val, "M triangle fails at {}", idx[i]);
            }
            for s in xy[..xy.len() - 1].windows(2) {
                let flat_m = s[0].m_val == s[1].m_val;
                let flat_big_m = s[0].big_m_val == s[1].big_m_val;
                ensure!(flat_m || flat_big_m || s[1].m_val <= s[1].big_m_val, "no flat bound at step {}", s[0].n);
            }
            None
        });
    }
    t.finish()
}

/// The witness index carries `m = M = d` on the affine extensions.
pub fn witness(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut t = Tally::new("witness");
    for _ in 0..cases {
        let (x, y) = (upoint(rng), upoint(rng));
        t.case(|| {
            let r = dist(&x, &y);
            let (m, big_m) = match affine_bounds_at(&x, &y, &r.witness_t) {
                Ok(v) => v,
                Err(e) => return Some(format!("{e}")),
            };
            ensure!(m == r.d && big_m == r.d, "witness {} misses d = {} for {x:?} {y:?}", r.witness_t, r.d);
            None
        });
    }
    t.finish()
}

/// Precomposition preserves `d` and the sup norm, and transports the running
/// bounds along first preimages.
pub fn isometry(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut t = Tally::new("isometry");
    for _ in 0..cases {
        let (x, y) = (upoint(rng), upoint(rng));
        let s = gen::signed_seq(rng, SeqShape::STANDARD);
        let p = gen::ea_rigid(rng, 8);
        t.case(|| {
            let (xp, yp) = (apply_u(&x, &p), apply_u(&y, &p));
            ensure!(dist(&xp, &yp).d == dist(&x, &y).d, "d not preserved by {p:?}");
            ensure!(apply(&s, &p).sup_abs() == s.sup_abs(), "sup norm not preserved by {p:?}");
            let w = x.seq().joint_window(y.seq()) + 1;
            for k in 0..w {
                let base = prefix_bounds(&x, &y, IndexOrOmega::Finite(k));
                for n in p.first_preimage(k)..p.first_preimage(k + 1) {
                    let moved = prefix_bounds(&xp, &yp, IndexOrOmega::Finite(n));
                    ensure!(
                        moved.m_val == base.m_val && moved.big_m_val == base.big_m_val,
                        "transport fails at k = {k}, n = {n} for {p:?}"
                    );
                }
            }
            let (a, b) = (prefix_bounds(&xp, &yp, IndexOrOmega::Omega), prefix_bounds(&x, &y, IndexOrOmega::Omega));
            ensure!(a.m_val == b.m_val && a.big_m_val == b.big_m_val, "transport fails at ω");
            None
        });
    }
    t.finish()
}

/// The rounding construction lands exactly on `h ∘ x` within `1/2k`.
pub fn lemma(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut t = Tally::new("lemma");
    for i in 0..cases {
        let k = 1 + i % 4;
        let (a, offsets) = gen::lemma_input(rng, k, 4, 10);
        t.case(|| {
            let cert = match ellinf::build_p(&a, &offsets, k) {
                Ok(c) => c,
                Err(e) => return Some(format!("build_p failed on {a:?} {offsets:?} k={k}: {e}")),
            };
            let xk = make_xk(k).unwrap();
            let x = ellinf::lemma_vector(&a, &offsets, &xk);
            let y = x.map(|u| round_h(u, k).unwrap());
            let image = apply(xk.seq(), &cert.p);
            ensure!(image == y, "x_k ∘ p != h ∘ x for {a:?} k={k}");
            let d = x.sup_distance(&image);
            ensure!(d == cert.distance, "certificate distance is stale");
            ensure!(d <= rat(1, 2 * k as i64), "distance {d} > 1/2k for {a:?} k={k}");
            None
        });
    }
    t.finish()
}

/// `T(a)` lies within `2/k` of the orbit of `x_k`, via the sign-adjusted
/// vector within `1/k`.
pub fn orbit_approximation(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut t = Tally::new("orbit_approximation");
    for k in 1..=6usize {
        t.case(|| {
            let xk = make_xk(k).unwrap();
            let v = xk.seq().add(&xk.seq().shift(1)).sup_abs();
            ensure!(v == rat(1, k as i64), "|x_k + S x_k| = {v} for k = {k}");
            None
        });
    }
    for i in 0..cases {
        let k = 1 + i % 4;
        let a = gen::unit_sphere_finite(rng, 4, 10);
        t.case(|| {
            let cert = match ellinf::approximate_in_orbit(&a, k) {
                Ok(c) => c,
                Err(e) => return Some(format!("approximation failed on {a:?} k={k}: {e}")),
            };
            let xk = make_xk(k).unwrap();
            let ta = ellinf::embed_t(&a, k).unwrap();
            ensure!(ta.sup_abs() == a.sup_abs(), "T is not isometric on {a:?}");
            let x = ellinf::sign_adjusted_vector(&a, k).unwrap();
            ensure!(ta.sup_distance(&x) <= rat(1, k as i64), "|T(a) - x| > 1/k for {a:?}");
            let d = ta.sup_distance(&apply(xk.seq(), &cert.p));
            ensure!(d == cert.distance && d <= rat(2, k as i64), "|T(a) - x_k∘p| = {d} > 2/k for {a:?}");
            None
        });
    }
    t.finish()
}

/// Finite spaces embed isometrically, each image within `1/2r` of the
/// orbit of `w_r`.
pub fn embedding(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut t = Tally::new("embedding");
    for i in 0..cases {
        let r = 1 + i % 4;
        let space = gen::metric_space(rng, 5, 8);
        t.case(|| {
            let rep = match embed_metric(&space, r) {
                Ok(rep) => rep,
                Err(e) => return Some(format!("embedding failed: {e}")),
            };
            let wr = make_wr(r).unwrap();
            let half = rat(1, 2 * r as i64);
            for (a, pa) in rep.points.iter().enumerate() {
                ensure!(*pa.f.entry(0) == rational::one(), "f({})(0) != 1", pa.name);
                for n in 0..pa.f.seq().window_len() {
                    ensure!(
                        (pa.f.entry(n + 1) - pa.f.entry(n)).abs() <= rat(1, r as i64),
                        "step too long in f({})",
                        pa.name
                    );
                }
                let m = dist(&apply_u(&wr, &pa.p), &pa.f).d;
                ensure!(m == pa.membership_distance && m <= half, "{} is {m} from the orbit", pa.name);
                for (b, pb) in rep.points.iter().enumerate().skip(a + 1) {
                    let d = dist(&pa.f, &pb.f).d;
                    ensure!(d == *space.dist(a, b), "d({}, {}) became {d}", pa.name, pb.name);
                }
            }
            None
        });
    }
    t.finish()
}

/// Maps agreeing up to a preimage of `r` give `w_r`-images at distance 0.
pub fn prefix_agreement(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut t = Tally::new("prefix_agreement");
    for _ in 0..cases {
        let (p, q, r, n) = gen::agreeing_pair(rng);
        t.case(|| {
            ensure!(p.eval(n) == r && p.values(n + 1) == q.values(n + 1), "generator broke agreement");
            let wr = make_wr(r).unwrap();
            let d = dist(&apply_u(&wr, &p), &apply_u(&wr, &q)).d;
            ensure!(d.is_zero(), "d(w_{r}∘p, w_{r}∘q) = {d} for {p:?} vs {q:?}");
            None
        });
    }
    t.finish()
}

fn stirling2(n: usize, m: usize) -> usize {
    let mut row = vec![0usize; m + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=m.min(i)).rev() {
            row[j] = j * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row[m]
}

/// Enumeration counts, factorization against coarsening, and dual-Ramsey
/// witness soundness.
pub fn combinatorics(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    use rand::Rng;
    let mut t = Tally::new("combinatorics");
    for n in 1..=8 {
        for m in 1..=n {
            t.case(|| {
                let got = enumerate_rigid(n, m).map(|v| v.len()).unwrap_or(0);
                ensure!(got == stirling2(n, m), "|rigid({n},{m})| = {got}, expected {}", stirling2(n, m));
                None
            });
        }
    }
    for n in 1..=6 {
        let all: Vec<FiniteRigidSurjection> = (1..=n).flat_map(|m| enumerate_rigid(n, m).unwrap()).collect();
        t.case(|| {
            for q in &all {
                for p in &all {
                    let coarser = q.to_ordered_partition().is_coarsening_of(&p.to_ordered_partition());
                    ensure!(factorize(q, p).is_some() == coarser, "factorization mismatch q={q:?} p={p:?}");
                }
            }
            None
        });
    }
    let instances = cases.min(50);
    for _ in 0..instances {
        let n = rng.random_range(2..=6);
        let k = rng.random_range(1..=2.min(n));
        let m = rng.random_range(k..=n);
        let palette = rng.random_range(1..=3);
        let colors: Vec<usize> =
            (0..enumerate_rigid(n, k).unwrap().len()).map(|_| rng.random_range(0..palette)).collect();
        let mut it = colors.into_iter();
        let table = ColoringTable::from_fn(n, k, |_| it.next().unwrap()).unwrap();
        t.case(|| {
            let w = match search_monochromatic(&table, m) {
                Ok(w) => w,
                Err(e) => return Some(format!("search failed: {e}")),
            };
            if let Some(w) = w {
                ensure!(verify_witness(&table, &w), "witness fails verification");
                for r in enumerate_rigid(m, k).unwrap() {
                    let q = FiniteRigidSurjection::compose(&r, &w.p).unwrap();
                    ensure!(table.color(&q) == Some(w.color), "composite {q:?} has the wrong color");
                    ensure!(factorize(&q, &w.p) == Some(r.clone()), "r∘p does not factor back through p");
                }
            }
            None
        });
    }
    t.finish()
}

/// Associativity, identity, and `x ∘ (r ∘ p) = (x ∘ r) ∘ p`.
pub fn monoid(rng: &mut ChaCha8Rng, cases: usize) -> SuiteReport {
    let mut t = Tally::new("monoid");
    for _ in 0..cases {
        let (p, q, r) = (gen::ea_rigid(rng, 8), gen::ea_rigid(rng, 8), gen::ea_rigid(rng, 8));
        let x = gen::signed_seq(rng, SeqShape::STANDARD);
        t.case(|| {
            let id = EARigidSurjection::identity();
            let left = EARigidSurjection::compose(&EARigidSurjection::compose(&r, &q), &p);
            let right = EARigidSurjection::compose(&r, &EARigidSurjection::compose(&q, &p));
            ensure!(left == right, "associativity fails for {r:?} {q:?} {p:?}");
            let span = p.prefix().len().max(q.prefix().len()).max(r.prefix().len()) + 24;
            let pointwise: Vec<usize> = (0..span).map(|n| r.eval(q.eval(p.eval(n)))).collect();
            ensure!(left.values(span) == pointwise, "composition disagrees with evaluation");
            ensure!(
                EARigidSurjection::compose(&id, &p) == p && EARigidSurjection::compose(&p, &id) == p,
                "identity law fails"
            );
            let rp = EARigidSurjection::compose(&r, &p);
            ensure!(apply(&x, &rp) == apply(&apply(&x, &r), &p), "action is not contravariant for {r:?} {p:?}");
            None
        });
    }
    t.finish()
}

/// Properties (a)–(d) of `h` on the grid `j / 4k`, `k ≤ 5`.
pub fn rounding(_rng: &mut ChaCha8Rng, _cases: usize) -> SuiteReport {
    let mut t = Tally::new("rounding");
    for k in 1..=5usize {
        let k4 = 4 * k as i64;
        let grid: Vec<Rational> = (-k4..=k4).map(|j| rat(j, k4)).collect();
        let step = rat(1, k as i64);
        t.case(|| {
            for u in &grid {
                let hu = round_h(u, k).unwrap();
                ensure!((&hu * rational::int(k as i64)).is_integer(), "(a) fails at {u}, k={k}");
                ensure!((&hu - u).abs() <= rat(1, 2 * k as i64), "(b) fails at {u}, k={k}");
                ensure!(round_h(&-u, k).unwrap() == -&hu, "(c) fails at {u}, k={k}");
                for v in &grid {
                    if (u - v).abs() <= step {
                        ensure!((&hu - round_h(v, k).unwrap()).abs() <= step, "(d) fails at {u}, {v}, k={k}");
                    }
                }
            }
            None
        });
    }
    t.finish()
}
