//! Exact rational constructions around rigid surjections and oscillation
//! stability.
//!
//! * [`seqcore`]: eventually periodic rational sequences.
//! * [`rigidsurj`]: rigid surjections, their monoid and the action on sequences.
//! * [`ellinf`]: the staircase vectors `x_k` and orbit approximation in ℓ∞.
//! * [`urysohn`]: the pseudometric on `[0, 1]`-sequences with liminf 0,
//!   `w_r`, and embeddings of finite metric spaces.
//! * [`dualramsey`]: brute-force monochromatic search over rigid surjections.
//! * [`selftest`]: seeded invariant suites.
//!
//! No floating point is used anywhere; all values are [`Rational`]s.

pub mod dualramsey;
pub mod ellinf;
pub mod error;
pub mod gen;
pub mod rational;
pub mod rigidsurj;
pub mod selftest;
pub mod seqcore;
pub mod urysohn;

pub use dualramsey::{search_monochromatic, verify_witness, ColoringTable, MonochromaticWitness, RamseyInstance};
pub use ellinf::{approximate_in_orbit, build_p, embed_t, make_xk, round_h, ApproximationCertificate, XkVector};
pub use error::{Error, Result};
pub use rational::Rational;
pub use rigidsurj::{
    apply, apply_u, enumerate_rigid, factorize, is_rigid, EARigidSurjection, FiniteRigidSurjection, OrderedPartition,
};
pub use seqcore::{EPSeq, IndexOrOmega, UPoint};
pub use urysohn::{
    crossing_index, dist, embed_metric, make_wr, orbit_projection, oscillation, prefix_bounds, CaseTag, DistanceResult,
    EmbeddingReport, FiniteMetricSpace, PrefixBounds,
};
