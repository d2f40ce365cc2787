//! Seeded fixtures shared by the criterion benches.

use oscillab::gen::{self, SeqShape};
use oscillab::urysohn::FiniteMetricSpace;
use oscillab::{EARigidSurjection, UPoint};

const SEED: u64 = 7;

/// `count` pairs of U-points of the standard shape.
pub fn point_pairs(count: usize) -> Vec<(UPoint, UPoint)> {
    let mut rng = gen::suite_rng(SEED, 0);
    (0..count).map(|_| (gen::upoint(&mut rng, SeqShape::STANDARD), gen::upoint(&mut rng, SeqShape::STANDARD))).collect()
}

pub fn rigid_maps(count: usize, max_prefix: usize) -> Vec<EARigidSurjection> {
    let mut rng = gen::suite_rng(SEED, 1);
    (0..count).map(|_| gen::ea_rigid(&mut rng, max_prefix)).collect()
}

pub fn metric_spaces(count: usize, max_points: usize) -> Vec<FiniteMetricSpace> {
    let mut rng = gen::suite_rng(SEED, 2);
    (0..count).map(|_| gen::metric_space(&mut rng, max_points, 8)).collect()
}
