//! Isometric embedding of finite metric spaces of diameter at most 1 into the
//! fattened orbit of `w_r`.
//!
//! Adjoin a point `*` at distance 1 from everything, send each point to its
//! distance function (Kuratowski), and walk through the convex hull of the
//! images: start at `*`, go to the first point, then cycle through all points
//! forever, cutting every straight segment into steps of sup-length at most
//! `1/r`. The image of `x` is the sequence of sup-distances from its
//! Kuratowski image to the tour.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{dist, orbit_projection};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::rigidsurj::EARigidSurjection;
use crate::seqcore::{EPSeq, UPoint};

#[derive(Deserialize)]
struct RawSpace {
    points: Vec<String>,
    #[serde(with = "rational::serde_matrix")]
    dist: Vec<Vec<Rational>>,
}

/// Named points with an exact distance matrix of diameter at most 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace")]
pub struct FiniteMetricSpace {
    points: Vec<String>,
    #[serde(with = "rational::serde_matrix")]
    dist: Vec<Vec<Rational>>,
}

impl TryFrom<RawSpace> for FiniteMetricSpace {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<Self> {
        FiniteMetricSpace::new(raw.points, raw.dist)
    }
}

impl FiniteMetricSpace {
    pub fn new(points: Vec<String>, dist: Vec<Vec<Rational>>) -> Result<Self> {
        let n = points.len();
        if points.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::domain("point names must be distinct"));
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::domain(format!("distance matrix must be {n}x{n}")));
        }
        let one = rational::one();
        for i in 0..n {
            if !dist[i][i].is_zero() {
                return Err(Error::domain(format!("d({0}, {0}) must be 0", points[i])));
            }
            for j in 0..n {
                let d = &dist[i][j];
                if d.is_negative() || *d > one {
                    return Err(Error::domain(format!("d({}, {}) = {d} is outside [0, 1]", points[i], points[j])));
                }
                if *d != dist[j][i] {
                    return Err(Error::domain(format!(
                        "distance matrix is not symmetric at ({}, {})",
                        points[i], points[j]
                    )));
                }
                for k in 0..n {
                    if dist[i][k] > d + &dist[j][k] {
                        return Err(Error::domain(format!(
                            "triangle inequality fails: d({a},{c}) > d({a},{b}) + d({b},{c})",
                            a = points[i],
                            b = points[j],
                            c = points[k]
                        )));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { points, dist })
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i][j]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddedPoint {
    pub name: String,
    pub f: UPoint,
    pub p: EARigidSurjection,
    #[serde(with = "rational::serde_str")]
    pub membership_distance: Rational,
}

/// Images of every point plus the hull tour that produced them.
///
/// Tour coordinates are indexed by the input points followed by `*`;
/// entries from `tour_period_start` on repeat forever.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub r: usize,
    pub points: Vec<EmbeddedPoint>,
    #[serde(with = "rational::serde_matrix")]
    pub tour: Vec<Vec<Rational>>,
    pub tour_period_start: usize,
}

type HullPoint = Vec<Rational>;

fn sup_dist(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(u, v)| (u - v).abs()).max().unwrap_or_else(rational::zero)
}

/// Points strictly after `from` up to and including `to`, each step of
/// sup-length `len / ceil(r * len) <= 1/r`.
fn segment(from: &[Rational], to: &[Rational], r: usize) -> Vec<HullPoint> {
    let len = sup_dist(from, to);
    let steps =
        rational::to_usize(&rational::ceil_int(&(len * rational::int(r as i64)))).expect("segment length is at most 1");
    (1..=steps)
        .map(|j| {
            let s = Rational::new(j.into(), steps.into());
            from.iter().zip(to).map(|(a, b)| a + &s * (b - a)).collect()
        })
        .collect()
}

pub fn embed_metric(space: &FiniteMetricSpace, r: usize) -> Result<EmbeddingReport> {
    if r == 0 {
        return Err(Error::domain("embedding needs r >= 1"));
    }
    if space.is_empty() {
        return Err(Error::domain("cannot embed an empty space"));
    }
    let n = space.len();
    // Kuratowski image of point i of X ⊔ {*}; index n is *.
    let star_dist = |i: usize, j: usize| -> Rational {
        match (i == n, j == n) {
            (true, true) => rational::zero(),
            (true, false) | (false, true) => rational::one(),
            (false, false) => space.dist(i, j).clone(),
        }
    };
    let image = |i: usize| -> HullPoint { (0..=n).map(|j| star_dist(i, j)).collect() };

    let mut tour = vec![image(n)];
    tour.extend(segment(&image(n), &image(0), r));
    let tour_period_start = tour.len();
    for i in 0..n {
        tour.extend(segment(&image(i), &image((i + 1) % n), r));
    }
    if tour.len() == tour_period_start {
        // the cycle never moves; park at the first point
        tour.push(image(0));
    }

    let half = Rational::new(1.into(), (2 * r).into());
    let mut points = Vec::with_capacity(n);
    for i in 0..n {
        let me = image(i);
        let values: Vec<Rational> = tour.iter().map(|y| sup_dist(&me, y)).collect();
        let (head, cycle) = values.split_at(tour_period_start);
        let f = UPoint::new(EPSeq::new(head.to_vec(), cycle.to_vec())?)
            .map_err(|e| Error::invariant(format!("image of {} is not a U-point: {e}", space.points[i])))?;
        let proj =
            orbit_projection(&f, r).map_err(|e| Error::invariant(format!("image of {}: {e}", space.points[i])))?;
        if proj.distance > half {
            return Err(Error::invariant(format!(
                "{} lands {} from the orbit of w_{r}, above 1/{}",
                space.points[i],
                proj.distance,
                2 * r
            )));
        }
        points.push(EmbeddedPoint { name: space.points[i].clone(), f, p: proj.p, membership_distance: proj.distance });
    }

    for i in 0..n {
        for j in i + 1..n {
            let d = dist(&points[i].f, &points[j].f).d;
            if d != *space.dist(i, j) {
                return Err(Error::invariant(format!(
                    "embedding distorts d({}, {}): {} -> {d}",
                    space.points[i],
                    space.points[j],
                    space.dist(i, j)
                )));
            }
        }
    }

    Ok(EmbeddingReport { r, points, tour, tour_period_start })
}
