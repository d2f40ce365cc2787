//! Cross-module properties driven by proptest strategies.

use num_traits::{Signed, Zero};
use proptest::prelude::*;

use oscillab::ellinf::{approximate_in_orbit, embed_t, make_xk, round_h};
use oscillab::rational::rat;
use oscillab::rigidsurj::{apply, apply_u, EARigidSurjection};
use oscillab::urysohn::{dist, make_wr, orbit_projection, oscillation};
use oscillab::{EPSeq, Rational, UPoint};

fn unit() -> impl Strategy<Value = Rational> {
    (1i64..=12).prop_flat_map(|d| (0..=d).prop_map(move |n| rat(n, d)))
}

fn signed_unit() -> impl Strategy<Value = Rational> {
    (1i64..=12).prop_flat_map(|d| (-d..=d).prop_map(move |n| rat(n, d)))
}

fn upoint() -> impl Strategy<Value = UPoint> {
    (prop::collection::vec(unit(), 0..=6), prop::collection::vec(unit(), 1..=4), any::<prop::sample::Index>()).prop_map(
        |(t, mut p, z)| {
            let i = z.index(p.len());
            p[i] = Rational::zero();
            UPoint::new(EPSeq::new(t, p).unwrap()).unwrap()
        },
    )
}

fn signed_seq() -> impl Strategy<Value = EPSeq> {
    (prop::collection::vec(signed_unit(), 0..=6), prop::collection::vec(signed_unit(), 1..=4))
        .prop_map(|(t, p)| EPSeq::new(t, p).unwrap())
}

/// Restricted-growth prefix followed by an admissible tail.
fn ea_rigid() -> impl Strategy<Value = EARigidSurjection> {
    (prop::collection::vec(0usize..=8, 0..=8), any::<prop::sample::Index>()).prop_map(|(raw, start)| {
        let mut prefix = Vec::with_capacity(raw.len());
        let mut fresh = 0;
        for v in raw {
            let v = v.min(fresh);
            if v == fresh {
                fresh += 1;
            }
            prefix.push(v);
        }
        let start = start.index(fresh + 1);
        let c = prefix.len() - start.min(prefix.len());
        EARigidSurjection::new(prefix, c).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distance_is_a_bounded_pseudometric(x in upoint(), y in upoint(), z in upoint()) {
        let (dxy, dyz, dxz) = (dist(&x, &y).d, dist(&y, &z).d, dist(&x, &z).d);
        prop_assert_eq!(&dxy, &dist(&y, &x).d);
        prop_assert!(dist(&x, &x).d.is_zero());
        prop_assert!(dxz <= &dxy + &dyz);
        prop_assert!(!dxy.is_negative() && dxy <= rat(1, 1));
    }

    #[test]
    fn distance_never_exceeds_sup_distance(x in upoint(), y in upoint()) {
        prop_assert!(dist(&x, &y).d <= x.seq().sup_distance(y.seq()));
    }

    #[test]
    fn action_is_isometric(x in upoint(), y in upoint(), s in signed_seq(), p in ea_rigid()) {
        prop_assert_eq!(dist(&apply_u(&x, &p), &apply_u(&y, &p)).d, dist(&x, &y).d);
        prop_assert_eq!(apply(&s, &p).sup_abs(), s.sup_abs());
    }

    #[test]
    fn action_is_a_right_action(s in signed_seq(), r in ea_rigid(), p in ea_rigid()) {
        let rp = EARigidSurjection::compose(&r, &p);
        prop_assert_eq!(apply(&s, &rp), apply(&apply(&s, &r), &p));
        prop_assert_eq!(apply(&s, &EARigidSurjection::identity()), s);
    }

    #[test]
    fn composition_is_associative(p in ea_rigid(), q in ea_rigid(), r in ea_rigid()) {
        let left = EARigidSurjection::compose(&EARigidSurjection::compose(&r, &q), &p);
        let right = EARigidSurjection::compose(&r, &EARigidSurjection::compose(&q, &p));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn rounding_on_arbitrary_rationals(u in signed_unit(), v in signed_unit(), k in 1usize..=6) {
        let (hu, hv) = (round_h(&u, k).unwrap(), round_h(&v, k).unwrap());
        let kk = rat(k as i64, 1);
        prop_assert!((&hu * &kk).is_integer());
        prop_assert!((&hu - &u).abs() <= rat(1, 2 * k as i64));
        prop_assert_eq!(round_h(&-u.clone(), k).unwrap(), -hu.clone());
        if (&u - &v).abs() <= rat(1, k as i64) {
            prop_assert!((hu - hv).abs() <= rat(1, k as i64));
        }
    }

    #[test]
    fn orbit_approximation_within_two_over_k(
        body in prop::collection::vec(signed_unit(), 1..=4),
        peak in any::<prop::sample::Index>(),
        negative in any::<bool>(),
        k in 1usize..=4,
    ) {
        let mut body = body;
        let i = peak.index(body.len());
        body[i] = if negative { rat(-1, 1) } else { rat(1, 1) };
        let a = EPSeq::finite(body);
        let cert = approximate_in_orbit(&a, k).unwrap();
        prop_assert!(cert.holds());
        let ta = embed_t(&a, k).unwrap();
        prop_assert_eq!(ta.sup_abs(), rat(1, 1));
        let xk = make_xk(k).unwrap();
        prop_assert_eq!(ta.sup_distance(&apply(xk.seq(), &cert.p)), cert.distance);
    }

    #[test]
    fn projection_of_orbit_points(p in ea_rigid(), r in 1usize..=5) {
        let y = apply_u(&make_wr(r).unwrap(), &p);
        let step = rat(1, r as i64);
        let gentle = (0..y.seq().window_len()).all(|n| (y.entry(n + 1) - y.entry(n)).abs() <= step);
        match orbit_projection(&y, r) {
            Ok(proj) => {
                prop_assert!(gentle && *y.entry(0) == rat(1, 1));
                prop_assert!(proj.distance <= rat(1, 2 * r as i64));
            }
            Err(_) => prop_assert!(!gentle || *y.entry(0) != rat(1, 1)),
        }
    }

    #[test]
    fn oscillation_bounds_every_pair(points in prop::collection::vec(upoint(), 1..=5)) {
        let osc = oscillation(&points).unwrap();
        for x in &points {
            for y in &points {
                prop_assert!(dist(x, y).d <= osc);
            }
        }
    }
}
