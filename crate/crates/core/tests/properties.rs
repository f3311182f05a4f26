//! Property tests for the structural invariants: exact incidence, roundtrip
//! identities, lift-choice invariances, and ring laws of the polynomial layer.

use proptest::prelude::*;

use pentagram_core::laurent::LaurentPoly;
use pentagram_core::linalg;
use pentagram_core::maps::scaling_transform;
use pentagram_core::polygon::{
    coefficients_from_window, tilde_from_rows, vertices_from_coefficients, CoefficientArray,
    Coefficients, TwistedPolygon,
};
use pentagram_core::projective::{hyperplane_through, intersect_hyperplanes, LiftedVertex};
use pentagram_core::scalar::{rat, ExactScalar};

fn small_rat() -> impl Strategy<Value = ExactScalar> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = ExactScalar> {
    ((1i64..=6), (1i64..=4), any::<bool>())
        .prop_map(|(n, d, neg)| rat(if neg { -n } else { n }, d))
}

fn coeff_array(d: usize, n: usize) -> impl Strategy<Value = CoefficientArray> {
    proptest::collection::vec(proptest::collection::vec(nonzero_rat(), d), n)
        .prop_map(move |rows| CoefficientArray { d, n, rows })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hyperplane_incidence_is_exact_zero(
        pts in proptest::collection::vec(proptest::collection::vec(small_rat(), 4), 3)
    ) {
        let verts: Vec<LiftedVertex> = pts.into_iter().map(LiftedVertex).collect();
        if let Ok(h) = hyperplane_through(&verts, 3) {
            for p in &verts {
                prop_assert!(h.contains(p));
            }
        }
    }

    #[test]
    fn intersection_lies_on_all_planes(
        rows in proptest::collection::vec(proptest::collection::vec(small_rat(), 4), 3)
    ) {
        let planes: Vec<pentagram_core::projective::Hyperplane> =
            rows.into_iter().map(pentagram_core::projective::Hyperplane).collect();
        if planes.iter().any(|h| h.0.iter().all(|x| x == &ExactScalar::from_integer(0.into()))) {
            return Ok(());
        }
        if let Ok(p) = intersect_hyperplanes(&planes, 3) {
            for h in &planes {
                prop_assert!(h.contains(&p));
            }
        }
    }

    #[test]
    fn coefficients_roundtrip(coeffs in coeff_array(3, 7)) {
        // window determinants are 1 by construction; the extraction pipeline
        // must reproduce the array bit-exactly
        if let Ok(poly) = TwistedPolygon::from_coefficients(coeffs.clone()) {
            let back = coefficients_from_window(3, 7, &poly.window, &poly.monodromy)
                .unwrap()
                .periodic()
                .unwrap();
            prop_assert_eq!(back, coeffs);
        }
    }

    #[test]
    fn determinant_preservation(coeffs in coeff_array(2, 5)) {
        if let Ok(v) = vertices_from_coefficients(&coeffs, 12) {
            for j in 0..9 {
                let m: Vec<Vec<ExactScalar>> = (0..3).map(|t| v[j + t].0.clone()).collect();
                prop_assert_eq!(linalg::det(&m), ExactScalar::from_integer(1.into()));
            }
        }
    }

    #[test]
    fn tilde_invariant_under_admissible_relift(
        coeffs in coeff_array(3, 7),
        t0 in nonzero_rat(),
        t1 in nonzero_rat(),
        t2 in nonzero_rat(),
    ) {
        // multipliers (d+1)-periodic with product one
        let t3 = (&t0 * &t1 * &t2).recip();
        let t = [t0, t1, t2, t3];
        let relift: Vec<Vec<ExactScalar>> = (0..8usize)
            .map(|j| {
                (1..=3usize)
                    .map(|k| coeffs.entry(j as i64, k) * &t[j % 4] / &t[(j + k) % 4])
                    .collect()
            })
            .collect();
        let base: Vec<Vec<ExactScalar>> =
            (0..8usize).map(|j| coeffs.rows[j % 7].clone()).collect();
        let lhs = tilde_from_rows(3, 7, &relift);
        let rhs = tilde_from_rows(3, 7, &base);
        if let (Ok(lhs), Ok(rhs)) = (lhs, rhs) {
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn scaling_action_composes(coeffs in coeff_array(3, 5), s in nonzero_rat(), t in nonzero_rat()) {
        for m in 1..3usize {
            let one = scaling_transform(&coeffs, m, &s).unwrap();
            let two = scaling_transform(&one, m, &t).unwrap();
            let direct = scaling_transform(&coeffs, m, &(&s * &t)).unwrap();
            prop_assert_eq!(two, direct);
        }
    }

    #[test]
    fn laurent_ring_laws(
        a in proptest::collection::vec((-4i64..=4, -3i64..=3), 0..5),
        b in proptest::collection::vec((-4i64..=4, -3i64..=3), 0..5),
        c in proptest::collection::vec((-4i64..=4, -3i64..=3), 0..5),
    ) {
        let mk = |v: Vec<(i64, i64)>| {
            let mut p = LaurentPoly::zero();
            for (coeff, exp) in v {
                p = &p + &LaurentPoly::monomial(exp, rat(coeff, 1));
            }
            p
        };
        let (a, b, c) = (mk(a), mk(b), mk(c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &a) * &c, LaurentPoly::zero());
    }

    #[test]
    fn quasi_periodic_tilde_is_periodic(coeffs in coeff_array(2, 6)) {
        // for gcd(n, d+1) > 1 the tilde coordinates still close up
        if let Ok(poly) = TwistedPolygon::from_coefficients(coeffs.clone()) {
            match coefficients_from_window(2, 6, &poly.window, &poly.monodromy) {
                Ok(res) => {
                    let tilde = res.tilde().unwrap();
                    let direct = Coefficients::Periodic(coeffs).tilde().unwrap();
                    prop_assert_eq!(tilde, direct);
                }
                Err(_) => {}
            }
        }
    }
}
