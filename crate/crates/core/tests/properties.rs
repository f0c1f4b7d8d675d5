//! Cross-module properties.

use berkovich_line::berkline::{gauss_eval, gauss_eval_nd, invert, path, point_eq, rational_eval, BerkPoint};
use berkovich_line::fields::{PAdic, Polynomial};
use berkovich_line::trees::{convex_hull, entry_time, retract, tree_contains, Time};
use berkovich_line::tropical::{
    newton_breakpoints, poly_dimension, poly_member, trop_eval, valuation_terms, Atom, Cmp, Dimension, DimensionReport,
    Formula, MonoTerm, TropicalPolyhedron,
};
use berkovich_line::valgrp::{Gamma0Value, SegmentPoint};
use num_rational::BigRational;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn f3() -> PAdic {
    PAdic::new(3).unwrap()
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-60i64..=60, prop::sample::select(vec![1i64, 2, 3, 9, 27, 5])).prop_map(|(n, d)| q(n, d))
}

fn radius() -> impl Strategy<Value = Gamma0Value> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| Gamma0Value::Fin(q(n, d)))
}

fn type2() -> impl Strategy<Value = BerkPoint<BigRational>> {
    (rational(), radius()).prop_map(|(c, r)| BerkPoint::disc(c, r))
}

fn any_point() -> impl Strategy<Value = BerkPoint<BigRational>> {
    prop_oneof![
        1 => Just(BerkPoint::Infinity),
        2 => rational().prop_map(BerkPoint::simple),
        6 => type2(),
    ]
}

fn poly_coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-243i64..=243, 1..7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn gauss_norm_is_the_tropicalization(coeffs in prop::collection::vec((prop::collection::vec(0u32..4, 2), -81i64..=81), 1..6), r1 in radius(), r2 in radius()) {
        let f = f3();
        let p = Polynomial::new(&f, 2, coeffs.into_iter().map(|(e, c)| (e, q(c, 1)))).unwrap();
        prop_assume!(!p.is_zero());
        let radii = [r1, r2];
        prop_assert_eq!(gauss_eval_nd(&f, &radii, &p).unwrap(), trop_eval(&valuation_terms(&f, &p), &radii).unwrap());
    }

    #[test]
    fn univariate_gauss_norm_at_zero_center_agrees_with_nd(coeffs in poly_coeffs(), r in radius()) {
        let f = f3();
        let p = Polynomial::from_coeffs(&f, coeffs.iter().map(|&c| q(c, 1)).collect());
        prop_assume!(!p.is_zero());
        let x = BerkPoint::disc(q(0, 1), r.clone());
        prop_assert_eq!(gauss_eval(&f, &x, &p).unwrap(), gauss_eval_nd(&f, &[r], &p).unwrap());
    }

    #[test]
    fn newton_multiplicities_count_nonzero_roots(coeffs in poly_coeffs()) {
        let f = f3();
        let p = Polynomial::from_coeffs(&f, coeffs.iter().map(|&c| q(c, 1)).collect());
        prop_assume!(!p.is_zero());
        let lowest = coeffs.iter().position(|&c| c != 0).unwrap() as u32;
        let total: u32 = newton_breakpoints(&f, &p).unwrap().iter().map(|(_, m)| m).sum();
        prop_assert_eq!(total, p.degree().unwrap() - lowest);
    }

    #[test]
    fn inversion_is_an_involution_and_swaps_norms(x in any_point(), a in rational()) {
        let f = f3();
        let back = invert(&f, &invert(&f, &x));
        prop_assert!(point_eq(&f, &back, &x));
        // |T − a| at x equals |1 − aT|/|T| at ψ(x)
        let lin = Polynomial::from_coeffs(&f, vec![-a.clone(), q(1, 1)]);
        let num = Polynomial::from_coeffs(&f, vec![q(1, 1), -a]);
        let den = Polynomial::from_coeffs(&f, vec![q(0, 1), q(1, 1)]);
        let one = Polynomial::from_coeffs(&f, vec![q(1, 1)]);
        prop_assert_eq!(rational_eval(&f, &x, &lin, &one), rational_eval(&f, &invert(&f, &x), &num, &den));
    }

    #[test]
    fn geodesics_lie_in_the_hull_of_their_endpoints(x in any_point(), y in any_point()) {
        let f = f3();
        let hull = convex_hull(&f, &[x.clone(), y.clone()], false).unwrap();
        let p = path(&f, &x, &y);
        for (k, piece) in p.segment.pieces().iter().enumerate() {
            let (lo, hi) = piece.bounds();
            for value in [lo.clone(), hi.clone()] {
                let z = p.point_at(&SegmentPoint { piece: k, value });
                prop_assert!(tree_contains(&f, &hull, &z), "{:?} on [{:?}; {:?}]", z, x, y);
            }
        }
    }

    #[test]
    fn retraction_lands_once_the_entry_time_passes(gens in prop::collection::vec(any_point(), 1..5), x in any_point()) {
        let f = f3();
        let tree = convex_hull(&f, &gens, true).unwrap();
        let tau = entry_time(&f, &tree, &x).unwrap();
        let landed = retract(&f, &tree, &tau, &x).unwrap();
        prop_assert!(tree_contains(&f, &tree, &landed));
        prop_assert!(point_eq(&f, &landed, &retract(&f, &tree, &Time::end(), &x).unwrap()));
    }
}

fn atom(l: MonoTerm, c: Cmp, r: MonoTerm) -> Formula {
    Formula::Atom(Atom::new(l, c, r).unwrap())
}

fn var_vs(i: usize, c: Cmp, e: i64, n: usize) -> Formula {
    atom(MonoTerm::var(i, n), c, MonoTerm::constant(Gamma0Value::exp(e), n))
}

/// A box with some coordinates pinned to a value and the rest ranging over
/// nondegenerate intervals.
fn boxed(n: usize, sides: &[(i64, i64)]) -> Formula {
    let mut parts = Vec::new();
    for (i, &(lo, width)) in sides.iter().enumerate() {
        parts.push(var_vs(i, Cmp::Le, lo, n));
        parts.push(var_vs(i, Cmp::Ge, lo + width, n));
    }
    Formula::And(parts)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn injected_boxes_have_the_expected_dimension(sides in prop::collection::vec((-4i64..=4, 0i64..=3), 1..=4)) {
        let n = sides.len();
        let free = sides.iter().filter(|(_, w)| *w > 0).count();
        let p = TropicalPolyhedron::new(n, boxed(n, &sides)).unwrap();
        prop_assert_eq!(poly_dimension(&p).unwrap(), DimensionReport { dimension: Dimension::Finite(free), certified: true });
        // the box corner is a member; just outside it is not
        let corner: Vec<Gamma0Value> = sides.iter().map(|&(lo, _)| Gamma0Value::exp(lo)).collect();
        prop_assert!(poly_member(&p, &corner).unwrap());
        let mut outside = corner.clone();
        outside[0] = Gamma0Value::exp(sides[0].0 - 1);
        prop_assert!(!poly_member(&p, &outside).unwrap());
    }

    #[test]
    fn union_dimension_is_the_maximum(a in prop::collection::vec((-4i64..=4, 0i64..=3), 2), b in prop::collection::vec((-4i64..=4, 0i64..=3), 2)) {
        let dim = |s: &[(i64, i64)]| s.iter().filter(|(_, w)| *w > 0).count();
        let p = TropicalPolyhedron::new(2, Formula::Or(vec![boxed(2, &a), boxed(2, &b)])).unwrap();
        let r = poly_dimension(&p).unwrap();
        prop_assert_eq!(r.dimension, Dimension::Finite(dim(&a).max(dim(&b))));
    }

    #[test]
    fn emptied_boxes_have_no_dimension(sides in prop::collection::vec((-4i64..=4, 0i64..=3), 1..=3)) {
        let n = sides.len();
        let contradiction = Formula::And(vec![boxed(n, &sides), var_vs(0, Cmp::Gt, sides[0].0, n)]);
        let p = TropicalPolyhedron::new(n, contradiction).unwrap();
        prop_assert_eq!(poly_dimension(&p).unwrap().dimension, Dimension::NegInfinity);
    }
}

#[test]
fn boxes_on_a_coordinate_axis_are_not_certified() {
    // {0} × [Fin(1), Fin(0)] lives on the stratum where the first coordinate vanishes
    let n = 2;
    let f = Formula::And(vec![
        atom(MonoTerm::var(0, n), Cmp::Le, MonoTerm::constant(Gamma0Value::Zero, n)),
        var_vs(1, Cmp::Le, 0, n),
        var_vs(1, Cmp::Ge, 1, n),
    ]);
    let r = poly_dimension(&TropicalPolyhedron::new(n, f).unwrap()).unwrap();
    assert_eq!(
        r,
        DimensionReport {
            dimension: Dimension::Finite(1),
            certified: false
        }
    );
}
