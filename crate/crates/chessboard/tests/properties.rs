use chessboard::cubic::{self, CubicMatrix};
use chessboard::enveloping::{self, SquareMatrix};
use chessboard::exterior::{self, CoordinateAlgebra, FormElement, Side};
use chessboard::graded::{self, GradedMatrix};
use chessboard::sampling::prng;
use chessboard::{dirac, ExactScalar};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = ExactScalar> {
    (prop::array::uniform8(-4i64..=4), 1i64..=3).prop_map(|(c, d)| ExactScalar::from_int_coeffs(c) * ExactScalar::from_ratio(1, d))
}

fn sparse_scalar() -> impl Strategy<Value = ExactScalar> {
    prop_oneof![Just(ExactScalar::zero()), scalar()]
}

fn cubic2() -> impl Strategy<Value = CubicMatrix> {
    prop::collection::vec(sparse_scalar(), 8).prop_map(|v| {
        let mut it = v.into_iter();
        CubicMatrix::from_fn(2, |_, _, _| it.next().unwrap())
    })
}

fn square(n: usize) -> impl Strategy<Value = SquareMatrix> {
    prop::collection::vec(scalar(), n * n).prop_map(move |v| {
        let mut it = v.into_iter();
        SquareMatrix::from_fn(n, |_, _| it.next().unwrap())
    })
}

fn graded(grade: u8) -> impl Strategy<Value = GradedMatrix> {
    prop::array::uniform3(scalar()).prop_map(move |e| GradedMatrix::from_entries(grade, e).unwrap())
}

fn small_rational() -> impl Strategy<Value = ExactScalar> {
    (-20i64..=20, 1i64..=6).prop_map(|(p, q)| ExactScalar::from_ratio(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism(a in scalar(), b in scalar()) {
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        prop_assert_eq!((&a * &b).conjugate(), a.conjugate() * b.conjugate());
        prop_assert_eq!(ExactScalar::from_rational(&a.norm()).is_zero(), a.is_zero());
    }

    #[test]
    fn numeric_image_is_a_homomorphism(a in scalar(), b in scalar()) {
        let (x, y, p) = (a.to_complex(), b.to_complex(), (&a * &b).to_complex());
        prop_assert!((x * y - p).norm() <= 1e-9 * p.norm().max(1.0));
    }

    #[test]
    fn star_is_cyclically_covariant(a in cubic2(), b in cubic2(), c in cubic2()) {
        let x = cubic::star(&a, &b, &c).unwrap();
        prop_assert_eq!(x, cubic::cyclic_j(&cubic::star(&b, &c, &a).unwrap()));
    }

    #[test]
    fn oslash_is_star_with_cyclic_twists(a in cubic2(), b in cubic2(), c in cubic2()) {
        let jjc = cubic::cyclic_j(&cubic::cyclic_j(&c));
        prop_assert_eq!(cubic::oslash(&a, &b, &c).unwrap(), cubic::star(&cubic::cyclic_j(&a), &b, &jjc).unwrap());
    }

    #[test]
    fn cyclic_j_has_order_three(a in cubic2()) {
        prop_assert_eq!(cubic::cyclic_j(&cubic::cyclic_j(&cubic::cyclic_j(&a))), a);
    }

    #[test]
    fn bracket_properties(a in cubic2(), b in cubic2(), c in cubic2()) {
        prop_assert!(cubic::j_bracket(&a, &a, &a).unwrap().is_zero());
        let x = cubic::j_bracket(&a, &b, &c).unwrap();
        prop_assert_eq!(&x, &cubic::cyclic_j(&x).scale(&ExactScalar::j2()));
        // cyclic shift of arguments multiplies by j²
        prop_assert_eq!(cubic::j_bracket(&b, &c, &a).unwrap(), x.scale(&ExactScalar::j2()));
    }

    #[test]
    fn j_commutators_are_traceless(a in square(2), b in square(2), c in square(2)) {
        prop_assert!(enveloping::j_commutator(&a, &b, &c).unwrap().trace().is_zero());
    }

    #[test]
    fn j_commutators_are_traceless_3x3(a in square(3), b in square(3), c in square(3)) {
        prop_assert!(enveloping::j_commutator(&a, &b, &c).unwrap().trace().is_zero());
    }

    #[test]
    fn graded_derivations_are_nilpotent(a in graded(1), b0 in graded(0), b1 in graded(1), b2 in graded(2)) {
        for b in [b0, b1, b2] {
            prop_assert!(graded::derivation_power(&a, &b, 3).is_zero());
        }
    }

    #[test]
    fn matrix_d_cubed_vanishes(b0 in graded(0), b2 in graded(2)) {
        prop_assert!(graded::matrix_d_power(&b0, 3).is_zero());
        prop_assert!(graded::matrix_d_power(&b2, 3).is_zero());
    }

    #[test]
    fn pure_gauge_is_flat(u in prop::array::uniform3(scalar().prop_filter("invertible", |x| !x.is_zero()))) {
        let u = GradedMatrix::from_entries(0, u).unwrap();
        prop_assert!(graded::curvature_omega(&graded::pure_gauge(&u).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn rescaled_curvature_covariance(a in graded(1), g in 0u8..3, u in prop::array::uniform3(scalar().prop_filter("invertible", |x| !x.is_zero()))) {
        let u = GradedMatrix::from_entries(g, u).unwrap();
        prop_assert!(graded::curvature_covariant_rescaled(&a, &u).unwrap());
    }

    #[test]
    fn flat_forms_agree(a in scalar(), b in scalar(), c in scalar()) {
        let (x, y) = graded::flat_forms(&a, &b, &c);
        prop_assert_eq!(x, y);
    }

    #[test]
    fn zeta_r2_identity(w in small_rational(), x in small_rational(), y in small_rational(), z in small_rational()) {
        let c = dirac::cylindrical_identity_check(&w, &[x, y, z]);
        prop_assert!(c.cubic_equals_zeta_r2 && c.factorization);
    }

    #[test]
    fn surface_points_satisfy_relation(k in prop::array::uniform3(-3.0f64..3.0), m in -2.0f64..2.0) {
        let p = dirac::DispersionPoint::on_surface(k, m);
        prop_assert!(p.satisfies(1e-9));
        prop_assert!(p.negated().satisfies(1e-9));
        let rhs = dirac::cubic_form(k) + m * m * m;
        let roots_ok = dirac::solve_omega(k, m).iter().all(|w| (w * w * w - rhs).norm() <= 1e-9 * rhs.abs().max(1.0));
        prop_assert!(roots_ok);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn exterior_d_cubed_vanishes(seed in any::<u64>(), with_eps in any::<bool>()) {
        let alg = if with_eps {
            let e = ExactScalar::j() + ExactScalar::from_ratio(1, 2);
            let z = ExactScalar::zero;
            CoordinateAlgebra::with_epsilon(vec![vec![z(), e.clone(), z()], vec![-e, z(), z()], vec![z(), z(), z()]]).unwrap()
        } else {
            CoordinateAlgebra::commutative(3)
        };
        let f = exterior::random_poly(&alg, &mut prng(seed), 4, 5);
        prop_assert!(FormElement::function(3, Side::D, f.clone()).d().d().d().is_zero());
        prop_assert!(FormElement::function(3, Side::Delta, f).delta().delta().delta().is_zero());
    }

    #[test]
    fn d_squared_of_one_forms(seed in any::<u64>()) {
        let alg = CoordinateAlgebra::commutative(3);
        let mut rng = prng(seed);
        let omega: Vec<_> = (0..3).map(|_| exterior::random_poly(&alg, &mut rng, 3, 4)).collect();
        prop_assert_eq!(exterior::d2_oneform(3, &omega), exterior::d2_oneform_formula(3, &omega));
    }
}
