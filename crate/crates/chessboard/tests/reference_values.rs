//! Closed-form counts and constants: table sizes, bracket constants, class counts, dimensions.

use chessboard::cubic::{self, Law};
use chessboard::enveloping::{self, SearchConfig, SquareMatrix};
use chessboard::grassmann::{self, GrassmannAlgebra};
use chessboard::{automorphism, dirac, graded, ExactScalar};

#[test]
fn table_sizes() {
    assert_eq!(cubic::mult_table(2, Law::Star).unwrap().rows.len(), 512);
    assert_eq!(cubic::mult_table(2, Law::Oslash).unwrap().rows.len(), 8 * 8 * 8);
    assert_eq!(cubic::mult_table(3, Law::Oslash).unwrap().rows.len(), 19_683);
}

#[test]
fn normalized_rho_constants_are_minus_one() {
    let [x, y] = cubic::normalized_rho_basis();
    let m1 = ExactScalar::from_int(-1);
    assert_eq!(cubic::bracket_constant(&x, &y), Some(m1.clone()));
    assert_eq!(cubic::bracket_constant(&y, &x), Some(m1));
}

#[test]
fn pauli_bracket_is_minus_two_sigma2() {
    let [s1, s2, _] = enveloping::pauli();
    assert_eq!(enveloping::j_commutator(&s1, &s2, &s1).unwrap(), s2.scale(&ExactScalar::from_int(-2)));
    let id = SquareMatrix::identity(2);
    let lhs = enveloping::j_commutator(&s1, &id, &s2).unwrap();
    assert_eq!(lhs, s1.mul(&s2).unwrap().sub(&s2.mul(&s1).unwrap()).unwrap());
}

#[test]
fn forty_double_brackets_without_identities() {
    assert_eq!(enveloping::enumerate_double_brackets().classes.len(), 40);
    let cert = enveloping::double_bracket_identity_search(&SearchConfig::ternary(2, 1)).unwrap();
    assert_eq!(cert.nullity, 0);
}

#[test]
fn grassmann_dimension_formula() {
    for n in 1..=4u8 {
        let n64 = n as u64;
        assert_eq!(GrassmannAlgebra::theta_only(n).basis().len() as u64, n64 + n64 * n64 + (n64.pow(3) - n64) / 3);
    }
    assert_eq!(grassmann::dimension(2, false), 8);
    assert_eq!(grassmann::dimension(3, false), 20);
}

#[test]
fn automorphism_determinant_squared_is_one() {
    for l in [automorphism::rotation_form(ExactScalar::from_ratio(5, 13), ExactScalar::from_ratio(12, 13)), automorphism::reflection()] {
        assert!(automorphism::check_lambda_equations(&l));
        assert!(l.determinant().pow(2).is_one());
    }
}

#[test]
fn flat_cubic_has_symmetric_family() {
    let s = ExactScalar::j() - ExactScalar::one();
    assert!(graded::flat_condition(&s, &s, &s));
    let s2 = ExactScalar::j2() - ExactScalar::one();
    assert!(graded::flat_condition(&s2, &s2, &s2));
    assert_eq!(graded::enumerate_symmetric_flat().len(), 9);
}

#[test]
fn clifford_cubes_are_identity() {
    let id = SquareMatrix::identity(3);
    for q in dirac::q_matrices() {
        assert_eq!(q.mul(&q).unwrap().mul(&q).unwrap(), id);
    }
    let b = dirac::b_matrix();
    assert_eq!(b.mul(&b).unwrap().mul(&b).unwrap(), id);
}

#[test]
fn third_order_mixed_coefficient() {
    // The displayed third-order operator carries −1 on ∂x∂y∂z; the computed cube carries −3,
    // which is what the dispersion relation needs.
    let cube = dirac::operator_cube();
    assert_eq!(cube.mixed_coefficient, Some(ExactScalar::from_int(-3)));
    assert!(cube.matches_dispersion);
    assert_ne!(cube.scalar, Some(dirac::cubic_symbol(&ExactScalar::from_int(-1))));
}
