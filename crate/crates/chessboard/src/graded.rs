//! Z3-graded 3×3 matrices: graded commutators and derivations, the differential `dB = ηB − j^b Bη`,
//! and the matrix-model connection with its curvature `Ω = d²A + d(A²) + A dA + A³`.

use serde::{Deserialize, Serialize};

use crate::enveloping::SquareMatrix;
use crate::error::{ChessError, Result};
use crate::scalar::ExactScalar;

/// A 3×3 matrix supported on the grade-`g` pattern: row `r` holds its only entry in column `r+g mod 3`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GradedMatrix {
    m: SquareMatrix,
    grade: u8,
}

fn pattern_col(row: usize, grade: u8) -> usize {
    (row + grade as usize) % 3
}

impl GradedMatrix {
    pub fn new(m: SquareMatrix, grade: u8) -> Result<Self> {
        if m.n() != 3 {
            return Err(ChessError::DimensionMismatch("graded matrices are 3x3".into()));
        }
        if grade > 2 {
            return Err(ChessError::InvalidGrade(format!("grade {grade}")));
        }
        for r in 0..3 {
            for c in 0..3 {
                if c != pattern_col(r, grade) && !m.get(r, c).is_zero() {
                    return Err(ChessError::InvalidGrade(format!("entry ({},{}) is off the grade-{grade} pattern", r + 1, c + 1)));
                }
            }
        }
        Ok(Self { m, grade })
    }

    /// Entries in row order: `[(1,1+g), (2,2+g), (3,3+g)]`.
    pub fn from_entries(grade: u8, e: [ExactScalar; 3]) -> Result<Self> {
        if grade > 2 {
            return Err(ChessError::InvalidGrade(format!("grade {grade}")));
        }
        let mut m = SquareMatrix::zeros(3);
        for (r, v) in e.into_iter().enumerate() {
            m.set(r, pattern_col(r, grade), v);
        }
        Ok(Self { m, grade })
    }

    pub fn zero(grade: u8) -> Self {
        Self { m: SquareMatrix::zeros(3), grade }
    }

    pub fn identity() -> Self {
        Self { m: SquareMatrix::identity(3), grade: 0 }
    }

    /// The unit matrix `E_{r,c}` (0-based) with its induced grade.
    pub fn unit(r: usize, c: usize) -> Self {
        let mut m = SquareMatrix::zeros(3);
        m.set(r, c, ExactScalar::one());
        Self { m, grade: ((c + 3 - r) % 3) as u8 }
    }

    /// All nine units, row-major.
    pub fn unit_basis() -> Vec<Self> {
        (0..3).flat_map(|r| (0..3).map(move |c| Self::unit(r, c))).collect()
    }

    pub fn grade(&self) -> u8 {
        self.grade
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.m
    }

    pub fn entries(&self) -> [ExactScalar; 3] {
        std::array::from_fn(|r| self.m.get(r, pattern_col(r, self.grade)).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self { m: self.m.mul(&rhs.m).expect("3x3"), grade: (self.grade + rhs.grade) % 3 }
    }

    fn same_grade(&self, rhs: &Self) -> Result<()> {
        // Zero is homogeneous of every grade.
        if self.grade != rhs.grade && !self.is_zero() && !rhs.is_zero() {
            return Err(ChessError::InvalidGrade(format!("adding grades {} and {}", self.grade, rhs.grade)));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_grade(rhs)?;
        let grade = if self.is_zero() { rhs.grade } else { self.grade };
        Ok(Self { m: self.m.add(&rhs.m)?, grade })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.scale(&ExactScalar::from_int(-1)))
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        Self { m: self.m.scale(s), grade: self.grade }
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Self { m: self.m.inverse()?, grade: (3 - self.grade) % 3 })
    }

    pub fn to_wire(&self) -> GradedWire {
        let [alpha, beta, gamma] = self.entries();
        GradedWire { grade: self.grade, alpha, beta, gamma }
    }
}

/// `{"grade":1,"alpha":…,"beta":…,"gamma":…}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedWire {
    pub grade: u8,
    pub alpha: ExactScalar,
    pub beta: ExactScalar,
    pub gamma: ExactScalar,
}

impl TryFrom<GradedWire> for GradedMatrix {
    type Error = ChessError;
    fn try_from(w: GradedWire) -> Result<Self> {
        GradedMatrix::from_entries(w.grade, [w.alpha, w.beta, w.gamma])
    }
}

/// `[A, B] = AB − j^{ab} BA`.
pub fn graded_commutator(a: &GradedMatrix, b: &GradedMatrix) -> GradedMatrix {
    let w = ExactScalar::j_pow((a.grade * b.grade) as i64);
    a.mul(b).add(&b.mul(a).scale(&-w)).expect("both terms share a grade")
}

/// `Der_A(B) = [A, B]`.
pub fn derivation(a: &GradedMatrix, b: &GradedMatrix) -> GradedMatrix {
    graded_commutator(a, b)
}

pub fn derivation_power(a: &GradedMatrix, b: &GradedMatrix, k: usize) -> GradedMatrix {
    (0..k).fold(b.clone(), |acc, _| derivation(a, &acc))
}

/// Whether `[A,B] = −j^{ab}[B,A]` holds for this pair.
pub fn antisymmetry_holds(a: &GradedMatrix, b: &GradedMatrix) -> bool {
    let w = ExactScalar::j_pow((a.grade * b.grade) as i64);
    graded_commutator(a, b) == graded_commutator(b, a).scale(&-w)
}

/// `[[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y]`.
pub fn jacobi_defect(x: &GradedMatrix, y: &GradedMatrix, z: &GradedMatrix) -> GradedMatrix {
    let t1 = graded_commutator(&graded_commutator(x, y), z);
    let t2 = graded_commutator(&graded_commutator(y, z), x);
    let t3 = graded_commutator(&graded_commutator(z, x), y);
    t1.add(&t2).and_then(|s| s.add(&t3)).expect("all terms share a grade")
}

/// First unit triple of the given grades (row-major search) with nonzero Jacobi defect.
pub fn jacobi_defect_witness(grades: [u8; 3]) -> Option<([GradedMatrix; 3], GradedMatrix)> {
    let of = |g: u8| GradedMatrix::unit_basis().into_iter().filter(move |u| u.grade == g);
    for x in of(grades[0]) {
        for y in of(grades[1]) {
            for z in of(grades[2]) {
                let d = jacobi_defect(&x, &y, &z);
                if !d.is_zero() {
                    return Some(([x, y, z], d));
                }
            }
        }
    }
    None
}

/// The grade-1 matrix with unit entries; η³ = 1.
pub fn eta() -> GradedMatrix {
    GradedMatrix::from_entries(1, [ExactScalar::one(), ExactScalar::one(), ExactScalar::one()]).unwrap()
}

/// `dB = ηB − j^b Bη`.
pub fn matrix_d(b: &GradedMatrix) -> GradedMatrix {
    graded_commutator(&eta(), b)
}

pub fn matrix_d_power(b: &GradedMatrix, k: usize) -> GradedMatrix {
    (0..k).fold(b.clone(), |acc, _| matrix_d(&acc))
}

/// Checks `Im d ⊆ Ker d²` and `Im d² ⊆ Ker d` on the unit basis.
pub fn image_kernel_inclusions() -> (bool, bool) {
    let basis = GradedMatrix::unit_basis();
    let first = basis.iter().all(|b| matrix_d_power(&matrix_d(b), 2).is_zero());
    let second = basis.iter().all(|b| matrix_d(&matrix_d_power(b, 2)).is_zero());
    (first, second)
}

fn require_connection(a: &GradedMatrix) -> Result<()> {
    if a.grade != 1 && !a.is_zero() {
        return Err(ChessError::InvalidGrade(format!("connection must have grade 1, got {}", a.grade)));
    }
    Ok(())
}

/// `Ω = d²A + d(A²) + A·dA + A³`, a grade-0 matrix.
pub fn curvature_omega(a: &GradedMatrix) -> Result<GradedMatrix> {
    require_connection(a)?;
    let a = GradedMatrix { m: a.m.clone(), grade: 1 };
    let da = matrix_d(&a);
    let a2 = a.mul(&a);
    matrix_d(&da).add(&matrix_d(&a2))?.add(&a.mul(&da))?.add(&a2.mul(&a))
}

/// `(α+β+γ) + αβ + βγ + γα + αβγ = 0` and `(α+1)(β+1)(γ+1) = 1`, evaluated separately.
pub fn flat_forms(alpha: &ExactScalar, beta: &ExactScalar, gamma: &ExactScalar) -> (bool, bool) {
    let expanded = alpha + beta + gamma + alpha * beta + beta * gamma + gamma * alpha + alpha * beta * gamma;
    let one = ExactScalar::one();
    let factored = (alpha + &one) * (beta + &one) * (gamma + &one);
    (expanded.is_zero(), factored.is_one())
}

pub fn flat_condition(alpha: &ExactScalar, beta: &ExactScalar, gamma: &ExactScalar) -> bool {
    let (e, f) = flat_forms(alpha, beta, gamma);
    assert_eq!(e, f, "the two forms of the flatness condition disagree");
    f
}

/// The three symmetric solutions α=β=γ ∈ {0, j−1, j²−1}, then the six permutations of (0, j−1, j²−1).
pub fn enumerate_symmetric_flat() -> Vec<[ExactScalar; 3]> {
    let one = ExactScalar::one();
    let vals = [ExactScalar::zero(), ExactScalar::j() - &one, ExactScalar::j2() - &one];
    let mut out: Vec<[ExactScalar; 3]> = vals.iter().map(|v| [v.clone(), v.clone(), v.clone()]).collect();
    for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        out.push(p.map(|k| vals[k].clone()));
    }
    out
}

/// `U⁻¹dU` for invertible homogeneous `U`.
pub fn pure_gauge(u: &GradedMatrix) -> Result<GradedMatrix> {
    Ok(u.inverse()?.mul(&matrix_d(u)))
}

/// `A' = U⁻¹AU + U⁻¹dU`.
pub fn gauge_transform(a: &GradedMatrix, u: &GradedMatrix) -> Result<GradedMatrix> {
    require_connection(a)?;
    let ui = u.inverse()?;
    let a = GradedMatrix { m: a.m.clone(), grade: 1 };
    ui.mul(&a).mul(u).add(&ui.mul(&matrix_d(u)))
}

/// Whether `Ω(A') = U⁻¹ Ω(A) U`.
pub fn curvature_covariant(a: &GradedMatrix, u: &GradedMatrix) -> Result<bool> {
    let lhs = curvature_omega(&gauge_transform(a, u)?)?;
    let rhs = u.inverse()?.mul(&curvature_omega(a)?).mul(u);
    Ok(lhs == rhs)
}

/// Whether `Ω(j^{−u}A') = U⁻¹ Ω(A) U`, the relation that survives for `U` of grade `u ≠ 0`.
pub fn curvature_covariant_rescaled(a: &GradedMatrix, u: &GradedMatrix) -> Result<bool> {
    let shifted = gauge_transform(a, u)?.scale(&ExactScalar::j_pow(-(u.grade as i64)));
    let rhs = u.inverse()?.mul(&curvature_omega(a)?).mul(u);
    Ok(curvature_omega(&shifted)? == rhs)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugatedOperator {
    /// `U⁻¹(d+A)(UΦ) = dΦ + j^u AΦ`
    pub literal: bool,
    /// `U⁻¹(d+A)(UΦ) = j^u dΦ + A'Φ`
    pub derived: bool,
}

/// Compares `U⁻¹(d+A)U` acting on `Φ` with the two candidate right-hand sides.
pub fn conjugated_operator(a: &GradedMatrix, u: &GradedMatrix, phi: &GradedMatrix) -> Result<ConjugatedOperator> {
    require_connection(a)?;
    let a = GradedMatrix { m: a.m.clone(), grade: 1 };
    let ui = u.inverse()?;
    let up = u.mul(phi);
    let lhs = ui.mul(&matrix_d(&up).add(&a.mul(&up))?);
    let ju = ExactScalar::j_pow(u.grade as i64);
    let literal = matrix_d(phi).add(&a.mul(phi).scale(&ju))?;
    let derived = matrix_d(phi).scale(&ju).add(&gauge_transform(&a, u)?.mul(phi))?;
    Ok(ConjugatedOperator { literal: lhs == literal, derived: lhs == derived })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> ExactScalar {
        ExactScalar::from_int(v)
    }

    #[test]
    fn constructor_rejects_off_pattern() {
        let mut m = SquareMatrix::zeros(3);
        m.set(0, 0, s(1));
        assert!(GradedMatrix::new(m.clone(), 1).is_err());
        assert!(GradedMatrix::new(m, 0).is_ok());
    }

    #[test]
    fn grade_one_cube_is_scalar() {
        let a = GradedMatrix::from_entries(1, [s(2), s(3), s(5)]).unwrap();
        let a3 = a.mul(&a).mul(&a);
        assert_eq!(a3, GradedMatrix::identity().scale(&s(30)));
    }

    #[test]
    fn eta_cubes_to_one_and_d_cubes_to_zero() {
        let e = eta();
        assert_eq!(e.mul(&e).mul(&e), GradedMatrix::identity());
        for b in GradedMatrix::unit_basis() {
            assert!(matrix_d_power(&b, 3).is_zero());
        }
        assert!(matrix_d(&GradedMatrix::identity()).is_zero());
        assert_eq!(image_kernel_inclusions(), (true, true));
    }

    #[test]
    fn grade_zero_derivation_is_not_nilpotent() {
        let a = GradedMatrix::from_entries(0, [s(1), s(2), s(4)]).unwrap();
        assert!(GradedMatrix::unit_basis().iter().any(|b| !derivation_power(&a, b, 3).is_zero()));
    }

    #[test]
    fn jacobi_defect_has_a_witness() {
        assert!(jacobi_defect_witness([1, 1, 1]).is_some());
        assert!(jacobi_defect_witness([0, 0, 0]).is_none());
    }

    #[test]
    fn flat_examples() {
        let one = ExactScalar::one();
        let jm = ExactScalar::j() - &one;
        assert!(flat_condition(&s(0), &s(0), &s(0)));
        assert!(flat_condition(&jm, &jm, &jm));
        assert!(!flat_condition(&one, &one, &one));
        let a = GradedMatrix::from_entries(1, [jm.clone(), jm.clone(), jm]).unwrap();
        assert!(curvature_omega(&a).unwrap().is_zero());
    }

    #[test]
    fn pure_gauge_of_diagonal_is_grade_one() {
        let u = GradedMatrix::from_entries(0, [s(2), s(3), s(7)]).unwrap();
        let a = pure_gauge(&u).unwrap();
        assert_eq!(a.grade(), 1);
        assert_eq!(a.entries(), [ExactScalar::from_ratio(1, 2), ExactScalar::from_ratio(4, 3), ExactScalar::from_ratio(-5, 7)]);
        assert!(curvature_omega(&a).unwrap().is_zero());
    }

    #[test]
    fn wrong_grade_connection_is_rejected() {
        assert!(curvature_omega(&GradedMatrix::identity()).is_err());
    }
}
