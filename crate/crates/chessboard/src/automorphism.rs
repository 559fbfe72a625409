//! Linear automorphisms of the two-dimensional ρ-algebra: the quartic Λ equations, their two
//! components, and the boost·rotation parametrization.
//!
//! Everything acts on the normalized pair from [`cubic::normalized_rho_basis`], on which the
//! bracket constants are both −1.

use num_complex::Complex64;
use serde::Serialize;

use crate::cubic::{self, CubicMatrix};
use crate::enveloping::SquareMatrix;
use crate::error::{ChessError, Result};
use crate::scalar::ExactScalar;

/// Λ^α_β stored as a 2×2 matrix, row α, column β.
pub type Lambda2 = SquareMatrix;
pub type Lambda2Approx = [[Complex64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AutomorphismComponent {
    DetPlus,
    DetMinus,
}

fn check_2x2(m: &SquareMatrix, what: &str) -> Result<()> {
    if m.n() != 2 {
        return Err(ChessError::DimensionMismatch(format!("{what} must be 2x2")));
    }
    Ok(())
}

/// `ρ̃^α_{ikm} = Λ^α_β U^p_i U^r_k U^s_m ρ^β_{prs}`.
pub fn transform_rho(lambda: &Lambda2, u: &SquareMatrix, rho: &[CubicMatrix; 2]) -> Result<[CubicMatrix; 2]> {
    check_2x2(lambda, "Λ")?;
    check_2x2(u, "U")?;
    if lambda.determinant().is_zero() || u.determinant().is_zero() {
        return Err(ChessError::DivisionByZero);
    }
    let moved: Vec<CubicMatrix> = rho
        .iter()
        .map(|r| {
            CubicMatrix::from_fn(2, |i, k, m| {
                let mut acc = ExactScalar::zero();
                for ([p, q, s], v) in r.nonzeros() {
                    let w = u.get(p, i) * u.get(q, k) * u.get(s, m);
                    if !w.is_zero() {
                        acc += w * v;
                    }
                }
                acc
            })
        })
        .collect();
    let out = |a: usize| moved[0].scale(lambda.get(a, 0)).add(&moved[1].scale(lambda.get(a, 1)));
    Ok([out(0), out(1)])
}

/// True when the transformed pair has the same bracket table as the original.
pub fn preserves_brackets(lambda: &Lambda2, u: &SquareMatrix) -> Result<bool> {
    let rho = cubic::normalized_rho_basis();
    let moved = transform_rho(lambda, u, &rho)?;
    Ok(cubic::bracket_table(&rho)? == cubic::bracket_table(&moved)?)
}

fn lambda_residuals<T>(l: [[T; 2]; 2]) -> [T; 4]
where
    T: Clone + std::ops::Mul<Output = T> + std::ops::Sub<Output = T>,
{
    let [[a, b], [c, d]] = l;
    let m = |x: &T, y: &T| x.clone() * y.clone();
    [
        m(&a, &(m(&d, &a) - m(&b, &c))) - d.clone(),
        m(&b, &(m(&c, &b) - m(&a, &d))) - c.clone(),
        m(&d, &(m(&a, &d) - m(&c, &b))) - a.clone(),
        m(&c, &(m(&b, &c) - m(&d, &a))) - b.clone(),
    ]
}

fn entries_2x2(l: &Lambda2) -> [[ExactScalar; 2]; 2] {
    [[l.get(0, 0).clone(), l.get(0, 1).clone()], [l.get(1, 0).clone(), l.get(1, 1).clone()]]
}

/// The four quartic conditions, e.g. `Λ¹₁(Λ²₂Λ¹₁ − Λ¹₂Λ²₁) = Λ²₂`.
pub fn check_lambda_equations(l: &Lambda2) -> bool {
    l.n() == 2 && lambda_residuals(entries_2x2(l)).iter().all(ExactScalar::is_zero)
}

pub fn check_lambda_equations_approx(l: &Lambda2Approx, tol: f64) -> bool {
    lambda_residuals(*l).iter().all(|r| r.norm() <= tol)
}

pub fn component_of(l: &Lambda2) -> Result<AutomorphismComponent> {
    if !check_lambda_equations(l) {
        return Err(ChessError::Unsupported("Λ does not solve the automorphism equations".into()));
    }
    let [[a, b], [c, d]] = entries_2x2(l);
    let det = l.determinant();
    if det.is_one() && a == d && b == -&c {
        Ok(AutomorphismComponent::DetPlus)
    } else if det == ExactScalar::from_int(-1) && a == -&d && b == c {
        Ok(AutomorphismComponent::DetMinus)
    } else {
        Err(ChessError::Unsupported(format!("solution with det {det} outside both components")))
    }
}

/// `[[a, b], [−b, a]]`; a solution when a² + b² = 1.
pub fn rotation_form(a: ExactScalar, b: ExactScalar) -> Lambda2 {
    SquareMatrix::from_rows(vec![vec![a.clone(), b.clone()], vec![-b, a]]).unwrap()
}

pub fn reflection() -> Lambda2 {
    SquareMatrix::from_ints(&[&[1, 0], &[0, -1]]).unwrap()
}

fn cmul(x: &Lambda2Approx, y: &Lambda2Approx) -> Lambda2Approx {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = x[r][0] * y[0][c] + x[r][1] * y[1][c];
        }
    }
    out
}

/// Boost `[[cosh ψ, i sinh ψ], [−i sinh ψ, cosh ψ]]` times rotation `[[cos φ, sin φ], [−sin φ, cos φ]]`.
pub fn lambda_from_angles(psi: f64, phi: f64) -> Lambda2Approx {
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    let boost = [[re(psi.cosh()), im(psi.sinh())], [im(-psi.sinh()), re(psi.cosh())]];
    let rot = [[re(phi.cos()), re(phi.sin())], [re(-phi.sin()), re(phi.cos())]];
    cmul(&boost, &rot)
}

pub fn det_approx(l: &Lambda2Approx) -> Complex64 {
    l[0][0] * l[1][1] - l[0][1] * l[1][0]
}

/// Structure constants `C[α][β][γ][δ]` of the normalized pair: `{ρ̂α, ρ̂β, ρ̂γ} = Σ_δ C ρ̂δ`.
pub fn structure_constants() -> Result<[[[[ExactScalar; 2]; 2]; 2]; 2]> {
    let table = cubic::bracket_table(&cubic::normalized_rho_basis())?;
    let mut out: [[[[ExactScalar; 2]; 2]; 2]; 2] = Default::default();
    for (idx, coeffs) in table.into_iter().enumerate() {
        let coeffs = coeffs.ok_or_else(|| ChessError::Unsupported("ρ pair does not close".into()))?;
        out[idx / 4][(idx / 2) % 2][idx % 2] = [coeffs[0].clone(), coeffs[1].clone()];
    }
    Ok(out)
}

/// Numeric preservation test via structure constants, with U = identity.
pub fn preserves_brackets_approx(l: &Lambda2Approx, tol: f64) -> Result<bool> {
    let c = structure_constants()?;
    let cc = |a: usize, b: usize, g: usize, d: usize| c[a][b][g][d].to_complex();
    for al in 0..2 {
        for be in 0..2 {
            for ga in 0..2 {
                for d in 0..2 {
                    let mut lhs = Complex64::new(0.0, 0.0);
                    for a in 0..2 {
                        for b in 0..2 {
                            for g in 0..2 {
                                lhs += l[al][a] * l[be][b] * l[ga][g] * cc(a, b, g, d);
                            }
                        }
                    }
                    let rhs: Complex64 = (0..2).map(|e| cc(al, be, ga, e) * l[e][d]).sum();
                    if (lhs - rhs).norm() > tol {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Whether `x` satisfies `x_{ikl} = conj(x)_{lki}`.
pub fn satisfies_reality(x: &CubicMatrix) -> bool {
    cubic::transpose_t(x) == x.conjugate()
}

/// Image of the element with coordinates `c` (on the normalized pair) under Λ.
pub fn transform_element(lambda: &Lambda2, c: &[ExactScalar; 2]) -> Result<CubicMatrix> {
    let moved = transform_rho(lambda, &SquareMatrix::identity(2), &cubic::normalized_rho_basis())?;
    Ok(moved[0].scale(&c[0]).add(&moved[1].scale(&c[1])))
}

/// Elements `i·(r1 ρ̂1 + r2 ρ̂2)` with rational r satisfy the reality condition.
pub fn real_element(r1: &ExactScalar, r2: &ExactScalar) -> [ExactScalar; 2] {
    [r1 * ExactScalar::i(), r2 * ExactScalar::i()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> ExactScalar {
        ExactScalar::from_ratio(p, d)
    }

    #[test]
    fn identity_and_reflection() {
        let id = SquareMatrix::identity(2);
        assert!(check_lambda_equations(&id));
        assert_eq!(component_of(&id).unwrap(), AutomorphismComponent::DetPlus);
        assert_eq!(component_of(&reflection()).unwrap(), AutomorphismComponent::DetMinus);
        assert!(preserves_brackets(&reflection(), &id).unwrap());
    }

    #[test]
    fn doubled_identity_fails() {
        let two = SquareMatrix::identity(2).scale(&ExactScalar::from_int(2));
        assert!(!check_lambda_equations(&two));
        assert!(component_of(&two).is_err());
        assert!(!preserves_brackets(&two, &SquareMatrix::identity(2)).unwrap());
    }

    #[test]
    fn quarter_turn() {
        let r = rotation_form(q(0, 1), q(1, 1));
        assert_eq!(component_of(&r).unwrap(), AutomorphismComponent::DetPlus);
        let a = lambda_from_angles(0.0, std::f64::consts::FRAC_PI_2);
        assert!((a[0][1] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((a[1][0] + Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn boost_has_unit_determinant() {
        let b = lambda_from_angles(1.0, 0.0);
        assert!((det_approx(&b) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(check_lambda_equations_approx(&b, 1e-9));
        assert!(preserves_brackets_approx(&b, 1e-9).unwrap());
    }

    #[test]
    fn real_rotation_keeps_reality() {
        let r = rotation_form(q(3, 5), q(4, 5));
        let x = real_element(&q(2, 1), &q(-1, 3));
        assert!(satisfies_reality(&transform_element(&SquareMatrix::identity(2), &x).unwrap()));
        assert!(satisfies_reality(&transform_element(&r, &x).unwrap()));
    }
}
