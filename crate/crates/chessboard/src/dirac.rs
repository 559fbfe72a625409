//! Ternary Clifford matrices, the Z3 Dirac operator and its cube, the cubic dispersion relation
//! and its plane-wave solutions.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::enveloping::SquareMatrix;
use crate::error::{ChessError, Result};
use crate::exterior::{CoeffMul, CoordinateAlgebra, FormCoeff, PolyFunction};
use crate::geometry::MatPoly;
use crate::scalar::ExactScalar;

/// Q¹, Q², Q³ (grade 1).
pub fn q_matrices() -> [SquareMatrix; 3] {
    let (o, z) = (ExactScalar::one, ExactScalar::zero);
    let (j, j2) = (ExactScalar::j(), ExactScalar::j2());
    let q =
        |a: ExactScalar, b: ExactScalar| SquareMatrix::from_rows(vec![vec![z(), o(), z()], vec![z(), z(), a], vec![b, z(), z()]]).unwrap();
    [q(j.clone(), j2.clone()), q(j2, j), q(o(), o())]
}

/// diag(1, j, j²).
pub fn b_matrix() -> SquareMatrix {
    let mut b = SquareMatrix::zeros(3);
    for (r, v) in [ExactScalar::one(), ExactScalar::j(), ExactScalar::j2()].into_iter().enumerate() {
        b.set(r, r, v);
    }
    b
}

/// η^{abc}, 0-based storage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaTensor {
    pub values: Vec<Vec<Vec<ExactScalar>>>,
}

impl EtaTensor {
    /// 1-based.
    pub fn get(&self, a: usize, b: usize, c: usize) -> &ExactScalar {
        &self.values[a - 1][b - 1][c - 1]
    }

    pub fn is_cyclic(&self) -> bool {
        (0..27).all(|x| {
            let (a, b, c) = (x / 9, (x / 3) % 3, x % 3);
            self.values[a][b][c] == self.values[b][c][a]
        })
    }

    pub fn is_totally_symmetric(&self) -> bool {
        self.is_cyclic()
            && (0..27).all(|x| {
                let (a, b, c) = (x / 9, (x / 3) % 3, x % 3);
                self.values[a][b][c] == self.values[b][a][c]
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetrization {
    /// QᵃQᵇQᶜ + QᵇQᶜQᵃ + QᶜQᵇQᵃ
    Literal,
    /// QᵃQᵇQᶜ + QᵇQᶜQᵃ + QᶜQᵃQᵇ
    Cyclic,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConventionResult {
    pub convention: Symmetrization,
    /// Triples (1-based) whose sum is not a multiple of the identity.
    pub non_scalar: Vec<[usize; 3]>,
    pub eta: Option<EtaTensor>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetrizationReport {
    pub literal: ConventionResult,
    pub cyclic: ConventionResult,
    pub winner: Option<Symmetrization>,
    pub eta_cyclic: bool,
    pub eta_totally_symmetric: bool,
    /// η^{312} and η^{321}, the two entries behind the repeated "321" in the value table.
    pub eta_312: Option<ExactScalar>,
    pub eta_321: Option<ExactScalar>,
}

fn scalar_multiple(m: &SquareMatrix) -> Option<ExactScalar> {
    let c = m.get(0, 0).clone();
    (m.sub(&SquareMatrix::identity(m.n()).scale(&c)).ok()?.is_zero()).then_some(c)
}

fn run_convention(conv: Symmetrization) -> ConventionResult {
    let q = q_matrices();
    let third = ExactScalar::from_ratio(1, 3);
    let m3 = |a: &SquareMatrix, b: &SquareMatrix, c: &SquareMatrix| a.mul(b).and_then(|x| x.mul(c)).unwrap();
    let mut non_scalar = Vec::new();
    let mut values = vec![vec![vec![ExactScalar::zero(); 3]; 3]; 3];
    for x in 0..27 {
        let (a, b, c) = (x / 9, (x / 3) % 3, x % 3);
        let third_term = match conv {
            Symmetrization::Literal => m3(&q[c], &q[b], &q[a]),
            Symmetrization::Cyclic => m3(&q[c], &q[a], &q[b]),
        };
        let sum = m3(&q[a], &q[b], &q[c]).add(&m3(&q[b], &q[c], &q[a])).and_then(|s| s.add(&third_term)).unwrap();
        match scalar_multiple(&sum) {
            Some(v) => values[a][b][c] = v * &third,
            None => non_scalar.push([a + 1, b + 1, c + 1]),
        }
    }
    let eta = non_scalar.is_empty().then_some(EtaTensor { values });
    ConventionResult { convention: conv, non_scalar, eta }
}

/// Tries both symmetrizations on all 27 triples and extracts η from the one that is always scalar.
pub fn symmetrization_check() -> SymmetrizationReport {
    let literal = run_convention(Symmetrization::Literal);
    let cyclic = run_convention(Symmetrization::Cyclic);
    let winner = [&literal, &cyclic].into_iter().find(|r| r.eta.is_some()).map(|r| r.convention);
    let eta = literal.eta.as_ref().or(cyclic.eta.as_ref());
    SymmetrizationReport {
        eta_cyclic: eta.is_some_and(EtaTensor::is_cyclic),
        eta_totally_symmetric: eta.is_some_and(EtaTensor::is_totally_symmetric),
        eta_312: eta.map(|e| e.get(3, 1, 2).clone()),
        eta_321: eta.map(|e| e.get(3, 2, 1).clone()),
        literal,
        cyclic,
        winner,
    }
}

/// Symbols in the operator polynomials: ∂x, ∂y, ∂z, m.
pub const OPERATOR_SYMBOLS: [&str; 4] = ["dx", "dy", "dz", "m"];

#[derive(Clone, Debug)]
pub struct OperatorCube {
    pub matrix: MatPoly,
    pub off_diagonal_zero: bool,
    /// The common diagonal entry when the cube is scalar.
    pub scalar: Option<PolyFunction>,
    /// Coefficient of ∂x∂y∂z in the scalar.
    pub mixed_coefficient: Option<ExactScalar>,
    /// The scalar equals ∂x³ + ∂y³ + ∂z³ − 3∂x∂y∂z + m³.
    pub matches_dispersion: bool,
}

fn symbol_algebra() -> Arc<CoordinateAlgebra> {
    CoordinateAlgebra::commutative(4)
}

/// The cubic form `x³ + y³ + z³ + c·xyz + m³` in the operator symbols.
pub fn cubic_symbol(c: &ExactScalar) -> PolyFunction {
    let alg = symbol_algebra();
    let v = |i| PolyFunction::var(&alg, i);
    let cube = |i| v(i).mul(&v(i)).mul(&v(i));
    cube(0).add(&cube(1)).add(&cube(2)).add(&cube(3)).add(&v(0).mul(&v(1)).mul(&v(2)).scale(c))
}

/// `(Q¹∂x + Q²∂y + Q³∂z + mB)³` over commuting symbols.
pub fn operator_cube() -> OperatorCube {
    let alg = symbol_algebra();
    let q = q_matrices();
    let lift = |m: &SquareMatrix, sym: usize| MatPoly::from_fn(3, |r, c| PolyFunction::var(&alg, sym).scale(m.get(r, c)));
    let op = lift(&q[0], 0).plus(&lift(&q[1], 1)).plus(&lift(&q[2], 2)).plus(&lift(&b_matrix(), 3));
    let cube = op.times(&op).times(&op);
    let off_diagonal_zero = (0..3).all(|r| (0..3).all(|c| r == c || cube.get(r, c).is_zero()));
    let d = cube.get(0, 0).clone();
    let scalar = (off_diagonal_zero && cube.get(1, 1) == &d && cube.get(2, 2) == &d).then_some(d);
    let mixed_coefficient = scalar.as_ref().map(|s| s.terms().get(&vec![0, 1, 2]).cloned().unwrap_or_else(ExactScalar::zero));
    let matches_dispersion = scalar.as_ref() == Some(&cubic_symbol(&ExactScalar::from_int(-3)));
    OperatorCube { matrix: cube, off_diagonal_zero, scalar, mixed_coefficient, matches_dispersion }
}

/// `k_x³ + k_y³ + k_z³ − 3k_xk_yk_z`.
pub fn cubic_form(k: [f64; 3]) -> f64 {
    let [x, y, z] = k;
    x * x * x + y * y * y + z * z * z - 3.0 * x * y * z
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DispersionPoint {
    pub omega: f64,
    pub k: [f64; 3],
    pub m: f64,
}

impl DispersionPoint {
    pub fn new(omega: f64, k: [f64; 3], m: f64) -> Self {
        Self { omega, k, m }
    }

    /// The point on the surface over `k` with the real root ω.
    pub fn on_surface(k: [f64; 3], m: f64) -> Self {
        Self { omega: real_cbrt(cubic_form(k) + m * m * m), k, m }
    }

    pub fn zeta(&self) -> f64 {
        self.k.iter().sum()
    }

    /// Re(j k_x + j² k_y + k_z).
    pub fn chi(&self) -> f64 {
        self.k[2] - 0.5 * (self.k[0] + self.k[1])
    }

    /// Im(j k_x + j² k_y + k_z).
    pub fn cyl_eta(&self) -> f64 {
        0.75f64.sqrt() * (self.k[0] - self.k[1])
    }

    pub fn r2(&self) -> f64 {
        self.chi().powi(2) + self.cyl_eta().powi(2)
    }

    pub fn phi(&self) -> f64 {
        self.cyl_eta().atan2(self.chi())
    }

    /// `ω³ − (k_x³ + k_y³ + k_z³ − 3k_xk_yk_z + m³)`.
    pub fn residual(&self) -> f64 {
        self.omega.powi(3) - cubic_form(self.k) - self.m.powi(3)
    }

    /// `ω³ − ζr² − m³`.
    pub fn cylindrical_residual(&self) -> f64 {
        self.omega.powi(3) - self.zeta() * self.r2() - self.m.powi(3)
    }

    /// Relative tolerance scaled by the size of the terms.
    pub fn satisfies(&self, tol: f64) -> bool {
        let scale = 1.0 + self.omega.abs().powi(3) + self.k.iter().map(|x| x.abs().powi(3)).sum::<f64>() + self.m.abs().powi(3);
        self.residual().abs() <= tol * scale
    }

    pub fn negated(&self) -> Self {
        Self { omega: -self.omega, k: self.k.map(|x| -x), m: -self.m }
    }
}

fn real_cbrt(x: f64) -> f64 {
    x.cbrt()
}

/// The real cube root of the right-hand side and its j, j² rotations.
pub fn solve_omega(k: [f64; 3], m: f64) -> [Complex64; 3] {
    let r = Complex64::new(real_cbrt(cubic_form(k) + m * m * m), 0.0);
    let j = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    [r, r * j, r * j * j]
}

/// `k_x³ + k_y³ + k_z³ − 3k_xk_yk_z + m³` over the rationals.
pub fn dispersion_rhs_exact(k: &[BigRational; 3], m: &BigRational) -> BigRational {
    let [x, y, z] = k;
    let three = BigRational::from_integer(3.into());
    x * x * x + y * y * y + z * z * z - three * x * y * z + m * m * m
}

fn exact_int_cbrt(v: &BigInt) -> Option<BigInt> {
    let r = if v.is_negative() { -(-v).cbrt() } else { v.cbrt() };
    (&r * &r * &r == *v).then_some(r)
}

/// The rational ω with ω³ equal to the right-hand side, when one exists.
pub fn solve_omega_exact(k: &[BigRational; 3], m: &BigRational) -> Option<BigRational> {
    let rhs = dispersion_rhs_exact(k, m);
    Some(BigRational::new(exact_int_cbrt(rhs.numer())?, exact_int_cbrt(rhs.denom())?))
}

#[derive(Clone, Debug, Serialize)]
pub struct CylindricalCheck {
    /// `k_x³+k_y³+k_z³−3k_xk_yk_z = ζ r²`
    pub cubic_equals_zeta_r2: bool,
    /// `(ω+ζ)(ω²−r²) + (ω−ζ)(ω²+r²) = 2(ω³ − ζr²)`
    pub factorization: bool,
}

/// Exact check over Q(ζ24): `r² = |j k_x + j² k_y + k_z|²`.
pub fn cylindrical_identity_check(omega: &ExactScalar, k: &[ExactScalar; 3]) -> CylindricalCheck {
    let [x, y, z] = k;
    let w = ExactScalar::j() * x + ExactScalar::j2() * y + z;
    let r2 = &w * &w.conjugate();
    let zeta = x + y + z;
    let three = ExactScalar::from_int(3);
    let cubic = x * x * x + y * y * y + z * z * z - three * x * y * z;
    let o2 = omega * omega;
    let lhs = (omega + &zeta) * (&o2 - &r2) + (omega - &zeta) * (&o2 + &r2);
    let rhs = ExactScalar::from_int(2) * (&o2 * omega - &zeta * &r2);
    CylindricalCheck { cubic_equals_zeta_r2: cubic == &zeta * &r2, factorization: lhs == rhs }
}

/// Rotates k by `delta` about the axis [1,1,1].
pub fn rotate_about_axis(k: [f64; 3], delta: f64) -> [f64; 3] {
    let n = [1.0 / 3f64.sqrt(); 3];
    let (s, c) = delta.sin_cos();
    let dot: f64 = k.iter().zip(&n).map(|(a, b)| a * b).sum();
    let cross = [n[1] * k[2] - n[2] * k[1], n[2] * k[0] - n[0] * k[2], n[0] * k[1] - n[1] * k[0]];
    std::array::from_fn(|i| k[i] * c + cross[i] * s + n[i] * dot * (1.0 - c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveSign {
    Direct,
    /// ω and k flipped; solves the operator with m → −m.
    Conjugate,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaneWaveSolution {
    pub amplitudes: [[f64; 3]; 3],
    pub omega: f64,
    pub k: [f64; 3],
    pub m: f64,
    pub sign: WaveSign,
}

/// Time factors (row) and space factors (column) of the real basis.
const TIME_EXP: [f64; 3] = [1.0, -0.5, -0.5];

impl PlaneWaveSolution {
    pub fn new(omega: f64, k: [f64; 3], m: f64, amplitudes: [[f64; 3]; 3], sign: WaveSign) -> Result<Self> {
        if !DispersionPoint::new(omega, k, m).satisfies(1e-9) {
            return Err(ChessError::Unsupported(format!("(ω={omega}, k={k:?}, m={m}) is off the dispersion surface")));
        }
        Ok(Self { amplitudes, omega, k, m, sign })
    }

    fn flip(&self) -> f64 {
        match self.sign {
            WaveSign::Direct => 1.0,
            WaveSign::Conjugate => -1.0,
        }
    }

    /// The mass in the third-order operator this solution satisfies.
    pub fn operator_mass(&self) -> f64 {
        self.flip() * self.m
    }

    /// Sum of the nine real basis functions weighted by the amplitudes at (t, x, y, z).
    pub fn eval(&self, t: f64, r: [f64; 3]) -> f64 {
        let s = self.flip();
        let wt = s * self.omega * t;
        let kr = s * (self.k[0] * r[0] + self.k[1] * r[1] + self.k[2] * r[2]);
        let h = 0.75f64.sqrt();
        let (tau, xi) = (h * wt, h * kr);
        let time = [wt.exp(), (-wt / 2.0).exp() * tau.cos(), (-wt / 2.0).exp() * tau.sin()];
        let space = [kr.exp(), (-kr / 2.0).exp() * xi.cos(), (-kr / 2.0).exp() * xi.sin()];
        let mut v = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                v += self.amplitudes[a][b] * time[a] * space[b];
            }
        }
        v
    }

    /// Analytic residual: each basis entry is a combination of exponentials e^{αt + β·r} with
    /// α ∈ {ω, jω, j²ω} and β ∈ {k, jk, j²k}, so the operator acts by `α³ − P(β) − m³`.
    pub fn residual_analytic(&self) -> f64 {
        let j = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let s = self.flip();
        let m = self.operator_mass();
        let mut worst: f64 = 0.0;
        for p in 0..3 {
            for q in 0..3 {
                let alpha = j.powi(p) * s * self.omega;
                let beta: Vec<Complex64> = self.k.iter().map(|x| j.powi(q) * s * x).collect();
                let sym =
                    alpha.powi(3) - (beta[0].powi(3) + beta[1].powi(3) + beta[2].powi(3) - 3.0 * beta[0] * beta[1] * beta[2]) - m.powi(3);
                worst = worst.max(sym.norm());
            }
        }
        worst
    }
}

fn third_derivative(f: &dyn Fn(f64) -> f64, h: f64) -> f64 {
    (f(2.0 * h) - 2.0 * f(h) + 2.0 * f(-h) - f(-2.0 * h)) / (2.0 * h * h * h)
}

fn mixed_derivative(f: &dyn Fn(f64, f64, f64) -> f64, h: f64) -> f64 {
    let mut acc = 0.0;
    for sx in [-1.0, 1.0] {
        for sy in [-1.0, 1.0] {
            for sz in [-1.0, 1.0] {
                acc += sx * sy * sz * f(sx * h, sy * h, sz * h);
            }
        }
    }
    acc / (8.0 * h * h * h)
}

/// `∂t³u − (∂x³ + ∂y³ + ∂z³ − 3∂x∂y∂z)u − m³u` at one point, central differences at step `h`.
fn pde_residual_at(sol: &PlaneWaveSolution, t: f64, r: [f64; 3], h: f64) -> f64 {
    let u = |dt: f64, d: [f64; 3]| sol.eval(t + dt, [r[0] + d[0], r[1] + d[1], r[2] + d[2]]);
    let dt3 = third_derivative(&|s| u(s, [0.0; 3]), h);
    let dx3 = third_derivative(&|s| u(0.0, [s, 0.0, 0.0]), h);
    let dy3 = third_derivative(&|s| u(0.0, [0.0, s, 0.0]), h);
    let dz3 = third_derivative(&|s| u(0.0, [0.0, 0.0, s]), h);
    let dxyz = mixed_derivative(&|a, b, c| u(0.0, [a, b, c]), h);
    dt3 - (dx3 + dy3 + dz3 - 3.0 * dxyz) - sol.operator_mass().powi(3) * u(0.0, [0.0; 3])
}

/// Max |residual| over the sample points, Richardson-extrapolated from steps `h` and `h/2`.
pub fn residual_pde(sol: &PlaneWaveSolution, points: &[(f64, [f64; 3])], h: f64) -> f64 {
    points
        .iter()
        .map(|&(t, r)| {
            let coarse = pde_residual_at(sol, t, r, h);
            let fine = pde_residual_at(sol, t, r, h / 2.0);
            ((4.0 * fine - coarse) / 3.0).abs()
        })
        .fold(0.0, f64::max)
}

/// Exponent of the real exponential in entry (a, b) of the solution matrix: (coefficient of ωt, of k·r).
pub fn entry_exponent(a: usize, b: usize) -> (BigRational, BigRational) {
    let half = |x: f64| if x == 1.0 { BigRational::from_integer(1.into()) } else { BigRational::new((-1).into(), 2.into()) };
    (half(TIME_EXP[a]), half(TIME_EXP[b]))
}

/// Whether the product of the given entries has no real exponential left.
pub fn boundedness_check(entries: &[(usize, usize)]) -> bool {
    let (t, s) = entries.iter().fold((BigRational::zero(), BigRational::zero()), |(t, s), &(a, b)| {
        let (et, es) = entry_exponent(a, b);
        (t + et, s + es)
    });
    t.is_zero() && s.is_zero()
}

#[derive(Clone, Debug, Serialize)]
pub struct MinorExponent {
    pub rows: [usize; 2],
    pub cols: [usize; 2],
    pub cancels: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundednessReport {
    pub determinant: bool,
    pub minors: Vec<MinorExponent>,
    pub all_minors: bool,
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

pub fn boundedness_report() -> BoundednessReport {
    let determinant = PERMS.iter().all(|p| boundedness_check(&[(0, p[0]), (1, p[1]), (2, p[2])]));
    let pairs = [[0, 1], [0, 2], [1, 2]];
    let mut minors = Vec::new();
    for rows in pairs {
        for cols in pairs {
            let cancels = boundedness_check(&[(rows[0], cols[0]), (rows[1], cols[1])])
                && boundedness_check(&[(rows[0], cols[1]), (rows[1], cols[0])]);
            minors.push(MinorExponent { rows: rows.map(|r| r + 1), cols: cols.map(|c| c + 1), cancels });
        }
    }
    let all_minors = minors.iter().all(|m| m.cancels);
    BoundednessReport { determinant, minors, all_minors }
}

#[derive(Clone, Debug, Serialize)]
pub struct MassShellReport {
    pub on_cubic_surface: [bool; 3],
    /// `ω_a² − r_a² = M²`.
    pub constraint: [bool; 3],
    /// 0-based indices of points that violate either condition.
    pub failing: Vec<usize>,
    /// `Ω² − r₁² − r₂² − r₃² = 3M²`, when every point passes.
    pub combined: Option<bool>,
}

pub fn mass_shell_reduce(points: &[DispersionPoint; 3], big_m: f64, tol: f64) -> MassShellReport {
    let on_cubic_surface = points.map(|p| p.satisfies(tol));
    let m2 = big_m * big_m;
    let constraint = points.map(|p| (p.omega * p.omega - p.r2() - m2).abs() <= tol * (1.0 + m2));
    let failing: Vec<usize> = (0..3).filter(|&a| !on_cubic_surface[a] || !constraint[a]).collect();
    let combined = failing.is_empty().then(|| {
        let omega2: f64 = points.iter().map(|p| p.omega * p.omega).sum();
        let r2: f64 = points.iter().map(DispersionPoint::r2).sum();
        (omega2 - r2 - 3.0 * m2).abs() <= tol * (1.0 + m2)
    });
    MassShellReport { on_cubic_surface, constraint, failing, combined }
}

/// `lo:hi:step`, inclusive of both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Grid {
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| ChessError::Parse(format!("bad grid component {p:?}"))))
            .collect::<Result<_>>()?;
        let [lo, hi, step] = parts[..] else {
            return Err(ChessError::Parse(format!("grid must be lo:hi:step, got {s:?}")));
        };
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) || step <= 0.0 || hi < lo {
            return Err(ChessError::Parse(format!("grid bounds must be finite with lo <= hi and step > 0, got {s:?}")));
        }
        Ok(Self { lo, hi, step })
    }

    pub fn values(&self) -> Vec<f64> {
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.lo + i as f64 * self.step).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DispersionRow {
    pub k_x: f64,
    pub k_y: f64,
    pub k_z: f64,
    pub m: f64,
    pub omega_real: f64,
}

/// Real root of the dispersion relation over the cube grid³, in k_x-major order.
pub fn dispersion_samples(m: f64, grid: &Grid) -> Vec<DispersionRow> {
    let v = grid.values();
    let n = v.len();
    (0..n * n * n)
        .into_par_iter()
        .map(|x| {
            let k = [v[x / (n * n)], v[(x / n) % n], v[x % n]];
            let p = DispersionPoint::on_surface(k, m);
            DispersionRow { k_x: k[0], k_y: k[1], k_z: k[2], m, omega_real: p.omega }
        })
        .collect()
}

pub fn dispersion_csv(rows: &[DispersionRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| ChessError::Unsupported(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| ChessError::Unsupported(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| ChessError::Unsupported(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_cubes_to_identity() {
        for q in q_matrices() {
            assert_eq!(q.mul(&q).unwrap().mul(&q).unwrap(), SquareMatrix::identity(3));
        }
    }

    #[test]
    fn cyclic_symmetrization_wins() {
        let r = symmetrization_check();
        assert_eq!(r.winner, Some(Symmetrization::Cyclic));
        assert!(!r.literal.non_scalar.is_empty());
        let eta = r.cyclic.eta.as_ref().unwrap();
        assert!(eta.get(1, 1, 1).is_one() && eta.get(2, 2, 2).is_one() && eta.get(3, 3, 3).is_one());
        for t in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
            assert_eq!(eta.get(t.0, t.1, t.2), &ExactScalar::j2());
        }
        for t in [(1, 3, 2), (3, 2, 1), (2, 1, 3)] {
            assert_eq!(eta.get(t.0, t.1, t.2), &ExactScalar::j());
        }
        assert!(eta.get(1, 1, 2).is_zero());
        assert!(r.eta_cyclic && !r.eta_totally_symmetric);
        assert_eq!(r.eta_312, Some(ExactScalar::j2()));
    }

    #[test]
    fn cube_is_scalar_with_mixed_coefficient_minus_three() {
        let c = operator_cube();
        assert!(c.off_diagonal_zero);
        assert!(c.matches_dispersion);
        assert_eq!(c.mixed_coefficient, Some(ExactScalar::from_int(-3)));
        let s = c.scalar.unwrap();
        assert_eq!(s.terms().get(&vec![0, 0, 0]), Some(&ExactScalar::one()));
        assert_ne!(s, cubic_symbol(&ExactScalar::from_int(-1)));
    }

    #[test]
    fn simple_roots() {
        assert!((solve_omega([0.0; 3], 2.0)[0].re - 2.0).abs() < 1e-12);
        assert!((solve_omega([0.7; 3], 1.5)[0].re - 1.5).abs() < 1e-12);
        let q = |p: i64| BigRational::from_integer(p.into());
        assert_eq!(solve_omega_exact(&[q(1), q(0), q(0)], &q(0)), Some(q(1)));
        assert_eq!(solve_omega_exact(&[q(1), q(1), q(0)], &q(0)), None);
        assert_eq!(solve_omega_exact(&[q(0), q(0), q(0)], &q(-2)), Some(q(-2)));
    }

    #[test]
    fn cylindrical_identity() {
        let k = [ExactScalar::from_ratio(3, 2), ExactScalar::from_int(-2), ExactScalar::from_ratio(1, 5)];
        let c = cylindrical_identity_check(&ExactScalar::from_ratio(7, 3), &k);
        assert!(c.cubic_equals_zeta_r2 && c.factorization);
        let p = DispersionPoint::on_surface([0.3, -1.1, 0.8], 0.9);
        assert!(p.cylindrical_residual().abs() < 1e-12);
        let axis = DispersionPoint::new(1.0, [0.4; 3], 1.0);
        assert!(axis.r2() < 1e-24);
        let rot = DispersionPoint::on_surface(rotate_about_axis(p.k, 0.7), 0.9);
        assert!((rot.omega - p.omega).abs() < 1e-12 && (rot.zeta() - p.zeta()).abs() < 1e-12);
    }

    #[test]
    fn plane_waves_solve_the_cubic_equation() {
        let p = DispersionPoint::on_surface([0.4, -0.3, 0.2], 0.8);
        let mut amps = [[0.0; 3]; 3];
        amps[0][0] = 1.0;
        let pts = [(0.1, [0.2, -0.1, 0.3]), (-0.3, [0.0, 0.5, -0.2])];
        for sign in [WaveSign::Direct, WaveSign::Conjugate] {
            let all = PlaneWaveSolution::new(p.omega, p.k, p.m, [[0.7, -0.2, 0.4], [0.1, 0.9, -0.5], [0.3, 0.2, 0.6]], sign).unwrap();
            assert!(residual_pde(&all, &pts, 1e-2) < 1e-6);
            assert!(all.residual_analytic() < 1e-9);
        }
        let unit = PlaneWaveSolution::new(p.omega, p.k, p.m, amps, WaveSign::Direct).unwrap();
        assert!(residual_pde(&unit, &pts, 1e-2) < 1e-6);
        assert!(PlaneWaveSolution::new(p.omega + 0.1, p.k, p.m, amps, WaveSign::Direct).is_err());
        let trivial = PlaneWaveSolution::new(0.0, [0.0; 3], 0.0, amps, WaveSign::Direct).unwrap();
        assert_eq!(residual_pde(&trivial, &pts, 1e-2), 0.0);
    }

    #[test]
    fn exponent_bookkeeping() {
        let r = boundedness_report();
        assert!(r.determinant);
        assert!(!r.all_minors);
        assert!(!boundedness_check(&[(0, 0), (0, 1), (0, 2)]));
    }

    #[test]
    fn mass_shell() {
        let big_m: f64 = 1.3;
        let k = [0.5, -0.2, 0.1];
        let probe = DispersionPoint::new(0.0, k, 0.0);
        let omega = (big_m * big_m + probe.r2()).sqrt();
        let m = (omega.powi(3) - cubic_form(k)).cbrt();
        let p = DispersionPoint::new(omega, k, m);
        let good = mass_shell_reduce(&[p, p, p], big_m, 1e-9);
        assert_eq!(good.combined, Some(true));
        let bad = DispersionPoint::on_surface([1.0, 0.0, 0.0], 0.5);
        let r = mass_shell_reduce(&[p, bad, p], big_m, 1e-9);
        assert_eq!(r.failing, vec![1]);
        assert_eq!(r.combined, None);
    }

    #[test]
    fn grid_sampler() {
        let g = Grid::parse("-2:2:0.5").unwrap();
        assert_eq!(g.values().len(), 9);
        let rows = dispersion_samples(1.0, &g);
        assert_eq!(rows.len(), 729);
        assert!(rows.iter().all(|r| DispersionPoint::new(r.omega_real, [r.k_x, r.k_y, r.k_z], r.m).satisfies(1e-9)));
        assert!(Grid::parse("1:0:1").is_err());
        assert!(Grid::parse("0:1").is_err());
    }
}
