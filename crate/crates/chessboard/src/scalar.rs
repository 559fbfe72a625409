//! Exact arithmetic in the cyclotomic field Q(ζ), ζ a primitive 24th root of unity.
//!
//! Elements are stored as `(c₀ + c₁ζ + … + c₇ζ⁷)` with a single positive common
//! denominator. The reduction `ζ⁸ = ζ⁴ − 1` (from Φ₂₄) keeps the representation
//! canonical, so equality is coordinate-wise.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ChessError;

/// Degree of the field over Q.
pub const DEGREE: usize = 8;

/// Floating-point image of an exact scalar.
pub type ApproxComplex = Complex64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    num: [BigInt; DEGREE],
    den: BigInt,
}

/// ζᵐ for m in 0..24 expressed in the power basis.
fn zeta_powers() -> &'static [[i64; DEGREE]; 24] {
    static TABLE: OnceLock<[[i64; DEGREE]; 24]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [[0i64; DEGREE]; 24];
        let mut cur = [0i64; DEGREE];
        cur[0] = 1;
        for row in out.iter_mut() {
            *row = cur;
            // multiply by ζ
            let top = cur[DEGREE - 1];
            for k in (1..DEGREE).rev() {
                cur[k] = cur[k - 1];
            }
            cur[0] = 0;
            cur[4] += top;
            cur[0] -= top;
        }
        out
    })
}

impl ExactScalar {
    pub fn zero() -> Self {
        Self { num: Default::default(), den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        let mut s = Self::zero();
        s.num[0] = BigInt::from(v);
        s
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        let mut s = Self::zero();
        s.num[0] = BigInt::from(p);
        s.den = BigInt::from(q);
        s.normalize();
        s
    }

    pub fn from_rational(r: &BigRational) -> Self {
        let mut s = Self::zero();
        s.num[0] = r.numer().clone();
        s.den = r.denom().clone();
        s.normalize();
        s
    }

    /// Builds an element from its eight rational coordinates.
    pub fn from_coeffs(coeffs: &[BigRational; DEGREE]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = std::array::from_fn(|k| coeffs[k].numer() * (&den / coeffs[k].denom()));
        let mut s = Self { num, den };
        s.normalize();
        s
    }

    pub fn from_int_coeffs(coeffs: [i64; DEGREE]) -> Self {
        let mut s = Self { num: coeffs.map(BigInt::from), den: BigInt::one() };
        s.normalize();
        s
    }

    /// ζᵏ for any integer k.
    pub fn zeta_pow(k: i64) -> Self {
        Self::from_int_coeffs(zeta_powers()[k.rem_euclid(24) as usize])
    }

    pub fn zeta() -> Self {
        Self::zeta_pow(1)
    }

    /// Primitive cube root of unity exp(2πi/3) = ζ⁸.
    #[cfg(not(feature = "mutant-flip-j"))]
    pub fn j() -> Self {
        Self::zeta_pow(8)
    }

    #[cfg(feature = "mutant-flip-j")]
    pub fn j() -> Self {
        Self::zeta_pow(16)
    }

    pub fn j2() -> Self {
        Self::j() * Self::j()
    }

    /// jᵏ for any integer k (uses the crate's `j`).
    pub fn j_pow(k: i64) -> Self {
        match k.rem_euclid(3) {
            0 => Self::one(),
            1 => Self::j(),
            _ => Self::j2(),
        }
    }

    /// Imaginary unit ζ⁶.
    pub fn i() -> Self {
        Self::zeta_pow(6)
    }

    pub fn sqrt2() -> Self {
        Self::zeta_pow(3) + Self::zeta_pow(-3)
    }

    pub fn sqrt3() -> Self {
        Self::zeta_pow(2) + Self::zeta_pow(-2)
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// True when the element lies in Q.
    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        BigRational::new(self.num[k].clone(), self.den.clone())
    }

    pub fn coeffs(&self) -> [BigRational; DEGREE] {
        std::array::from_fn(|k| self.coeff(k))
    }

    /// The rational value, if the element is rational.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeff(0))
    }

    fn normalize(&mut self) {
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in self.num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            self.den /= &g;
            for c in self.num.iter_mut() {
                *c /= &g;
            }
        }
    }

    /// Image under the Galois automorphism ζ ↦ ζᵃ (a coprime to 24).
    pub fn galois(&self, a: i64) -> Self {
        let pows = zeta_powers();
        let mut num: [BigInt; DEGREE] = Default::default();
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &pows[(a * k as i64).rem_euclid(24) as usize];
            for (t, v) in p.iter().enumerate() {
                if *v != 0 {
                    num[t] += c * v;
                }
            }
        }
        let mut s = Self { num, den: self.den.clone() };
        s.normalize();
        s
    }

    /// Complex conjugation ζ ↦ ζ⁻¹.
    pub fn conjugate(&self) -> Self {
        self.galois(23)
    }

    /// Field norm down to Q (product of all eight conjugates).
    pub fn norm(&self) -> BigRational {
        let mut acc = self.clone();
        for a in [5, 7, 11, 13, 17, 19, 23] {
            acc *= self.galois(a);
        }
        acc.to_rational().expect("field norm is rational")
    }

    pub fn inverse(&self) -> Result<Self, ChessError> {
        if self.is_zero() {
            return Err(ChessError::DivisionByZero);
        }
        let mut others = Self::one();
        for a in [5, 7, 11, 13, 17, 19, 23] {
            others *= self.galois(a);
        }
        let n = (self * &others).to_rational().expect("field norm is rational");
        Ok(others * Self::from_rational(&n.recip()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ChessError> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_complex(&self) -> ApproxComplex {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..DEGREE {
            if self.num[k].is_zero() {
                continue;
            }
            let c = self.coeff(k).to_f64().unwrap_or(f64::NAN);
            acc += Complex64::from_polar(c, 2.0 * std::f64::consts::PI * k as f64 / 24.0);
        }
        acc
    }

    /// Coordinates as "p/q" strings (the JSON wire format).
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs().iter().map(|c| format!("{}/{}", c.numer(), c.denom())).collect()
    }

    pub fn from_coeff_strings(parts: &[String]) -> Result<Self, ChessError> {
        if parts.len() != DEGREE {
            return Err(ChessError::Parse(format!("expected {DEGREE} coefficients, got {}", parts.len())));
        }
        let mut coeffs: [BigRational; DEGREE] = Default::default();
        for (slot, p) in coeffs.iter_mut().zip(parts) {
            *slot = parse_rational(p)?;
        }
        Ok(Self::from_coeffs(&coeffs))
    }
}

fn parse_rational(s: &str) -> Result<BigRational, ChessError> {
    let bad = || ChessError::Parse(format!("bad rational '{s}'"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

impl Default for ExactScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let mut out = if self.den == rhs.den {
            ExactScalar { num: std::array::from_fn(|k| &self.num[k] + &rhs.num[k]), den: self.den.clone() }
        } else {
            ExactScalar { num: std::array::from_fn(|k| &self.num[k] * &rhs.den + &rhs.num[k] * &self.den), den: &self.den * &rhs.den }
        };
        out.normalize();
        out
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        if self.is_zero() || rhs.is_zero() {
            return ExactScalar::zero();
        }
        let mut prod: [BigInt; 2 * DEGREE - 1] = Default::default();
        for (a, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in rhs.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[a + b] += x * y;
                }
            }
        }
        for k in (DEGREE..2 * DEGREE - 1).rev() {
            let top = std::mem::take(&mut prod[k]);
            if !top.is_zero() {
                prod[k - 4] += &top;
                prod[k - 8] -= &top;
            }
        }
        let mut out = ExactScalar { num: std::array::from_fn(|k| std::mem::take(&mut prod[k])), den: &self.den * &rhs.den };
        out.normalize();
        out
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { num: std::array::from_fn(|k| -&self.num[k]), den: self.den.clone() }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Panics on division by zero; use [`ExactScalar::checked_div`] to handle it.
impl Div<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Div<ExactScalar> for ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: ExactScalar) -> ExactScalar {
        &self / &rhs
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self + rhs;
    }
}

impl AddAssign for ExactScalar {
    fn add_assign(&mut self, rhs: ExactScalar) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self * rhs;
    }
}

impl SubAssign for ExactScalar {
    fn sub_assign(&mut self, rhs: ExactScalar) {
        *self = &*self - &rhs;
    }
}

impl MulAssign for ExactScalar {
    fn mul_assign(&mut self, rhs: ExactScalar) {
        *self = &*self * &rhs;
    }
}

impl std::iter::Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::zero(), |a, b| a + b)
    }
}

/// Human-readable form, e.g. `1/3 - 2*z^4`.
impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in 0..DEGREE {
            let c = self.coeff(k);
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "z^{k}")?,
                _ => write!(f, "{mag}*z^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactScalar({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    c: Vec<String>,
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire { c: self.coeff_strings() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        ExactScalar::from_coeff_strings(&w.c).map_err(serde::de::Error::custom)
    }
}

/// Relative closeness used by every approximate check (1e-9 unless stated).
pub fn approx_eq(a: ApproxComplex, b: ApproxComplex, rel: f64) -> bool {
    let scale = a.norm().max(b.norm()).max(1.0);
    (a - b).norm() <= rel * scale
}
