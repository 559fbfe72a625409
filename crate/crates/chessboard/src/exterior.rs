//! Z3-graded exterior calculus with `d³ = 0`.
//!
//! Coordinates ξ¹…ξⁿ obey `ξ^i ξ^k = ξ^k ξ^i + ε^{ik}`. Forms are words in dξ (grade 1) and
//! d²ξ (grade 2) with coefficients on the left. The conjugate differential δ lives on the same
//! word space with every phase conjugated, and coefficients read on the right.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{ChessError, Result};
use crate::sampling::{small_rational, Prng};
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateAlgebra {
    pub n: usize,
    /// ε^{ik}, antisymmetric.
    epsilon: Vec<Vec<ExactScalar>>,
}

impl CoordinateAlgebra {
    pub fn commutative(n: usize) -> Arc<Self> {
        Arc::new(Self { n, epsilon: vec![vec![ExactScalar::zero(); n]; n] })
    }

    pub fn with_epsilon(epsilon: Vec<Vec<ExactScalar>>) -> Result<Arc<Self>> {
        let n = epsilon.len();
        for i in 0..n {
            if epsilon[i].len() != n {
                return Err(ChessError::DimensionMismatch("ε must be square".into()));
            }
            for k in 0..n {
                if epsilon[i][k] != -&epsilon[k][i] {
                    return Err(ChessError::Unsupported(format!("ε is not antisymmetric at ({},{})", i + 1, k + 1)));
                }
            }
        }
        Ok(Arc::new(Self { n, epsilon }))
    }

    /// 0-based.
    pub fn epsilon(&self, i: usize, k: usize) -> &ExactScalar {
        &self.epsilon[i][k]
    }

    fn conj(&self) -> Self {
        Self { n: self.n, epsilon: self.epsilon.iter().map(|r| r.iter().map(ExactScalar::conjugate).collect()).collect() }
    }
}

/// Ascending multiset of 0-based coordinate indices.
pub type Monomial = Vec<u8>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFunction {
    alg: Arc<CoordinateAlgebra>,
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl PolyFunction {
    pub fn zero(alg: &Arc<CoordinateAlgebra>) -> Self {
        Self { alg: alg.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(alg: &Arc<CoordinateAlgebra>, c: ExactScalar) -> Self {
        let mut p = Self::zero(alg);
        p.add_term(Vec::new(), c);
        p
    }

    /// ξ^i, 0-based.
    pub fn var(alg: &Arc<CoordinateAlgebra>, i: usize) -> Self {
        let mut p = Self::zero(alg);
        p.add_term(vec![i as u8], ExactScalar::one());
        p
    }

    pub fn algebra(&self) -> &Arc<CoordinateAlgebra> {
        &self.alg
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, ExactScalar> {
        &self.terms
    }

    fn add_term(&mut self, m: Monomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.entry(m.clone()).or_insert_with(ExactScalar::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&ExactScalar::from_int(-1)))
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        let mut out = Self::zero(&self.alg);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(&self.alg);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let word: Vec<u8> = a.iter().chain(b).copied().collect();
                let ordered = normal_order(&self.alg, &word);
                let k = ca * cb;
                for (m, c) in ordered.terms {
                    out.add_term(m, c * &k);
                }
            }
        }
        out
    }

    /// ∂_i on normal-ordered monomials: remove one occurrence of i, counted with multiplicity.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.alg);
        for (m, c) in &self.terms {
            let hits = m.iter().filter(|&&x| x as usize == i).count();
            if hits == 0 {
                continue;
            }
            let pos = m.iter().position(|&x| x as usize == i).unwrap();
            let mut rest = m.clone();
            rest.remove(pos);
            out.add_term(rest, c * &ExactScalar::from_int(hits as i64));
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self { alg: Arc::new(self.alg.conj()), terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conjugate())).collect() }
    }

    /// Evaluates with commuting numeric stand-ins for the coordinates.
    pub fn eval(&self, point: &[ExactScalar]) -> ExactScalar {
        self.terms.iter().map(|(m, c)| m.iter().fold(c.clone(), |acc, &x| acc * &point[x as usize])).sum()
    }

    pub fn to_wire(&self) -> BTreeMap<String, ExactScalar> {
        self.terms.iter().map(|(m, c)| (monomial_string(m), c.clone())).collect()
    }
}

pub fn monomial_string(m: &[u8]) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.iter().map(|x| format!("x{}", x + 1)).collect::<Vec<_>>().join("*")
}

impl fmt::Display for PolyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})*{}", monomial_string(m))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Reorders a coordinate word to ascending indices, emitting ε terms.
pub fn normal_order(alg: &Arc<CoordinateAlgebra>, word: &[u8]) -> PolyFunction {
    let mut out = PolyFunction::zero(alg);
    let mut stack: Vec<(Vec<u8>, ExactScalar)> = vec![(word.to_vec(), ExactScalar::one())];
    while let Some((w, c)) = stack.pop() {
        match (0..w.len().saturating_sub(1)).find(|&p| w[p] > w[p + 1]) {
            None => out.add_term(w, c),
            Some(p) => {
                let (a, b) = (w[p] as usize, w[p + 1] as usize);
                let mut swapped = w.clone();
                swapped.swap(p, p + 1);
                stack.push((swapped, c.clone()));
                let e = alg.epsilon(a, b);
                if !e.is_zero() {
                    let mut shorter = w[..p].to_vec();
                    shorter.extend_from_slice(&w[p + 2..]);
                    stack.push((shorter, c * e));
                }
            }
        }
    }
    out
}

/// Random polynomial with small rational coefficients and total degree ≤ `max_degree`.
pub fn random_poly(alg: &Arc<CoordinateAlgebra>, rng: &mut Prng, max_degree: usize, terms: usize) -> PolyFunction {
    let mut p = PolyFunction::zero(alg);
    for _ in 0..terms {
        let deg = rng.gen_range(0..=max_degree);
        let mut m: Vec<u8> = (0..deg).map(|_| rng.gen_range(0..alg.n) as u8).collect();
        m.sort_unstable();
        p.add_term(m, small_rational(rng));
    }
    p
}

/// Coefficients a form can carry.
pub trait FormCoeff: Clone + PartialEq + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn scaled(&self, s: &ExactScalar) -> Self;
    fn partial(&self, i: usize) -> Self;
    fn conj(&self) -> Self;
}

/// Coefficients that can be multiplied, left factor first.
pub trait CoeffMul: FormCoeff {
    fn times(&self, o: &Self) -> Self;
}

impl FormCoeff for PolyFunction {
    fn is_zero(&self) -> bool {
        PolyFunction::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn scaled(&self, s: &ExactScalar) -> Self {
        self.scale(s)
    }
    fn partial(&self, i: usize) -> Self {
        PolyFunction::partial(self, i)
    }
    fn conj(&self) -> Self {
        PolyFunction::conj(self)
    }
}

impl CoeffMul for PolyFunction {
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
}

/// dξ^i (`D1`, grade 1) or d²ξ^i (`D2`, grade 2), 0-based index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FormSym {
    D1(u8),
    D2(u8),
}

impl FormSym {
    pub fn grade(self) -> u32 {
        match self {
            FormSym::D1(_) => 1,
            FormSym::D2(_) => 2,
        }
    }
}

pub type FormWord = Vec<FormSym>;

pub fn word_grade(w: &[FormSym]) -> u32 {
    w.iter().map(|s| s.grade()).sum::<u32>() % 3
}

/// `"d1 d2 D3"`, with `"1"` for the empty word.
pub fn form_word_string(w: &[FormSym]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|s| match s {
            FormSym::D1(i) => format!("d{}", i + 1),
            FormSym::D2(i) => format!("D{}", i + 1),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_form_word(s: &str) -> Result<FormWord> {
    if s.trim() == "1" {
        return Ok(Vec::new());
    }
    s.split_whitespace()
        .map(|t| {
            let idx: u8 = t[1..].parse().map_err(|_| ChessError::Parse(format!("bad form symbol {t}")))?;
            if idx == 0 {
                return Err(ChessError::Parse(format!("bad form symbol {t}")));
            }
            match &t[..1] {
                "d" => Ok(FormSym::D1(idx - 1)),
                "D" => Ok(FormSym::D2(idx - 1)),
                _ => Err(ChessError::Parse(format!("bad form symbol {t}"))),
            }
        })
        .collect()
}

/// Which differential the element belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// d, coefficients on the left, phase j.
    D,
    /// δ, coefficients on the right, phase j².
    Delta,
}

impl Side {
    pub fn phase(self) -> ExactScalar {
        match self {
            Side::D => ExactScalar::j(),
            Side::Delta => ExactScalar::j2(),
        }
    }
}

/// Canonical form of a raw word: triple dξ words rotated to the smallest rotation
/// (`w = phase·rot(w)`), d²ξ moved left (`dξ^i d²ξ^k = phase·d²ξ^k dξ^i`), total weight above 3 vanishes.
pub fn reduce_form(w: &[FormSym], side: Side) -> Option<(ExactScalar, FormWord)> {
    let weight: u32 = w.iter().map(|s| s.grade()).sum();
    if weight > 3 {
        return None;
    }
    if weight <= 2 {
        return Some((ExactScalar::one(), w.to_vec()));
    }
    let phase = side.phase();
    if w.len() == 3 {
        if w[0] == w[1] && w[1] == w[2] {
            return None;
        }
        let mut best = w.to_vec();
        let mut coef = ExactScalar::one();
        let mut cur = w.to_vec();
        let mut c = ExactScalar::one();
        for _ in 0..3 {
            if cur < best {
                best = cur.clone();
                coef = c.clone();
            }
            cur.rotate_left(1);
            c = &c * &phase;
        }
        return Some((coef, best));
    }
    match (w[0], w[1]) {
        (FormSym::D1(_), FormSym::D2(_)) => Some((phase, vec![w[1], w[0]])),
        _ => Some((ExactScalar::one(), w.to_vec())),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormElement<C: FormCoeff> {
    pub n: usize,
    pub side: Side,
    terms: BTreeMap<FormWord, C>,
}

impl<C: FormCoeff> FormElement<C> {
    pub fn zero(n: usize, side: Side) -> Self {
        Self { n, side, terms: BTreeMap::new() }
    }

    /// `c · w` after reduction of `w`.
    pub fn term(n: usize, side: Side, w: &[FormSym], c: C) -> Self {
        let mut out = Self::zero(n, side);
        out.add_word(w, c);
        out
    }

    /// A 0-form.
    pub fn function(n: usize, side: Side, c: C) -> Self {
        Self::term(n, side, &[], c)
    }

    pub fn add_word(&mut self, w: &[FormSym], c: C) {
        if c.is_zero() {
            return;
        }
        let Some((k, cw)) = reduce_form(w, self.side) else { return };
        let c = c.scaled(&k);
        let merged = match self.terms.remove(&cw) {
            Some(old) => old.plus(&c),
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(cw, merged);
        }
    }

    pub fn terms(&self) -> &BTreeMap<FormWord, C> {
        &self.terms
    }

    pub fn coeff(&self, w: &[FormSym]) -> Option<&C> {
        self.terms.get(w)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_word(w, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&ExactScalar::from_int(-1)))
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        let mut out = Self::zero(self.n, self.side);
        for (w, c) in &self.terms {
            out.add_word(w, c.scaled(s));
        }
        out
    }

    /// `(f w₁)(g w₂) = (f g)(w₁ w₂)`.
    pub fn mul(&self, rhs: &Self) -> Self
    where
        C: CoeffMul,
    {
        let mut out = Self::zero(self.n, self.side);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                let w: FormWord = w1.iter().chain(w2).copied().collect();
                out.add_word(&w, c1.times(c2));
            }
        }
        out
    }

    fn differential(&self, side: Side) -> Self {
        let mut out = Self::zero(self.n, self.side);
        if self.side != side {
            // Mixed d/δ words are zero.
            return out;
        }
        let phase = side.phase();
        for (w, c) in &self.terms {
            for m in 0..self.n {
                let mut dw = vec![FormSym::D1(m as u8)];
                dw.extend_from_slice(w);
                out.add_word(&dw, c.partial(m));
            }
            let mut ph = ExactScalar::one();
            for (t, s) in w.iter().enumerate() {
                if let FormSym::D1(i) = *s {
                    let mut ww = w.clone();
                    ww[t] = FormSym::D2(i);
                    out.add_word(&ww, c.scaled(&ph));
                }
                ph *= phase.pow(s.grade());
            }
        }
        out
    }

    /// `d(ω φ) = dω φ + j^{grade ω} ω dφ`, `df = (∂_i f) dξ^i`, `d(dξ) = d²ξ`, `d(d²ξ) = 0`.
    pub fn d(&self) -> Self {
        self.differential(Side::D)
    }

    /// The conjugate differential; zero on d-forms.
    pub fn delta(&self) -> Self {
        self.differential(Side::Delta)
    }

    /// Conjugates every scalar and switches between the d and δ pictures.
    pub fn conj(&self) -> Self {
        let side = match self.side {
            Side::D => Side::Delta,
            Side::Delta => Side::D,
        };
        Self { n: self.n, side, terms: self.terms.iter().map(|(w, c)| (w.clone(), c.conj())).collect() }
    }

    /// Grade mod 3 when homogeneous.
    pub fn grade(&self) -> Option<u32> {
        let mut g = self.terms.keys().map(|w| word_grade(w));
        let first = g.next()?;
        g.all(|x| x == first).then_some(first)
    }

    /// Number of form symbols when homogeneous.
    pub fn degree(&self) -> Option<usize> {
        let mut g = self.terms.keys().map(Vec::len);
        let first = g.next()?;
        g.all(|x| x == first).then_some(first)
    }
}

/// `d²(ω_k dξ^k)` assembled from `(∂_m∂_i ω_k) dξ^m dξ^i dξ^k + (∂_i ω_k − ∂_k ω_i) d²ξ^i dξ^k`.
pub fn d2_oneform_formula<C: FormCoeff>(n: usize, omega: &[C]) -> FormElement<C> {
    let mut out = FormElement::zero(n, Side::D);
    for k in 0..n {
        for i in 0..n {
            for m in 0..n {
                let w = [FormSym::D1(m as u8), FormSym::D1(i as u8), FormSym::D1(k as u8)];
                out.add_word(&w, omega[k].partial(i).partial(m));
            }
            let anti = omega[k].partial(i).plus(&omega[i].partial(k).scaled(&ExactScalar::from_int(-1)));
            out.add_word(&[FormSym::D2(i as u8), FormSym::D1(k as u8)], anti);
        }
    }
    out
}

/// `ω_k dξ^k`.
pub fn one_form<C: FormCoeff>(n: usize, omega: &[C]) -> FormElement<C> {
    let mut out = FormElement::zero(n, Side::D);
    for (k, c) in omega.iter().enumerate() {
        out.add_word(&[FormSym::D1(k as u8)], c.clone());
    }
    out
}

/// `d(d(ω))` for a 1-form given by its coefficients.
pub fn d2_oneform<C: FormCoeff>(n: usize, omega: &[C]) -> FormElement<C> {
    one_form(n, omega).d().d()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::prng;

    type Form = FormElement<PolyFunction>;

    fn alg3() -> Arc<CoordinateAlgebra> {
        CoordinateAlgebra::commutative(3)
    }

    #[test]
    fn normal_order_emits_epsilon() {
        let e = ExactScalar::from_int(5);
        let alg = CoordinateAlgebra::with_epsilon(vec![vec![ExactScalar::zero(), -&e], vec![e.clone(), ExactScalar::zero()]]).unwrap();
        let p = normal_order(&alg, &[1, 0]);
        assert_eq!(p.terms().get(&vec![0, 1]), Some(&ExactScalar::one()));
        assert_eq!(p.terms().get(&vec![]), Some(&e));
        let flat = normal_order(&CoordinateAlgebra::commutative(2), &[1, 0]);
        assert_eq!(flat.terms().len(), 1);
    }

    #[test]
    fn epsilon_must_be_antisymmetric() {
        let one = ExactScalar::one();
        assert!(CoordinateAlgebra::with_epsilon(vec![vec![ExactScalar::zero(), one.clone()], vec![one, ExactScalar::zero()]]).is_err());
    }

    #[test]
    fn partial_of_product() {
        let a = alg3();
        let f = PolyFunction::var(&a, 0).mul(&PolyFunction::var(&a, 1));
        assert_eq!(f.partial(0), PolyFunction::var(&a, 1));
        assert!(PolyFunction::constant(&a, ExactScalar::from_int(3)).partial(1).is_zero());
    }

    #[test]
    fn reduction_rules() {
        use FormSym::*;
        let (c, w) = reduce_form(&[D1(0), D2(1)], Side::D).unwrap();
        assert_eq!((c, w), (ExactScalar::j(), vec![D2(1), D1(0)]));
        assert!(reduce_form(&[D1(0), D1(1), D2(2)], Side::D).is_none());
        assert!(reduce_form(&[D2(0), D2(1)], Side::D).is_none());
        assert!(reduce_form(&[D1(2), D1(2), D1(2)], Side::D).is_none());
        let (c, _) = reduce_form(&[D1(0), D2(1)], Side::Delta).unwrap();
        assert_eq!(c, ExactScalar::j2());
    }

    #[test]
    fn d_squared_of_xi_dxi() {
        use FormSym::*;
        let a = alg3();
        let x = Form::term(3, Side::D, &[D1(1)], PolyFunction::var(&a, 0));
        let dd = x.d().d();
        let one = PolyFunction::constant(&a, ExactScalar::one());
        let expected = Form::term(3, Side::D, &[D2(0), D1(1)], one.clone()).sub(&Form::term(3, Side::D, &[D2(1), D1(0)], one));
        assert_eq!(dd, expected);
    }

    #[test]
    fn d_cubed_vanishes() {
        let a = alg3();
        let mut rng = prng(11);
        for _ in 0..10 {
            let f = Form::function(3, Side::D, random_poly(&a, &mut rng, 4, 8));
            assert!(f.d().d().d().is_zero());
            assert!(f.conj().delta().delta().delta().is_zero());
        }
    }

    #[test]
    fn conjugation_transports_d_to_delta() {
        let e = ExactScalar::j() * ExactScalar::from_int(2);
        let a = CoordinateAlgebra::with_epsilon(vec![
            vec![ExactScalar::zero(), e.clone(), ExactScalar::zero()],
            vec![-e, ExactScalar::zero(), ExactScalar::zero()],
            vec![ExactScalar::zero(); 3],
        ])
        .unwrap();
        let mut rng = prng(5);
        for _ in 0..5 {
            let x = Form::term(3, Side::D, &[FormSym::D1(1)], random_poly(&a, &mut rng, 3, 6)).add(&Form::function(
                3,
                Side::D,
                random_poly(&a, &mut rng, 3, 6),
            ));
            assert_eq!(x.conj().delta().conj(), x.d());
            assert!(x.conj().d().is_zero());
            assert!(x.d().delta().is_zero());
        }
    }

    #[test]
    fn word_strings_round_trip() {
        use FormSym::*;
        let w = vec![D1(0), D1(1), D2(2)];
        assert_eq!(form_word_string(&w), "d1 d2 D3");
        assert_eq!(parse_form_word("d1 d2 D3").unwrap(), w);
    }
}
