//! Z3-graded Grassmann algebras over θ (and optionally θ̄) generators, as a normal-form
//! rewriting system, plus the one-generator derivations ∂₁, ∂₂, ∂₃ on {1, X, X²}.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::enveloping::SquareMatrix;
use crate::error::{ChessError, Result};
use crate::linalg;
use crate::scalar::ExactScalar;

/// θ^idx (grade 1) or θ̄^idx (grade 2), idx 1-based.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Gen {
    pub bar: bool,
    pub idx: u8,
}

impl Gen {
    pub fn theta(idx: u8) -> Self {
        Self { bar: false, idx }
    }

    pub fn theta_bar(idx: u8) -> Self {
        Self { bar: true, idx }
    }

    pub fn grade(self) -> u8 {
        if self.bar {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.bar { "tb" } else { "t" }, self.idx)
    }
}

pub type Word = Vec<Gen>;

pub fn word_string(w: &[Gen]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(ToString::to_string).collect::<Vec<_>>().join(".")
}

pub fn parse_word(s: &str) -> Result<Word> {
    if s == "1" {
        return Ok(Vec::new());
    }
    s.split('.')
        .map(|t| {
            let (bar, rest) = match t.strip_prefix("tb") {
                Some(r) => (true, r),
                None => (false, t.strip_prefix('t').ok_or_else(|| ChessError::Parse(format!("bad generator {t}")))?),
            };
            let idx = rest.parse::<u8>().map_err(|e| ChessError::Parse(format!("{t}: {e}")))?;
            Ok(Gen { bar, idx })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassmannAlgebra {
    pub n: u8,
    pub with_conjugates: bool,
    /// Kills every mixed word except θθ̄.
    pub extended: bool,
}

impl GrassmannAlgebra {
    pub fn theta_only(n: u8) -> Self {
        Self { n, with_conjugates: false, extended: false }
    }

    pub fn with_conjugates(n: u8) -> Self {
        Self { n, with_conjugates: true, extended: true }
    }

    fn generators(&self) -> Vec<Gen> {
        let mut g: Vec<Gen> = (1..=self.n).map(Gen::theta).collect();
        if self.with_conjugates {
            g.extend((1..=self.n).map(Gen::theta_bar));
        }
        g
    }

    fn check_word(&self, w: &[Gen]) -> Result<()> {
        for g in w {
            if g.idx == 0 || g.idx > self.n || (g.bar && !self.with_conjugates) {
                return Err(ChessError::IndexOutOfRange(format!("generator {g} not in this algebra")));
            }
        }
        Ok(())
    }

    /// Canonical form of a raw word: `None` if it vanishes, else (coefficient, canonical word).
    pub fn reduce(&self, w: &[Gen]) -> Option<(ExactScalar, Word)> {
        let thetas: Word = w.iter().copied().filter(|g| !g.bar).collect();
        let bars: Word = w.iter().copied().filter(|g| g.bar).collect();
        let shape = (thetas.len(), bars.len());
        let allowed = if self.extended {
            matches!(shape, (0, 0) | (1, 0) | (0, 1) | (2, 0) | (0, 2) | (1, 1) | (3, 0) | (0, 3))
        } else {
            shape.0 + shape.1 <= 3
        };
        if !allowed {
            return None;
        }
        // θ̄^B θ^A = j² θ^A θ̄^B for every θ̄ standing left of a θ.
        let mut swaps = 0i64;
        let mut bars_seen = 0i64;
        for g in w {
            if g.bar {
                bars_seen += 1;
            } else {
                swaps += bars_seen;
            }
        }
        let mut coeff = ExactScalar::j_pow(2 * swaps);
        let (ct, t) = canonical_triple(thetas, 1)?;
        let (cb, b) = canonical_triple(bars, 2)?;
        coeff = coeff * ct * cb;
        Some((coeff, t.into_iter().chain(b).collect()))
    }

    /// Canonical basis words, excluding the unit, sorted by length then lexicographically.
    pub fn basis(&self) -> Vec<Word> {
        let gens = self.generators();
        let mut out: BTreeSet<(usize, Word)> = BTreeSet::new();
        let mut frontier: Vec<Word> = vec![Vec::new()];
        for _ in 0..3 {
            let mut next = Vec::new();
            for w in &frontier {
                for g in &gens {
                    let mut v = w.clone();
                    v.push(*g);
                    if let Some((_, c)) = self.reduce(&v) {
                        out.insert((c.len(), c));
                    }
                    next.push(v);
                }
            }
            frontier = next;
        }
        out.into_iter().map(|(_, w)| w).collect()
    }

    pub fn element(&self, w: &[Gen], c: ExactScalar) -> Result<GrassmannElement> {
        self.check_word(w)?;
        let mut e = GrassmannElement::zero(self.clone());
        e.add_word(w, c);
        Ok(e)
    }

    pub fn unit(&self) -> GrassmannElement {
        self.element(&[], ExactScalar::one()).unwrap()
    }

    pub fn gen(&self, g: Gen) -> Result<GrassmannElement> {
        self.element(&[g], ExactScalar::one())
    }
}

/// Rotates a triple to its smallest rotation: `w = phase^k · rot^k(w)` with `phase = j^step`.
fn canonical_triple(w: Word, step: i64) -> Option<(ExactScalar, Word)> {
    if w.len() != 3 {
        return Some((ExactScalar::one(), w));
    }
    if w[0] == w[1] && w[1] == w[2] {
        return None;
    }
    let rots: Vec<Word> = (0..3)
        .map(|k| {
            let mut r = w.clone();
            r.rotate_left(k);
            r
        })
        .collect();
    let k = (0..3).min_by_key(|&k| rots[k].clone()).unwrap();
    Some((ExactScalar::j_pow(step * k as i64), rots[k].clone()))
}

/// `N + N² + (N³ − N)/3` for θ only; with conjugates the count of the listed products.
pub fn dimension(n: u64, with_conjugates: bool) -> u64 {
    let cubic = (n * n * n - n) / 3;
    if with_conjugates {
        2 * n + 3 * n * n + 2 * cubic
    } else {
        n + n * n + cubic
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassmannElement {
    alg: GrassmannAlgebra,
    terms: BTreeMap<Word, ExactScalar>,
}

impl GrassmannElement {
    pub fn zero(alg: GrassmannAlgebra) -> Self {
        Self { alg, terms: BTreeMap::new() }
    }

    fn add_word(&mut self, w: &[Gen], c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        let Some((k, cw)) = self.alg.reduce(w) else { return };
        let v = self.terms.entry(cw.clone()).or_insert_with(ExactScalar::zero);
        *v += c * k;
        if v.is_zero() {
            self.terms.remove(&cw);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Word, ExactScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_algebra(&self, rhs: &Self) -> Result<()> {
        if self.alg != rhs.alg {
            return Err(ChessError::DimensionMismatch("elements of different Grassmann algebras".into()));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_algebra(rhs)?;
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_word(w, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        let mut out = Self::zero(self.alg.clone());
        for (w, c) in &self.terms {
            out.add_word(w, c * s);
        }
        out
    }

    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        self.same_algebra(rhs)?;
        let mut out = Self::zero(self.alg.clone());
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let w: Word = a.iter().chain(b).copied().collect();
                out.add_word(&w, ca * cb);
            }
        }
        Ok(out)
    }

    /// Grade mod 3 when every term shares it.
    pub fn grade(&self) -> Option<u8> {
        let grades: BTreeSet<u8> = self.terms.keys().map(|w| (w.iter().map(|g| g.grade() as u32).sum::<u32>() % 3) as u8).collect();
        match grades.len() {
            0 => Some(0),
            1 => grades.into_iter().next(),
            _ => None,
        }
    }

    pub fn to_wire(&self) -> BTreeMap<String, ExactScalar> {
        self.terms.iter().map(|(w, c)| (word_string(w), c.clone())).collect()
    }
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("({c})*{}", word_string(w))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Linear maps on the one-generator algebra with basis (1, X, X²); column k is the image of X^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Partial {
    D1,
    D2,
    D3,
}

pub fn partial_matrix(k: Partial) -> SquareMatrix {
    let mj2 = -ExactScalar::j2();
    let mut m = SquareMatrix::zeros(3);
    match k {
        Partial::D1 => {
            m.set(0, 1, ExactScalar::one());
            m.set(1, 2, mj2);
        }
        Partial::D2 => m.set(2, 1, ExactScalar::one()),
        Partial::D3 => {
            m.set(1, 1, ExactScalar::one());
            m.set(2, 2, mj2);
        }
    }
    m
}

/// Applies ∂ₖ to coordinates on (1, X, X²).
pub fn partial(k: Partial, x: &[ExactScalar; 3]) -> [ExactScalar; 3] {
    let m = partial_matrix(k);
    std::array::from_fn(|r| (0..3).map(|c| m.get(r, c) * &x[c]).sum())
}

fn x_power(e: usize) -> [ExactScalar; 3] {
    std::array::from_fn(|k| if k == e { ExactScalar::one() } else { ExactScalar::zero() })
}

fn poly_mul(a: &[ExactScalar; 3], b: &[ExactScalar; 3]) -> [ExactScalar; 3] {
    let mut out: [ExactScalar; 3] = Default::default();
    for p in 0..3 {
        for q in 0..3 - p {
            out[p + q] += &a[p] * &b[q];
        }
    }
    out
}

/// `∂(uv) = (∂u)v + j^{deg u} u(∂v)` for all basis monomials u, v.
pub fn satisfies_leibniz(k: Partial) -> bool {
    (0..3).all(|p| {
        (0..3).all(|q| {
            let (u, v) = (x_power(p), x_power(q));
            let lhs = partial(k, &poly_mul(&u, &v));
            let t1 = poly_mul(&partial(k, &u), &v);
            let t2 = poly_mul(&u, &partial(k, &v));
            let w = ExactScalar::j_pow(p as i64);
            (0..3).all(|r| lhs[r] == &t1[r] + &(&w * &t2[r]))
        })
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    /// ∂₁∂₂∂₂ + ∂₂∂₁∂₂ + ∂₂∂₂∂₁ = −j²∂₂
    pub first_identity: bool,
    /// ∂₂∂₁∂₁ + ∂₁∂₂∂₁ + ∂₁∂₁∂₂ = −j²∂₁
    pub second_identity: bool,
    /// For each target in (∂₁, ∂₂, ∂₃, identity): coefficients (a, b) with a·∂₁∂₂ + b·∂₂∂₁ = target, if any.
    /// Products are composed right to left: `∂₁∂₂` applies ∂₂ first.
    pub binary_closures: Vec<(String, Option<[ExactScalar; 2]>)>,
    pub leibniz: Vec<(String, bool)>,
}

fn mm(a: &SquareMatrix, b: &SquareMatrix) -> SquareMatrix {
    a.mul(b).expect("3x3")
}

pub fn derivation_ternary_closure() -> ClosureReport {
    let (d1, d2, d3) = (partial_matrix(Partial::D1), partial_matrix(Partial::D2), partial_matrix(Partial::D3));
    let mj2 = -ExactScalar::j2();
    let sym = |a: &SquareMatrix, b: &SquareMatrix| mm(&mm(a, b), b).add(&mm(&mm(b, a), b)).unwrap().add(&mm(&mm(b, b), a)).unwrap();
    let first_identity = sym(&d1, &d2) == d2.scale(&mj2);
    let second_identity = sym(&d2, &d1) == d1.scale(&mj2);
    let p12 = mm(&d1, &d2);
    let p21 = mm(&d2, &d1);
    let rows: Vec<Vec<ExactScalar>> = (0..9).map(|e| vec![p12.entries()[e].clone(), p21.entries()[e].clone()]).collect();
    let targets = [("d1", d1), ("d2", d2), ("d3", d3), ("identity", SquareMatrix::identity(3))];
    let binary_closures = targets
        .iter()
        .map(|(name, t)| (name.to_string(), linalg::solve(&rows, t.entries()).map(|v| [v[0].clone(), v[1].clone()])))
        .collect();
    let leibniz = [Partial::D1, Partial::D2, Partial::D3].iter().map(|&k| (format!("{k:?}"), satisfies_leibniz(k))).collect();
    ClosureReport { first_identity, second_identity, binary_closures, leibniz }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(GrassmannAlgebra::theta_only(2).basis().len(), 8);
        assert_eq!(GrassmannAlgebra::theta_only(3).basis().len(), 20);
        assert_eq!(GrassmannAlgebra::theta_only(1).basis().len(), 2);
        assert_eq!(dimension(3, false), 20);
        assert_eq!(GrassmannAlgebra::with_conjugates(2).basis().len() as u64, dimension(2, true));
    }

    #[test]
    fn cube_and_quartic_vanish() {
        let alg = GrassmannAlgebra::theta_only(4);
        let t = |i| alg.gen(Gen::theta(i)).unwrap();
        assert!(t(1).multiply(&t(1)).unwrap().multiply(&t(1)).unwrap().is_zero());
        let q = t(1).multiply(&t(2)).unwrap().multiply(&t(3)).unwrap().multiply(&t(4)).unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn rotation_picks_up_j_squared() {
        let alg = GrassmannAlgebra::theta_only(3);
        let (c, w) = alg.reduce(&[Gen::theta(2), Gen::theta(3), Gen::theta(1)]).unwrap();
        assert_eq!(w, vec![Gen::theta(1), Gen::theta(2), Gen::theta(3)]);
        assert_eq!(c, ExactScalar::j2());
    }

    #[test]
    fn mixed_swap_rule() {
        let alg = GrassmannAlgebra::with_conjugates(2);
        let (c, w) = alg.reduce(&[Gen::theta_bar(2), Gen::theta(1)]).unwrap();
        assert_eq!(w, vec![Gen::theta(1), Gen::theta_bar(2)]);
        // θ¹θ̄² = j θ̄²θ¹
        assert_eq!(&c * &ExactScalar::j(), ExactScalar::one());
        assert!(alg.reduce(&[Gen::theta(1), Gen::theta(2), Gen::theta_bar(1)]).is_none());
    }

    #[test]
    fn word_strings_round_trip() {
        let w = vec![Gen::theta(1), Gen::theta(2), Gen::theta_bar(3)];
        assert_eq!(word_string(&w), "t1.t2.tb3");
        assert_eq!(parse_word("t1.t2.tb3").unwrap(), w);
        assert_eq!(parse_word("1").unwrap(), Vec::<Gen>::new());
    }

    #[test]
    fn partial_values() {
        let x2 = x_power(2);
        let got = partial(Partial::D1, &x2);
        assert_eq!(got[1], -ExactScalar::j2());
        assert!(partial(Partial::D2, &x_power(0)).iter().all(ExactScalar::is_zero));
    }

    #[test]
    fn closure_identities_hold() {
        let r = derivation_ternary_closure();
        assert!(r.first_identity && r.second_identity);
        assert!(r.leibniz.iter().all(|(_, ok)| *ok));
    }
}
