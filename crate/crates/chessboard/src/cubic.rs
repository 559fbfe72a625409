//! Cubic matrices `a_{ikm}` with the two ternary products, the cyclic operator J,
//! the odd transposition T, the Z3 symmetry decomposition and the multiplication tables.
//!
//! Public indices are 1-based, storage is row-major with `i` slowest.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ChessError, Result};
use crate::linalg;
use crate::scalar::ExactScalar;

pub type Triple = [usize; 3];

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CubicMatrix {
    n: usize,
    entries: Vec<ExactScalar>,
}

impl CubicMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        Self { n, entries: vec![ExactScalar::zero(); n * n * n] }
    }

    /// Builds from a function of 0-based indices.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> ExactScalar) -> Self {
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                for m in 0..n {
                    out.entries[(i * n + k) * n + m] = f(i, k, m);
                }
            }
        }
        out
    }

    pub fn basis_unit(i: usize, k: usize, m: usize, n: usize) -> Result<Self> {
        if n == 0 || [i, k, m].iter().any(|&x| x == 0 || x > n) {
            return Err(ChessError::IndexOutOfRange(format!("({i},{k},{m}) for n={n}")));
        }
        let mut out = Self::zeros(n);
        out.set(i, k, m, ExactScalar::one());
        Ok(out)
    }

    /// The diagonal unit ω⁽ᵏ⁾ (1-based k).
    pub fn diagonal_unit(k: usize, n: usize) -> Result<Self> {
        Self::basis_unit(k, k, k, n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, k: usize, m: usize) -> usize {
        (i * self.n + k) * self.n + m
    }

    /// Entry at 1-based indices.
    pub fn get(&self, i: usize, k: usize, m: usize) -> &ExactScalar {
        &self.entries[self.idx(i - 1, k - 1, m - 1)]
    }

    pub fn set(&mut self, i: usize, k: usize, m: usize, v: ExactScalar) {
        let p = self.idx(i - 1, k - 1, m - 1);
        self.entries[p] = v;
    }

    /// Entry at 0-based indices.
    pub fn at(&self, t: Triple) -> &ExactScalar {
        &self.entries[self.idx(t[0], t[1], t[2])]
    }

    fn at_mut(&mut self, t: Triple) -> &mut ExactScalar {
        let p = self.idx(t[0], t[1], t[2]);
        &mut self.entries[p]
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExactScalar::is_zero)
    }

    /// Nonzero entries with 0-based indices in storage order.
    pub fn nonzeros(&self) -> Vec<(Triple, &ExactScalar)> {
        let n = self.n;
        self.entries.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(p, v)| ([p / (n * n), (p / n) % n, p % n], v)).collect()
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        Self { n: self.n, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        Self { n: self.n, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect() }
    }

    pub fn conjugate(&self) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(ExactScalar::conjugate).collect() }
    }

    pub fn to_sparse(&self) -> SparseCubic {
        SparseCubic {
            n: self.n,
            entries: self
                .nonzeros()
                .into_iter()
                .map(|(t, v)| SparseEntry { i: t[0] + 1, k: t[1] + 1, m: t[2] + 1, v: v.clone() })
                .collect(),
        }
    }

    /// Flattened entries, used as a column when solving for expansions.
    pub fn as_vector(&self) -> Vec<ExactScalar> {
        self.entries.clone()
    }
}

impl fmt::Display for CubicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sparse().to_compact())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseEntry {
    pub i: usize,
    pub k: usize,
    pub m: usize,
    pub v: ExactScalar,
}

/// Sparse wire format `{"n":2,"entries":[{"i":1,"k":1,"m":2,"v":…}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseCubic {
    pub n: usize,
    pub entries: Vec<SparseEntry>,
}

impl SparseCubic {
    /// `"i,k,m:v;…"`.
    pub fn to_compact(&self) -> String {
        self.entries.iter().map(|e| format!("{},{},{}:{}", e.i, e.k, e.m, e.v)).collect::<Vec<_>>().join(";")
    }

    pub fn to_dense(&self) -> Result<CubicMatrix> {
        let mut out = CubicMatrix::zeros(self.n);
        for e in &self.entries {
            if [e.i, e.k, e.m].iter().any(|&x| x == 0 || x > self.n) {
                return Err(ChessError::IndexOutOfRange(format!("({},{},{})", e.i, e.k, e.m)));
            }
            out.set(e.i, e.k, e.m, e.v.clone());
        }
        Ok(out)
    }
}

fn same_dim(ms: &[&CubicMatrix]) -> Result<usize> {
    let n = ms[0].n;
    if ms.iter().any(|m| m.n != n) {
        return Err(ChessError::DimensionMismatch(format!("cubic dimensions {:?}", ms.iter().map(|m| m.n).collect::<Vec<_>>())));
    }
    Ok(n)
}

/// Groups nonzero entries of `m` by a key built from their indices.
fn index_by<K: Ord>(m: &CubicMatrix, key: impl Fn(Triple) -> K) -> BTreeMap<K, Vec<(Triple, &ExactScalar)>> {
    let mut out: BTreeMap<K, Vec<_>> = BTreeMap::new();
    for (t, v) in m.nonzeros() {
        out.entry(key(t)).or_default().push((t, v));
    }
    out
}

/// `(a*b*c)_{ikl} = Σ_{pqr} a_{piq} b_{qkr} c_{rlp}`.
pub fn star(a: &CubicMatrix, b: &CubicMatrix, c: &CubicMatrix) -> Result<CubicMatrix> {
    let n = same_dim(&[a, b, c])?;
    let mut out = CubicMatrix::zeros(n);
    let b_by_first = index_by(b, |t| t[0]);
    let c_by_first_last = index_by(c, |t| (t[0], t[2]));
    for ([p, i, q], av) in a.nonzeros() {
        let Some(bs) = b_by_first.get(&q) else { continue };
        for &([_, k, r], bv) in bs {
            let Some(cs) = c_by_first_last.get(&(r, p)) else { continue };
            let ab = av * bv;
            for &([_, l, _], cv) in cs {
                *out.at_mut([i, k, l]) += &ab * cv;
            }
        }
    }
    Ok(out)
}

/// `(a⊘b⊘c)_{ijk} = Σ_{pqr} a_{ipq} b_{pjr} c_{qrk}`.
pub fn oslash(a: &CubicMatrix, b: &CubicMatrix, c: &CubicMatrix) -> Result<CubicMatrix> {
    let n = same_dim(&[a, b, c])?;
    let mut out = CubicMatrix::zeros(n);
    let b_by_first = index_by(b, |t| t[0]);
    let c_by_first_two = index_by(c, |t| (t[0], t[1]));
    for ([i, p, q], av) in a.nonzeros() {
        let Some(bs) = b_by_first.get(&p) else { continue };
        for &([_, jj, r], bv) in bs {
            let Some(cs) = c_by_first_two.get(&(q, r)) else { continue };
            let ab = av * bv;
            for &([_, _, k], cv) in cs {
                *out.at_mut([i, jj, k]) += &ab * cv;
            }
        }
    }
    Ok(out)
}

/// `(Ja)_{ikl} = a_{kli}`.
pub fn cyclic_j(a: &CubicMatrix) -> CubicMatrix {
    CubicMatrix::from_fn(a.n, |i, k, l| a.at([k, l, i]).clone())
}

/// `(Ta)_{ikm} = a_{mki}`.
pub fn transpose_t(a: &CubicMatrix) -> CubicMatrix {
    CubicMatrix::from_fn(a.n, |i, k, m| a.at([m, k, i]).clone())
}

/// `star(a,b,c) + j·star(b,c,a) + j²·star(c,a,b)`.
pub fn j_bracket(a: &CubicMatrix, b: &CubicMatrix, c: &CubicMatrix) -> Result<CubicMatrix> {
    let t0 = star(a, b, c)?;
    let t1 = star(b, c, a)?.scale(&ExactScalar::j());
    let t2 = star(c, a, b)?.scale(&ExactScalar::j2());
    Ok(t0.add(&t1).add(&t2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    Star,
    Oslash,
    JBracket,
}

impl Law {
    pub fn apply(self, a: &CubicMatrix, b: &CubicMatrix, c: &CubicMatrix) -> Result<CubicMatrix> {
        match self {
            Law::Star => star(a, b, c),
            Law::Oslash => oslash(a, b, c),
            Law::JBracket => j_bracket(a, b, c),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Law::Star => "star",
            Law::Oslash => "oslash",
            Law::JBracket => "j_bracket",
        }
    }
}

/// Order-`r` tensor of dimension `n`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    pub order: usize,
    pub n: usize,
    pub entries: Vec<ExactScalar>,
}

impl Tensor {
    pub fn zeros(order: usize, n: usize) -> Self {
        Self { order, n, entries: vec![ExactScalar::zero(); n.pow(order as u32)] }
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &x| acc * self.n + x)
    }
}

impl From<&CubicMatrix> for Tensor {
    fn from(c: &CubicMatrix) -> Self {
        Tensor { order: 3, n: c.n, entries: c.entries.clone() }
    }
}

impl TryFrom<Tensor> for CubicMatrix {
    type Error = ChessError;
    fn try_from(t: Tensor) -> Result<Self> {
        if t.order != 3 {
            return Err(ChessError::DimensionMismatch(format!("order {} is not 3", t.order)));
        }
        Ok(CubicMatrix { n: t.n, entries: t.entries })
    }
}

/// Odometer over `len` digits in base `base`.
fn for_each_index(len: usize, base: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; len];
    loop {
        f(&idx);
        let mut p = len;
        loop {
            if p == 0 {
                return;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < base {
                break;
            }
            idx[p] = 0;
        }
    }
}

/// n-fold product of n order-n tensors: operand k carries the indices
/// `(j_{1k}…j_{k−1,k}, i_k, j_{k,k+1}…j_{kn})` and every `j_{kr}` is summed.
/// For n = 2 this is the matrix product; for n = 3 it coincides with [`oslash`].
pub fn n_fold_product(ops: &[Tensor]) -> Result<Tensor> {
    let r = ops.len();
    if r == 0 || ops.iter().any(|t| t.order != r) {
        return Err(ChessError::DimensionMismatch(format!("need {r} tensors of order {r}")));
    }
    let n = ops[0].n;
    if ops.iter().any(|t| t.n != n) {
        return Err(ChessError::DimensionMismatch("tensor dimensions differ".into()));
    }
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|a| (a + 1..r).map(move |b| (a, b))).collect();
    let pair_pos = |a: usize, b: usize| pairs.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
    let mut out = Tensor::zeros(r, n);
    let mut slot = vec![0usize; r];
    for_each_index(r, n, |outer| {
        let mut acc = ExactScalar::zero();
        for_each_index(pairs.len(), n, |inner| {
            let mut term = ExactScalar::one();
            for (k, op) in ops.iter().enumerate() {
                for (t, s) in slot.iter_mut().enumerate() {
                    *s = if t == k { outer[k] } else { inner[pair_pos(t, k)] };
                }
                let v = &op.entries[op.offset(&slot)];
                if v.is_zero() {
                    return;
                }
                term = &term * v;
            }
            acc += term;
        });
        let off = out.offset(outer);
        out.entries[off] = acc;
    });
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryLabel {
    Diagonal,
    Symmetric,
    JSkew,
    J2Skew,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransposeFlag {
    /// Ta = a
    Fixed,
    /// Ta = ā
    Conjugate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryClass {
    pub label: SymmetryLabel,
    pub transpose: Option<TransposeFlag>,
}

/// Classes are named after the eigenvalue of J: `j_skew` means `Ja = j·a`.
pub fn classify(a: &CubicMatrix) -> SymmetryClass {
    let ja = cyclic_j(a);
    let only_diagonal = a.nonzeros().iter().all(|(t, _)| t[0] == t[1] && t[1] == t[2]);
    let label = if only_diagonal {
        SymmetryLabel::Diagonal
    } else if ja == *a {
        SymmetryLabel::Symmetric
    } else if ja == a.scale(&ExactScalar::j()) {
        SymmetryLabel::JSkew
    } else if ja == a.scale(&ExactScalar::j2()) {
        SymmetryLabel::J2Skew
    } else {
        SymmetryLabel::Mixed
    };
    let ta = transpose_t(a);
    let transpose = if ta == *a {
        Some(TransposeFlag::Fixed)
    } else if ta == a.conjugate() {
        Some(TransposeFlag::Conjugate)
    } else {
        None
    };
    SymmetryClass { label, transpose }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub diag: CubicMatrix,
    pub sym: CubicMatrix,
    pub jskew: CubicMatrix,
    pub j2skew: CubicMatrix,
}

impl Decomposition {
    pub fn sum(&self) -> CubicMatrix {
        self.diag.add(&self.sym).add(&self.jskew).add(&self.j2skew)
    }
}

/// Splits `a` into its diagonal part and the three J-eigencomponents of the rest.
pub fn decompose(a: &CubicMatrix) -> Decomposition {
    let n = a.n;
    let diag = CubicMatrix::from_fn(n, |i, k, m| if i == k && k == m { a.at([i, k, m]).clone() } else { ExactScalar::zero() });
    let off = a.sub(&diag);
    let j1 = cyclic_j(&off);
    let j2 = cyclic_j(&j1);
    let third = ExactScalar::from_ratio(1, 3);
    let combo = |c1: &ExactScalar, c2: &ExactScalar| off.add(&j1.scale(c1)).add(&j2.scale(c2)).scale(&third);
    let one = ExactScalar::one();
    let (j, jj) = (ExactScalar::j(), ExactScalar::j2());
    Decomposition { sym: combo(&one, &one), jskew: combo(&jj, &j), j2skew: combo(&j, &jj), diag }
}

/// All index triples in the J-orbit of `t` (0-based), starting at `t`.
fn orbit(t: Triple) -> [Triple; 3] {
    [t, [t[1], t[2], t[0]], [t[2], t[0], t[1]]]
}

/// Orbit-generated matrix with `Ja = factor·a`, entry 1 at the lexicographically smallest orbit index.
/// `t` is 1-based.
pub fn orbit_matrix(n: usize, t: Triple, factor: &ExactScalar) -> CubicMatrix {
    let t0 = [t[0] - 1, t[1] - 1, t[2] - 1];
    let lead = *orbit(t0).iter().min().unwrap();
    let mut out = CubicMatrix::zeros(n);
    let mut v = ExactScalar::one();
    for p in orbit(lead) {
        *out.at_mut(p) = v.clone();
        v = &v * factor;
    }
    out
}

/// Which J-eigenvalue family to generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// J a = a
    Symmetric,
    /// J a = j a
    JSkew,
    /// J a = j² a
    J2Skew,
}

impl Family {
    pub fn factor(self) -> ExactScalar {
        match self {
            Family::Symmetric => ExactScalar::one(),
            Family::JSkew => ExactScalar::j(),
            Family::J2Skew => ExactScalar::j2(),
        }
    }
}

/// The two j-skew matrices for n = 2, on the orbits of (1,1,2) and (1,2,2).
pub fn rho_basis() -> [CubicMatrix; 2] {
    family_n2(Family::JSkew)
}

pub fn family_n2(f: Family) -> [CubicMatrix; 2] {
    [orbit_matrix(2, [1, 1, 2], &f.factor()), orbit_matrix(2, [1, 2, 2], &f.factor())]
}

/// Orbit representatives and names of the eight n = 3 off-diagonal orbits.
pub const N3_ORBITS: [(&str, Triple); 8] = [
    ("1+", [2, 3, 2]),
    ("1-", [3, 2, 3]),
    ("2+", [3, 1, 3]),
    ("2-", [1, 3, 1]),
    ("3+", [1, 2, 1]),
    ("3-", [2, 1, 2]),
    ("7", [1, 2, 3]),
    ("8", [3, 2, 1]),
];

#[derive(Clone, Debug)]
pub struct NamedBases {
    pub o: Vec<(String, CubicMatrix)>,
    pub p: Vec<(String, CubicMatrix)>,
    pub r: Vec<(String, CubicMatrix)>,
    pub k: Vec<(String, CubicMatrix)>,
}

impl NamedBases {
    pub fn get_r(&self, name: &str) -> Option<&CubicMatrix> {
        self.r.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }
}

pub fn named_bases(n: usize) -> Result<NamedBases> {
    if n != 3 {
        return Err(ChessError::Unsupported(format!("named bases exist for n=3, got {n}")));
    }
    let fam = |prefix: &str, f: Family| {
        N3_ORBITS.iter().map(|(name, t)| (format!("{prefix}{name}"), orbit_matrix(3, *t, &f.factor()))).collect::<Vec<_>>()
    };
    Ok(NamedBases {
        o: (1..=3).map(|k| (format!("O{k}"), CubicMatrix::diagonal_unit(k, 3).unwrap())).collect(),
        p: fam("P", Family::Symmetric),
        r: fam("R", Family::JSkew),
        k: fam("K", Family::J2Skew),
    })
}

/// Coordinates of `x` in the span of `basis`, if it lies there.
pub fn expand_in(basis: &[CubicMatrix], x: &CubicMatrix) -> Option<Vec<ExactScalar>> {
    let n3 = x.entries.len();
    let rows: Vec<Vec<ExactScalar>> = (0..n3).map(|r| basis.iter().map(|b| b.entries[r].clone()).collect()).collect();
    linalg::solve(&rows, &x.entries)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductExpansion {
    /// 0-based positions in the basis.
    pub args: [usize; 3],
    /// `None` when the product leaves the span.
    pub coeffs: Option<Vec<ExactScalar>>,
    pub is_zero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubalgebraReport {
    pub law: Law,
    pub closes: bool,
    pub all_zero: bool,
    pub products: Vec<ProductExpansion>,
}

pub fn check_subalgebra(basis: &[CubicMatrix], law: Law) -> Result<SubalgebraReport> {
    if basis.is_empty() {
        return Err(ChessError::DimensionMismatch("empty basis".into()));
    }
    let mut products = Vec::new();
    for a in 0..basis.len() {
        for b in 0..basis.len() {
            for c in 0..basis.len() {
                let p = law.apply(&basis[a], &basis[b], &basis[c])?;
                products.push(ProductExpansion { args: [a, b, c], is_zero: p.is_zero(), coeffs: expand_in(basis, &p) });
            }
        }
    }
    Ok(SubalgebraReport {
        law,
        closes: products.iter().all(|p| p.coeffs.is_some()),
        all_zero: products.iter().all(|p| p.is_zero),
        products,
    })
}

/// The constant `c` in `{x, y, x} = c·y` (None if the bracket is not a multiple of `y`).
pub fn bracket_constant(x: &CubicMatrix, y: &CubicMatrix) -> Option<ExactScalar> {
    let b = j_bracket(x, y, x).ok()?;
    let c = expand_in(std::slice::from_ref(y), &b)?;
    Some(c[0].clone())
}

/// Finds λ in {ζᵏ, ζᵏ/√2, ζᵏ/2 : k ∈ 0..24} with λ² = t.
fn unit_like_sqrt(t: &ExactScalar) -> Option<ExactScalar> {
    let scales = [ExactScalar::one(), ExactScalar::sqrt2() * ExactScalar::from_ratio(1, 2), ExactScalar::from_ratio(1, 2)];
    (0..24).flat_map(|k| scales.iter().map(move |s| ExactScalar::zeta_pow(k) * s)).find(|l| &(l * l) == t)
}

/// Rescales a closing pair so that `{x,y,x} = −y` and `{y,x,y} = −x`.
pub fn normalize_pair(x: &CubicMatrix, y: &CubicMatrix) -> Option<[CubicMatrix; 2]> {
    let cx = bracket_constant(x, y)?;
    let cy = bracket_constant(y, x)?;
    let minus_one = ExactScalar::from_int(-1);
    // {λx, μy, λx} = λ²μ·cx·y = λ²cx·(μy), so λ² = −1/cx.
    let lx = unit_like_sqrt(&(&minus_one / &cx))?;
    let ly = unit_like_sqrt(&(&minus_one / &cy))?;
    Some([x.scale(&lx), y.scale(&ly)])
}

/// ρ⁽¹⁾, ρ⁽²⁾ rescaled so that both j-bracket constants equal −1.
pub fn normalized_rho_basis() -> [CubicMatrix; 2] {
    let [a, b] = rho_basis();
    normalize_pair(&a, &b).expect("rho pair normalizes inside the field")
}

/// Expansion of every bracket `{b_α, b_β, b_γ}` in the basis, in row-major order.
pub fn bracket_table(basis: &[CubicMatrix]) -> Result<Vec<Option<Vec<ExactScalar>>>> {
    Ok(check_subalgebra(basis, Law::JBracket)?.products.into_iter().map(|p| p.coeffs).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub lhs: Triple,
    pub mid: Triple,
    pub rhs: Triple,
    pub result: SparseCubic,
}

#[derive(Clone, Debug, Serialize)]
pub struct TernaryTable {
    pub n: usize,
    pub law: Law,
    pub rows: Vec<TableRow>,
}

fn unit_triples(n: usize) -> Vec<Triple> {
    let mut out = Vec::with_capacity(n * n * n);
    for i in 1..=n {
        for k in 1..=n {
            for m in 1..=n {
                out.push([i, k, m]);
            }
        }
    }
    out
}

/// Products of all basis-unit triples, row-major over (lhs, mid, rhs).
pub fn mult_table(n: usize, law: Law) -> Result<TernaryTable> {
    if !(2..=3).contains(&n) || law == Law::JBracket {
        return Err(ChessError::Unsupported(format!("tables exist for n in {{2,3}} and star/oslash (n={n}, {})", law.name())));
    }
    let units = unit_triples(n);
    let m = units.len();
    let rows = (0..m * m * m)
        .into_par_iter()
        .map(|r| {
            let (a, b, c) = (units[r / (m * m)], units[(r / m) % m], units[r % m]);
            let ua = CubicMatrix::basis_unit(a[0], a[1], a[2], n)?;
            let ub = CubicMatrix::basis_unit(b[0], b[1], b[2], n)?;
            let uc = CubicMatrix::basis_unit(c[0], c[1], c[2], n)?;
            Ok(TableRow { lhs: a, mid: b, rhs: c, result: law.apply(&ua, &ub, &uc)?.to_sparse() })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TernaryTable { n, law, rows })
}

fn label(t: &Triple) -> String {
    t.iter().map(|x| x.to_string()).collect()
}

impl TernaryTable {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| ChessError::Parse(e.to_string());
        w.write_record(["lhs", "mid", "rhs", "result"]).map_err(io)?;
        for r in &self.rows {
            w.write_record([label(&r.lhs), label(&r.mid), label(&r.rhs), r.result.to_compact()]).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| ChessError::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AssociativityWitness {
    pub law: Law,
    pub units: [Triple; 5],
    /// `a·(b·c·d)·e`
    pub inner_middle: SparseCubic,
    /// `(a·b·c)·d·e`
    pub inner_left: SparseCubic,
}

/// First 5-tuple of basis units (row-major) with `a(bcd)e ≠ (abc)de`.
pub fn non_associativity_witness(n: usize, law: Law) -> Result<Option<AssociativityWitness>> {
    let units: Vec<(Triple, CubicMatrix)> =
        unit_triples(n).into_iter().map(|t| (t, CubicMatrix::basis_unit(t[0], t[1], t[2], n).unwrap())).collect();
    let m = units.len();
    for code in 0..m.pow(5) {
        let pick: Vec<&(Triple, CubicMatrix)> = (0..5).rev().map(|p| &units[(code / m.pow(p)) % m]).collect();
        let [a, b, c, d, e] = [&pick[0].1, &pick[1].1, &pick[2].1, &pick[3].1, &pick[4].1];
        let mid = law.apply(a, &law.apply(b, c, d)?, e)?;
        let left = law.apply(&law.apply(a, b, c)?, d, e)?;
        if mid != left {
            return Ok(Some(AssociativityWitness {
                law,
                units: [pick[0].0, pick[1].0, pick[2].0, pick[3].0, pick[4].0],
                inner_middle: mid.to_sparse(),
                inner_left: left.to_sparse(),
            }));
        }
    }
    Ok(None)
}
