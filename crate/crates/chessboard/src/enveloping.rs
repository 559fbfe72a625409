//! j-commutators of square matrices, the Pauli realization of the ρ-algebra and the
//! exhaustive search for linear identities among double brackets.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::cubic;
use crate::error::{ChessError, Result};
use crate::linalg::{self, Echelon};
use rand::Rng;

use crate::sampling::{prng, Prng};
use crate::scalar::ExactScalar;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SquareMatrix {
    n: usize,
    entries: Vec<ExactScalar>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![ExactScalar::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |r, c| if r == c { ExactScalar::one() } else { ExactScalar::zero() })
    }

    /// 0-based indices.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> ExactScalar) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(f(r, c));
            }
        }
        Self { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(ChessError::DimensionMismatch("rows of a square matrix differ in length".into()));
        }
        Ok(Self { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| ExactScalar::from_int(x)).collect()).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 0-based.
    pub fn get(&self, r: usize, c: usize) -> &ExactScalar {
        &self.entries[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: ExactScalar) {
        self.entries[r * self.n + c] = v;
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExactScalar::is_zero)
    }

    fn check(&self, rhs: &Self) -> Result<()> {
        if self.n != rhs.n {
            return Err(ChessError::DimensionMismatch(format!("{}x{} vs {}x{}", self.n, self.n, rhs.n, rhs.n)));
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        out.entries[r * n + c] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(Self { n: self.n, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(Self { n: self.n, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect() })
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|x| x * s).collect() }
    }

    pub fn trace(&self) -> ExactScalar {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn determinant(&self) -> ExactScalar {
        let mut m: Vec<Vec<ExactScalar>> = (0..self.n).map(|r| self.entries[r * self.n..(r + 1) * self.n].to_vec()).collect();
        let mut det = ExactScalar::one();
        for c in 0..self.n {
            let Some(p) = (c..self.n).find(|&r| !m[r][c].is_zero()) else {
                return ExactScalar::zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det = &det * &m[c][c];
            let inv = m[c][c].inverse().expect("nonzero pivot");
            for r in c + 1..self.n {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = &m[r][c] * &inv;
                for k in c..self.n {
                    let t = &f * &m[c][k];
                    m[r][k] -= t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut aug: Vec<Vec<ExactScalar>> = (0..n)
            .map(|r| {
                let mut row = self.entries[r * n..(r + 1) * n].to_vec();
                row.extend((0..n).map(|c| if c == r { ExactScalar::one() } else { ExactScalar::zero() }));
                row
            })
            .collect();
        let pivots = linalg::rref(&mut aug, n);
        if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
            return Err(ChessError::DivisionByZero);
        }
        Ok(Self { n, entries: aug.into_iter().flat_map(|r| r[n..].to_vec()).collect() })
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            (0..self.n).map(|r| (0..self.n).map(|c| self.get(r, c).to_string()).collect::<Vec<_>>().join(", ")).collect();
        write!(f, "[[{}]]", rows.join("], ["))
    }
}

/// `A B C + j B C A + j² C A B`.
pub fn j_commutator(a: &SquareMatrix, b: &SquareMatrix, c: &SquareMatrix) -> Result<SquareMatrix> {
    bracket(&[a, b, c], &ExactScalar::j())
}

/// `Σ_r phase^r · (X_{1+r} ⋯ X_{a} X_1 ⋯ X_r)`, so that `[X1..Xa] = phase·[X2..Xa,X1]`.
pub fn bracket(xs: &[&SquareMatrix], phase: &ExactScalar) -> Result<SquareMatrix> {
    let a = xs.len();
    let n = xs[0].n;
    let mut out = SquareMatrix::zeros(n);
    let mut w = ExactScalar::one();
    for r in 0..a {
        let mut prod = xs[r].clone();
        for s in 1..a {
            prod = prod.mul(xs[(r + s) % a])?;
        }
        out = out.add(&prod.scale(&w))?;
        w = &w * phase;
    }
    Ok(out)
}

/// σ¹, σ², σ³ with σ² = [[0,−i],[i,0]].
pub fn pauli() -> [SquareMatrix; 3] {
    let (o, z, i) = (ExactScalar::one(), ExactScalar::zero(), ExactScalar::i());
    [
        SquareMatrix::from_rows(vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]]).unwrap(),
        SquareMatrix::from_rows(vec![vec![z.clone(), -&i], vec![i, z.clone()]]).unwrap(),
        SquareMatrix::from_rows(vec![vec![o.clone(), z.clone()], vec![z, -o]]).unwrap(),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct PauliReport {
    /// σ¹σ²σ¹ + jσ²σ¹σ¹ + j²σ¹σ¹σ² = −2σ²
    pub unnormalized: bool,
    /// [X¹,X²,X¹] = −X², [X²,X¹,X²] = −X¹ with X = σ/√2
    pub normalized: bool,
    pub traceless: bool,
    /// The full bracket table of (X¹, X²) equals that of the normalized ρ pair.
    pub matches_rho_table: bool,
}

impl PauliReport {
    pub fn all_pass(&self) -> bool {
        self.unnormalized && self.normalized && self.traceless && self.matches_rho_table
    }
}

fn expand_square(basis: &[SquareMatrix], x: &SquareMatrix) -> Option<Vec<ExactScalar>> {
    let rows: Vec<Vec<ExactScalar>> = (0..x.entries.len()).map(|r| basis.iter().map(|b| b.entries[r].clone()).collect()).collect();
    linalg::solve(&rows, &x.entries)
}

pub fn verify_pauli_representation() -> Result<PauliReport> {
    let [s1, s2, s3] = pauli();
    let unnormalized = j_commutator(&s1, &s2, &s1)? == s2.scale(&ExactScalar::from_int(-2));
    let inv_sqrt2 = ExactScalar::sqrt2().inverse()?;
    let x = [s1.scale(&inv_sqrt2), s2.scale(&inv_sqrt2)];
    let minus = ExactScalar::from_int(-1);
    let normalized = j_commutator(&x[0], &x[1], &x[0])? == x[1].scale(&minus) && j_commutator(&x[1], &x[0], &x[1])? == x[0].scale(&minus);
    let traceless = [&s1, &s2, &s3].iter().all(|s| s.trace().is_zero());
    let rho = cubic::normalized_rho_basis();
    let rho_table = cubic::bracket_table(&rho)?;
    let mut matches_rho_table = true;
    for (idx, expected) in rho_table.iter().enumerate() {
        let (a, b, c) = (idx / 4, (idx / 2) % 2, idx % 2);
        let got = expand_square(&x, &j_commutator(&x[a], &x[b], &x[c])?);
        matches_rho_table &= got.as_ref() == expected.as_ref();
    }
    Ok(PauliReport { unnormalized, normalized, traceless, matches_rho_table })
}

/// A nested bracket expression over distinct labels.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BracketWord {
    Leaf(u8),
    Bracket(Vec<BracketWord>),
}

impl BracketWord {
    fn min_label(&self) -> u8 {
        match self {
            BracketWord::Leaf(l) => *l,
            BracketWord::Bracket(ch) => ch.iter().map(BracketWord::min_label).min().unwrap(),
        }
    }

    /// Canonical representative and the exponent `k` with `self = phase^k · canonical`.
    /// At each node the children are rotated so the one holding the smallest label leads.
    pub fn canonical(&self) -> (BracketWord, usize) {
        match self {
            BracketWord::Leaf(_) => (self.clone(), 0),
            BracketWord::Bracket(ch) => {
                let mut k = 0;
                let mut kids: Vec<BracketWord> = ch
                    .iter()
                    .map(|c| {
                        let (w, e) = c.canonical();
                        k += e;
                        w
                    })
                    .collect();
                let lead = (0..kids.len()).min_by_key(|&p| kids[p].min_label()).unwrap();
                kids.rotate_left(lead);
                (BracketWord::Bracket(kids), k + lead)
            }
        }
    }

    pub fn evaluate(&self, args: &[SquareMatrix], phase: &ExactScalar) -> Result<SquareMatrix> {
        match self {
            BracketWord::Leaf(l) => Ok(args[*l as usize].clone()),
            BracketWord::Bracket(ch) => {
                let vals = ch.iter().map(|c| c.evaluate(args, phase)).collect::<Result<Vec<_>>>()?;
                bracket(&vals.iter().collect::<Vec<_>>(), phase)
            }
        }
    }

    fn fill(&self, labels: &[u8], next: &mut usize) -> BracketWord {
        match self {
            BracketWord::Leaf(_) => {
                *next += 1;
                BracketWord::Leaf(labels[*next - 1])
            }
            BracketWord::Bracket(ch) => BracketWord::Bracket(ch.iter().map(|c| c.fill(labels, next)).collect()),
        }
    }

    fn leaves(&self) -> usize {
        match self {
            BracketWord::Leaf(_) => 1,
            BracketWord::Bracket(ch) => ch.iter().map(BracketWord::leaves).sum(),
        }
    }
}

impl fmt::Display for BracketWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketWord::Leaf(l) => write!(f, "{}", (b'A' + l) as char),
            BracketWord::Bracket(ch) => {
                write!(f, "[")?;
                for (p, c) in ch.iter().enumerate() {
                    if p > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// Nesting patterns, leaves unlabeled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum BracketShape {
    /// One bracket nested in one slot of another: `2a − 1` labels.
    Double,
    /// Two brackets nested in an outer one, or a bracket nested twice: `3a − 2` labels.
    Triple,
}

fn leaf() -> BracketWord {
    BracketWord::Leaf(0)
}

fn templates(shape: BracketShape, arity: usize) -> Vec<BracketWord> {
    let br = |ch: Vec<BracketWord>| BracketWord::Bracket(ch);
    let with_at = |inner: &BracketWord, pos: usize| br((0..arity).map(|p| if p == pos { inner.clone() } else { leaf() }).collect());
    let simple = br(vec![leaf(); arity]);
    let doubles: Vec<BracketWord> = (0..arity).map(|p| with_at(&simple, p)).collect();
    match shape {
        BracketShape::Double => doubles,
        BracketShape::Triple => {
            let mut out = Vec::new();
            for d in &doubles {
                for p in 0..arity {
                    out.push(with_at(d, p));
                }
            }
            for p in 0..arity {
                for q in p + 1..arity {
                    out.push(br((0..arity).map(|s| if s == p || s == q { simple.clone() } else { leaf() }).collect()));
                }
            }
            out
        }
    }
}

fn permutations(k: usize) -> Vec<Vec<u8>> {
    fn go(cur: &mut Vec<u8>, used: &mut Vec<bool>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for l in 0..used.len() {
            if !used[l] {
                used[l] = true;
                cur.push(l as u8);
                go(cur, used, out);
                cur.pop();
                used[l] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

#[derive(Clone, Debug)]
pub struct WordClasses {
    /// Canonical representatives in sorted order.
    pub classes: Vec<BracketWord>,
    pub raw_count: usize,
    /// Number of raw words in each class, aligned with `classes`.
    pub orbit_sizes: Vec<usize>,
}

/// Enumerates all labelings of the shape and reduces them modulo the cyclic rule at every node.
pub fn enumerate_words(shape: BracketShape, arity: usize) -> WordClasses {
    let temps = templates(shape, arity);
    let labels = temps[0].leaves();
    let mut seen: BTreeMap<BracketWord, usize> = BTreeMap::new();
    let mut raw = 0;
    for t in &temps {
        for perm in permutations(labels) {
            let w = t.fill(&perm, &mut 0);
            raw += 1;
            *seen.entry(w.canonical().0).or_default() += 1;
        }
    }
    let (classes, orbit_sizes) = seen.into_iter().unzip();
    WordClasses { classes, raw_count: raw, orbit_sizes }
}

/// The 40 classes of `[·,[·,·,·],·]`-type words over five labels.
pub fn enumerate_double_brackets() -> WordClasses {
    enumerate_words(BracketShape::Double, 3)
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchConfig {
    pub n: usize,
    pub arity: usize,
    pub shape: BracketShape,
    pub seed: u64,
    /// Tuples per sample set; defaults to twice the number of classes.
    pub tuples: Option<usize>,
    /// Integer entries are drawn from [−bound, bound].
    pub entry_bound: i64,
    /// Use only the first `max_words` classes (bounded stretch searches).
    pub max_words: Option<usize>,
}

impl SearchConfig {
    pub fn ternary(n: usize, seed: u64) -> Self {
        Self { n, arity: 3, shape: BracketShape::Double, seed, tuples: None, entry_bound: 3, max_words: None }
    }

    /// Ordinary commutators, where the Jacobi identity must show up.
    pub fn binary(n: usize, seed: u64) -> Self {
        Self { arity: 2, ..Self::ternary(n, seed) }
    }

    pub fn phase(&self) -> ExactScalar {
        if self.arity == 2 {
            ExactScalar::from_int(-1)
        } else {
            ExactScalar::j()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchCertificate {
    pub n: usize,
    pub arity: usize,
    pub words: Vec<String>,
    pub raw_words: usize,
    /// Each tuple is a list of matrices given as row-major integer entries.
    pub tuples: Vec<Vec<Vec<i64>>>,
    pub rank: usize,
    pub nullity: usize,
    pub recheck_rank: usize,
    pub recheck_tuples: usize,
    /// Basis of the identity space; entries are coefficients on `words`.
    pub identities: Vec<Vec<ExactScalar>>,
}

impl SearchCertificate {
    pub fn stable(&self) -> bool {
        self.rank == self.recheck_rank
    }
}

fn random_tuple(rng: &mut Prng, labels: usize, n: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..labels).map(|_| (0..n * n).map(|_| rng.gen_range(-bound..=bound)).collect()).collect()
}

fn to_matrices(tuple: &[Vec<i64>], n: usize) -> Vec<SquareMatrix> {
    tuple.iter().map(|e| SquareMatrix { n, entries: e.iter().map(|&x| ExactScalar::from_int(x)).collect() }).collect()
}

/// Rows of the linear system `Σ c_w · w(tuple) = 0`, one per matrix entry and tuple.
pub fn sample_rows(words: &[BracketWord], phase: &ExactScalar, n: usize, tuple: &[Vec<i64>]) -> Result<Vec<Vec<ExactScalar>>> {
    let mats = to_matrices(tuple, n);
    let vals = words.par_iter().map(|w| w.evaluate(&mats, phase)).collect::<Result<Vec<_>>>()?;
    Ok((0..n * n).map(|p| vals.iter().map(|v| v.entries[p].clone()).collect()).collect())
}

/// Tuples drawn and their rows, when the caller wants them back.
type Kept<'a> = (&'a mut Vec<Vec<Vec<i64>>>, &'a mut Vec<Vec<ExactScalar>>);

fn sample_rank(
    words: &[BracketWord],
    cfg: &SearchConfig,
    rng: &mut Prng,
    count: usize,
    labels: usize,
    keep: &mut Option<Kept<'_>>,
) -> Result<usize> {
    let phase = cfg.phase();
    let mut ech = Echelon::new(words.len());
    for _ in 0..count {
        let tuple = random_tuple(rng, labels, cfg.n, cfg.entry_bound);
        if !ech.is_full() || keep.is_some() {
            let rows = sample_rows(words, &phase, cfg.n, &tuple)?;
            for row in rows {
                if let Some((_, all)) = keep.as_mut() {
                    all.push(row.clone());
                }
                if !ech.is_full() {
                    ech.insert(row);
                }
            }
        }
        if let Some((ts, _)) = keep.as_mut() {
            ts.push(tuple);
        }
    }
    Ok(ech.rank())
}

pub fn double_bracket_identity_search(cfg: &SearchConfig) -> Result<SearchCertificate> {
    if cfg.n < 2 || !(2..=3).contains(&cfg.arity) {
        return Err(ChessError::Unsupported(format!("n={} arity={}", cfg.n, cfg.arity)));
    }
    let enumerated = enumerate_words(cfg.shape, cfg.arity);
    let mut words = enumerated.classes;
    if let Some(cap) = cfg.max_words {
        words.truncate(cap);
    }
    let labels = words[0].leaves();
    let count = cfg.tuples.unwrap_or(2 * words.len()).max(1);
    let mut rng = prng(cfg.seed);
    let mut tuples = Vec::new();
    let mut rows = Vec::new();
    let rank = sample_rank(&words, cfg, &mut rng, count, labels, &mut Some((&mut tuples, &mut rows)))?;
    let mut fresh = prng(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let recheck_rank = sample_rank(&words, cfg, &mut fresh, count, labels, &mut None)?;
    let identities = if rank < words.len() { linalg::nullspace(&rows, words.len()) } else { Vec::new() };
    Ok(SearchCertificate {
        n: cfg.n,
        arity: cfg.arity,
        words: words.iter().map(ToString::to_string).collect(),
        raw_words: enumerated.raw_count,
        tuples,
        rank,
        nullity: words.len() - rank,
        recheck_rank,
        recheck_tuples: count,
        identities,
    })
}
