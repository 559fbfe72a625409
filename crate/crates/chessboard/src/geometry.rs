//! Z3 gauge curvature in coordinates and linear-connection geometry on point jets.
//!
//! Gauge potentials are matrix-valued polynomials; connections are jets of Γ^l_{ik} at the
//! origin, lifted to polynomial fields when the exterior calculus has to act on them.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ChessError, Result};
use crate::exterior::{random_poly, CoeffMul, CoordinateAlgebra, FormCoeff, FormElement, FormSym, FormWord, PolyFunction, Side};
use crate::sampling::{small_rational, Prng};
use crate::scalar::ExactScalar;

/// Square matrix of polynomials, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct MatPoly {
    pub dim: usize,
    e: Vec<PolyFunction>,
}

impl MatPoly {
    pub fn zero(alg: &Arc<CoordinateAlgebra>, dim: usize) -> Self {
        Self { dim, e: vec![PolyFunction::zero(alg); dim * dim] }
    }

    pub fn scalar(alg: &Arc<CoordinateAlgebra>, dim: usize, f: &PolyFunction) -> Self {
        let mut m = Self::zero(alg, dim);
        for r in 0..dim {
            m.e[r * dim + r] = f.clone();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> PolyFunction) -> Self {
        let e = (0..dim * dim).map(|x| f(x / dim, x % dim)).collect();
        Self { dim, e }
    }

    pub fn get(&self, r: usize, c: usize) -> &PolyFunction {
        &self.e[r * self.dim + c]
    }

    fn map(&self, f: impl Fn(&PolyFunction) -> PolyFunction) -> Self {
        Self { dim: self.dim, e: self.e.iter().map(f).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.plus(&o.scaled(&ExactScalar::from_int(-1)))
    }

    pub fn eval(&self, point: &[ExactScalar]) -> Vec<ExactScalar> {
        self.e.iter().map(|p| p.eval(point)).collect()
    }
}

impl FormCoeff for MatPoly {
    fn is_zero(&self) -> bool {
        self.e.iter().all(PolyFunction::is_zero)
    }
    fn plus(&self, o: &Self) -> Self {
        Self { dim: self.dim, e: self.e.iter().zip(&o.e).map(|(a, b)| a.add(b)).collect() }
    }
    fn scaled(&self, s: &ExactScalar) -> Self {
        self.map(|p| p.scale(s))
    }
    fn partial(&self, i: usize) -> Self {
        self.map(|p| p.partial(i))
    }
    fn conj(&self) -> Self {
        self.map(PolyFunction::conj)
    }
}

impl CoeffMul for MatPoly {
    fn times(&self, o: &Self) -> Self {
        let d = self.dim;
        Self::from_fn(d, |r, c| (0..d).fold(PolyFunction::zero(self.e[0].algebra()), |acc, t| acc.add(&self.get(r, t).mul(o.get(t, c)))))
    }
}

/// `A = A_i dξ^i` with `A_i` square polynomial matrices of a common size.
#[derive(Clone, Debug)]
pub struct GaugePotential {
    pub n: usize,
    pub dim: usize,
    pub a: Vec<MatPoly>,
    alg: Arc<CoordinateAlgebra>,
}

impl GaugePotential {
    pub fn new(alg: &Arc<CoordinateAlgebra>, a: Vec<MatPoly>) -> Result<Self> {
        let n = alg.n;
        if a.len() != n {
            return Err(ChessError::DimensionMismatch(format!("{} components for {n} coordinates", a.len())));
        }
        let dim = a.first().map_or(1, |m| m.dim);
        if a.iter().any(|m| m.dim != dim) {
            return Err(ChessError::DimensionMismatch("potential components differ in size".into()));
        }
        Ok(Self { n, dim, a, alg: alg.clone() })
    }

    pub fn zero(alg: &Arc<CoordinateAlgebra>, dim: usize) -> Self {
        Self::new(alg, vec![MatPoly::zero(alg, dim); alg.n]).unwrap()
    }

    /// `f_i · 1` with random polynomial `f_i`.
    pub fn random_abelian(alg: &Arc<CoordinateAlgebra>, rng: &mut Prng, dim: usize, degree: usize) -> Self {
        let a = (0..alg.n).map(|_| MatPoly::scalar(alg, dim, &random_poly(alg, rng, degree, 4))).collect();
        Self::new(alg, a).unwrap()
    }

    pub fn random_matrix(alg: &Arc<CoordinateAlgebra>, rng: &mut Prng, dim: usize, degree: usize) -> Self {
        let a = (0..alg.n).map(|_| MatPoly::from_fn(dim, |_, _| random_poly(alg, rng, degree, 3))).collect();
        Self::new(alg, a).unwrap()
    }

    pub fn one_form(&self) -> FormElement<MatPoly> {
        let mut out = FormElement::zero(self.n, Side::D);
        for (i, c) in self.a.iter().enumerate() {
            out.add_word(&[FormSym::D1(i as u8)], c.clone());
        }
        out
    }

    pub fn algebra(&self) -> &Arc<CoordinateAlgebra> {
        &self.alg
    }
}

/// `F_{ik} = ∂_i A_k − ∂_k A_i + A_i A_k − A_k A_i`.
pub fn field_strength(a: &GaugePotential) -> Vec<Vec<MatPoly>> {
    let p = &a.a;
    (0..a.n)
        .map(|i| (0..a.n).map(|k| p[k].partial(i).sub(&p[i].partial(k)).plus(&p[i].times(&p[k])).sub(&p[k].times(&p[i]))).collect())
        .collect()
}

type Triple<T> = Vec<Vec<Vec<T>>>;

fn triple_fn(n: usize, f: impl Fn(usize, usize, usize) -> MatPoly) -> Triple<MatPoly> {
    (0..n).map(|i| (0..n).map(|k| (0..n).map(|m| f(i, k, m)).collect()).collect()).collect()
}

/// `Ω_{ikm} = ∂_i∂_k A_m + A_i ∂_k A_m − ∂_k A_m A_i + A_i A_k A_m`, as displayed.
pub fn omega_components(a: &GaugePotential) -> Triple<MatPoly> {
    let p = &a.a;
    triple_fn(a.n, |i, k, m| {
        let dkm = p[m].partial(k);
        dkm.partial(i).plus(&p[i].times(&dkm)).sub(&dkm.times(&p[i])).plus(&p[i].times(&p[k]).times(&p[m]))
    })
}

/// `Ω_{ikm} = ∂_i∂_k A_m + ∂_i A_k A_m − A_m ∂_i A_k + A_i A_k A_m`, the ordering the calculus produces.
pub fn omega_components_ordered(a: &GaugePotential) -> Triple<MatPoly> {
    let p = &a.a;
    triple_fn(a.n, |i, k, m| {
        let dik = p[k].partial(i);
        p[m].partial(k).partial(i).plus(&dik.times(&p[m])).sub(&p[m].times(&dik)).plus(&p[i].times(&p[k]).times(&p[m]))
    })
}

/// `Ω_{ikm} dξ^i dξ^k dξ^m + F_{ik} d²ξ^i dξ^k`.
pub fn threeform_from_components(n: usize, omega: &Triple<MatPoly>, f: &[Vec<MatPoly>]) -> FormElement<MatPoly> {
    let mut out = FormElement::zero(n, Side::D);
    for i in 0..n {
        for k in 0..n {
            for m in 0..n {
                out.add_word(&[FormSym::D1(i as u8), FormSym::D1(k as u8), FormSym::D1(m as u8)], omega[i][k][m].clone());
            }
            out.add_word(&[FormSym::D2(i as u8), FormSym::D1(k as u8)], f[i][k].clone());
        }
    }
    out
}

/// `d²A + d(A²) + A dA + A³` with `d(A²) = dA·A + j A·dA`.
pub fn curvature_calculus(a: &GaugePotential) -> FormElement<MatPoly> {
    let af = a.one_form();
    let da = af.d();
    let d_a2 = da.mul(&af).add(&af.mul(&da).scale(&ExactScalar::j()));
    da.d().add(&d_a2).add(&af.mul(&da)).add(&af.mul(&af).mul(&af))
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureAssembly {
    /// Displayed Ω_{ikm} with F_{ik} matches the calculus.
    pub displayed_agrees: bool,
    /// The reordered Ω_{ikm} with F_{ik} matches the calculus.
    pub ordered_agrees: bool,
}

pub fn assemble_curvature_threeform(a: &GaugePotential) -> CurvatureAssembly {
    let calc = curvature_calculus(a);
    let f = field_strength(a);
    let shown = threeform_from_components(a.n, &omega_components(a), &f);
    let ordered = threeform_from_components(a.n, &omega_components_ordered(a), &f);
    CurvatureAssembly { displayed_agrees: shown == calc, ordered_agrees: ordered == calc }
}

/// `D_i M = ∂_i M + A_i M − M A_i`.
pub fn covariant_derivative(a: &GaugePotential, i: usize, m: &MatPoly) -> MatPoly {
    m.partial(i).plus(&a.a[i].times(m)).sub(&m.times(&a.a[i]))
}

/// Compares the calculus curvature with `(1/3)[j D_i F_{mk} + j² D_k F_{mi}] dξ^i dξ^k dξ^m + F_{ik} d²ξ^i dξ^k`
/// after reduction.
pub fn covariant_identity_check(a: &GaugePotential) -> bool {
    let f = field_strength(a);
    let third = ExactScalar::from_ratio(1, 3);
    let cov = triple_fn(a.n, |i, k, m| {
        covariant_derivative(a, i, &f[m][k])
            .scaled(&ExactScalar::j())
            .plus(&covariant_derivative(a, k, &f[m][i]).scaled(&ExactScalar::j2()))
            .scaled(&third)
    });
    threeform_from_components(a.n, &cov, &f) == curvature_calculus(a)
}

/// Γ^l_{ik} and its first two derivative jets at one point.
/// Flat storage, row-major in `[l][i][k]`, `[l][i][k][m]` (∂_m) and `[l][i][k][m][p]` (∂_m∂_p).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectionJet {
    pub n: usize,
    pub gamma: Vec<ExactScalar>,
    pub d_gamma: Vec<ExactScalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dd_gamma: Option<Vec<ExactScalar>>,
}

fn flat(n: usize, idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &x| acc * n + x)
}

fn multi_indices(n: usize, len: usize) -> Vec<Vec<usize>> {
    (0..n.pow(len as u32))
        .map(|mut x| {
            let mut v = vec![0; len];
            for slot in v.iter_mut().rev() {
                *slot = x % n;
                x /= n;
            }
            v
        })
        .collect()
}

impl ConnectionJet {
    pub fn new(n: usize, gamma: Vec<ExactScalar>, d_gamma: Vec<ExactScalar>, dd_gamma: Option<Vec<ExactScalar>>) -> Result<Self> {
        let jet = Self { n, gamma, d_gamma, dd_gamma };
        jet.validate()?;
        Ok(jet)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if self.gamma.len() != n.pow(3) || self.d_gamma.len() != n.pow(4) {
            return Err(ChessError::DimensionMismatch("jet tensor sizes do not match n".into()));
        }
        if let Some(dd) = &self.dd_gamma {
            if dd.len() != n.pow(5) {
                return Err(ChessError::DimensionMismatch("second jet has the wrong size".into()));
            }
            for ix in multi_indices(n, 5) {
                let sw = [ix[0], ix[1], ix[2], ix[4], ix[3]];
                if dd[flat(n, &ix)] != dd[flat(n, &sw)] {
                    return Err(ChessError::Unsupported("second derivatives are not symmetric".into()));
                }
            }
        }
        Ok(())
    }

    pub fn zero(n: usize) -> Self {
        let z = ExactScalar::zero;
        Self { n, gamma: vec![z(); n.pow(3)], d_gamma: vec![z(); n.pow(4)], dd_gamma: Some(vec![z(); n.pow(5)]) }
    }

    /// Random rational jet; `torsion_free` makes every order symmetric in (i, k).
    pub fn random(rng: &mut Prng, n: usize, torsion_free: bool) -> Self {
        let mut jet = Self::zero(n);
        for ix in multi_indices(n, 3) {
            if !torsion_free || ix[1] <= ix[2] {
                let v = small_rational(rng);
                jet.gamma[flat(n, &ix)] = v.clone();
                jet.gamma[flat(n, &[ix[0], ix[2], ix[1]])] = if torsion_free { v } else { small_rational(rng) };
            }
        }
        for ix in multi_indices(n, 4) {
            if !torsion_free || ix[1] <= ix[2] {
                let v = small_rational(rng);
                jet.d_gamma[flat(n, &ix)] = v.clone();
                let sw = [ix[0], ix[2], ix[1], ix[3]];
                if torsion_free {
                    jet.d_gamma[flat(n, &sw)] = v;
                } else if ix[1] != ix[2] {
                    jet.d_gamma[flat(n, &sw)] = small_rational(rng);
                }
            }
        }
        let dd = jet.dd_gamma.as_mut().unwrap();
        for ix in multi_indices(n, 5) {
            if ix[3] > ix[4] || (torsion_free && ix[1] > ix[2]) {
                continue;
            }
            let v = ExactScalar::from_int(rng.gen_range(-2..=2));
            for (a, b) in [(ix[1], ix[2]), (ix[2], ix[1])] {
                if !torsion_free && (a, b) != (ix[1], ix[2]) {
                    continue;
                }
                dd[flat(n, &[ix[0], a, b, ix[3], ix[4]])] = v.clone();
                dd[flat(n, &[ix[0], a, b, ix[4], ix[3]])] = v.clone();
            }
        }
        jet
    }

    pub fn g(&self, l: usize, i: usize, k: usize) -> &ExactScalar {
        &self.gamma[flat(self.n, &[l, i, k])]
    }

    pub fn dg(&self, l: usize, i: usize, k: usize, m: usize) -> &ExactScalar {
        &self.d_gamma[flat(self.n, &[l, i, k, m])]
    }

    /// Γ^l_{ik}(ξ) as polynomials: Taylor expansion through second order.
    pub fn field(&self, alg: &Arc<CoordinateAlgebra>) -> Vec<PolyFunction> {
        let n = self.n;
        let half = ExactScalar::from_ratio(1, 2);
        multi_indices(n, 3)
            .into_iter()
            .map(|ix| {
                let mut f = PolyFunction::constant(alg, self.gamma[flat(n, &ix)].clone());
                for m in 0..n {
                    f = f.add(&PolyFunction::var(alg, m).scale(self.dg(ix[0], ix[1], ix[2], m)));
                    if let Some(dd) = &self.dd_gamma {
                        for p in 0..n {
                            let c = &dd[flat(n, &[ix[0], ix[1], ix[2], m, p])] * &half;
                            f = f.add(&PolyFunction::var(alg, m).mul(&PolyFunction::var(alg, p)).scale(&c));
                        }
                    }
                }
                f
            })
            .collect()
    }
}

/// Polynomial-valued tensor with flat row-major storage.
type FieldTensor = Vec<PolyFunction>;

fn at_origin(t: &FieldTensor, n: usize) -> Vec<ExactScalar> {
    let origin = vec![ExactScalar::zero(); n];
    t.iter().map(|p| p.eval(&origin)).collect()
}

/// `C^l_{mik} = ∂_m Γ^l_{ik} + Γ^l_{mj} Γ^j_{ik}`, stored `[l][m][i][k]`.
fn second_covariant_field(n: usize, g: &FieldTensor) -> FieldTensor {
    multi_indices(n, 4)
        .into_iter()
        .map(|ix| {
            let (l, m, i, k) = (ix[0], ix[1], ix[2], ix[3]);
            (0..n).fold(g[flat(n, &[l, i, k])].partial(m), |acc, j| acc.add(&g[flat(n, &[l, m, j])].mul(&g[flat(n, &[j, i, k])])))
        })
        .collect()
}

/// `R^l_{mik} = C^l_{mik} − C^l_{imk}`, stored `[l][m][i][k]`.
fn riemann_field(n: usize, g: &FieldTensor) -> FieldTensor {
    let c = second_covariant_field(n, g);
    multi_indices(n, 4).into_iter().map(|ix| c[flat(n, &ix)].sub(&c[flat(n, &[ix[0], ix[2], ix[1], ix[3]])])).collect()
}

fn jet_field(jet: &ConnectionJet) -> (Arc<CoordinateAlgebra>, FieldTensor) {
    let alg = CoordinateAlgebra::commutative(jet.n);
    let f = jet.field(&alg);
    (alg, f)
}

/// `R^l_{mik} = ∂_m Γ^l_{ik} − ∂_i Γ^l_{mk} + Γ^l_{mj}Γ^j_{ik} − Γ^l_{ij}Γ^j_{mk}`, `[l][m][i][k]`.
pub fn riemann(jet: &ConnectionJet) -> Vec<ExactScalar> {
    let (_, g) = jet_field(jet);
    at_origin(&riemann_field(jet.n, &g), jet.n)
}

/// `P^l_{mik} = ∂_m Γ^l_{ik} + ∂_i Γ^l_{mk} + Γ^l_{mj}Γ^j_{ik} + Γ^l_{ij}Γ^j_{mk}`, `[l][m][i][k]`.
pub fn p_tensor(jet: &ConnectionJet) -> Vec<ExactScalar> {
    let n = jet.n;
    multi_indices(n, 4)
        .into_iter()
        .map(|ix| {
            let (l, m, i, k) = (ix[0], ix[1], ix[2], ix[3]);
            let mut v = jet.dg(l, i, k, m) + jet.dg(l, m, k, i);
            for j in 0..n {
                v += jet.g(l, m, j) * jet.g(j, i, k) + jet.g(l, i, j) * jet.g(j, m, k);
            }
            v
        })
        .collect()
}

fn require_second_order(jet: &ConnectionJet) -> Result<()> {
    if jet.dd_gamma.is_none() {
        return Err(ChessError::IncompleteJet("second derivatives of Γ are required".into()));
    }
    Ok(())
}

/// ∇_p R^l_{mik} (full covariant derivative), stored `[l][m][i][k][p]`; `covariant = false` keeps only
/// `∂_p R + Γ^l_{pq} R^q_{mik}`.
pub fn nabla_riemann(jet: &ConnectionJet, covariant: bool) -> Result<Vec<ExactScalar>> {
    require_second_order(jet)?;
    let n = jet.n;
    let (_, g) = jet_field(jet);
    let r = riemann_field(n, &g);
    let r0 = at_origin(&r, n);
    let rv = |ix: [usize; 4]| &r0[flat(n, &ix)];
    let origin = vec![ExactScalar::zero(); n];
    Ok(multi_indices(n, 5)
        .into_iter()
        .map(|ix| {
            let (l, m, i, k, p) = (ix[0], ix[1], ix[2], ix[3], ix[4]);
            let mut v = r[flat(n, &[l, m, i, k])].partial(p).eval(&origin);
            for q in 0..n {
                v += jet.g(l, p, q) * rv([q, m, i, k]);
                if covariant {
                    v -= jet.g(q, p, m) * rv([l, q, i, k]);
                    v -= jet.g(q, p, i) * rv([l, m, q, k]);
                    v -= jet.g(q, p, k) * rv([l, m, i, q]);
                }
            }
            v
        })
        .collect())
}

/// Whether `∇_p R^l_{mik} + ∇_m R^l_{ipk} + ∇_i R^l_{pmk}` vanishes.
pub fn bianchi_holds(jet: &ConnectionJet) -> Result<bool> {
    let n = jet.n;
    let d = nabla_riemann(jet, true)?;
    let at = |l, m, i, k, p| &d[flat(n, &[l, m, i, k, p])];
    Ok(multi_indices(n, 5).into_iter().all(|ix| {
        let (l, m, i, k, p) = (ix[0], ix[1], ix[2], ix[3], ix[4]);
        (at(l, m, i, k, p) + at(l, i, p, k, m) + at(l, p, m, k, i)).is_zero()
    }))
}

/// Jet of the same connection after `ξ^a = y^a + ½ c^a_{bc} y^b y^c` (first order only).
/// `c` is `[a][b][c]`, symmetric in the lower pair.
pub fn quadratic_coordinate_change(jet: &ConnectionJet, c: &[ExactScalar]) -> Result<ConnectionJet> {
    let n = jet.n;
    if c.len() != n.pow(3) {
        return Err(ChessError::DimensionMismatch("coordinate change tensor has the wrong size".into()));
    }
    let cc = |a, b, d| &c[flat(n, &[a, b, d])];
    let gamma = multi_indices(n, 3).into_iter().map(|ix| jet.g(ix[0], ix[1], ix[2]) + cc(ix[0], ix[1], ix[2])).collect();
    let d_gamma = multi_indices(n, 4)
        .into_iter()
        .map(|ix| {
            let (l, i, k, m) = (ix[0], ix[1], ix[2], ix[3]);
            let mut v = jet.dg(l, i, k, m).clone();
            for a in 0..n {
                v -= cc(l, a, m) * &(jet.g(a, i, k) + cc(a, i, k));
                v += jet.g(l, a, k) * cc(a, i, m) + jet.g(l, i, a) * cc(a, k, m);
            }
            v
        })
        .collect();
    ConnectionJet::new(n, gamma, d_gamma, None)
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorChange {
    pub riemann_invariant: bool,
    pub p_invariant: bool,
}

/// R and P before and after a quadratic change of coordinates whose Jacobian is 1 at the point.
pub fn tensor_change(jet: &ConnectionJet, c: &[ExactScalar]) -> Result<TensorChange> {
    let moved = quadratic_coordinate_change(jet, c)?;
    Ok(TensorChange { riemann_invariant: riemann(jet) == riemann(&moved), p_invariant: p_tensor(jet) == p_tensor(&moved) })
}

/// Coefficient vector over the frame e_l.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameCoeff(pub Vec<PolyFunction>);

impl FormCoeff for FrameCoeff {
    fn is_zero(&self) -> bool {
        self.0.iter().all(PolyFunction::is_zero)
    }
    fn plus(&self, o: &Self) -> Self {
        FrameCoeff(self.0.iter().zip(&o.0).map(|(a, b)| a.add(b)).collect())
    }
    fn scaled(&self, s: &ExactScalar) -> Self {
        FrameCoeff(self.0.iter().map(|p| p.scale(s)).collect())
    }
    fn partial(&self, i: usize) -> Self {
        FrameCoeff(self.0.iter().map(|p| p.partial(i)).collect())
    }
    fn conj(&self) -> Self {
        FrameCoeff(self.0.iter().map(PolyFunction::conj).collect())
    }
}

/// `∇(X^l e_l ω) = d(X^l ω) e_l + X^l Γ^p_{ql} e_p dξ^q ω`.
fn nabla_frame(n: usize, g: &FieldTensor, x: &FormElement<FrameCoeff>) -> FormElement<FrameCoeff> {
    let mut out = x.d();
    for (w, c) in x.terms() {
        for q in 0..n {
            let moved = FrameCoeff(
                (0..n)
                    .map(|p| (0..n).fold(PolyFunction::zero(c.0[0].algebra()), |acc, l| acc.add(&g[flat(n, &[p, q, l])].mul(&c.0[l]))))
                    .collect(),
            );
            let mut qw = vec![FormSym::D1(q as u8)];
            qw.extend_from_slice(w);
            out.add_word(&qw, moved);
        }
    }
    out
}

fn frame_at_origin(x: &FormElement<FrameCoeff>, n: usize) -> BTreeMap<FormWord, Vec<ExactScalar>> {
    let origin = vec![ExactScalar::zero(); n];
    x.terms()
        .iter()
        .map(|(w, c)| (w.clone(), c.0.iter().map(|p| p.eval(&origin)).collect::<Vec<_>>()))
        .filter(|(_, v)| v.iter().any(|s| !s.is_zero()))
        .collect()
}

fn constant_frame(alg: &Arc<CoordinateAlgebra>, v: Vec<ExactScalar>) -> FrameCoeff {
    FrameCoeff(v.into_iter().map(|s| PolyFunction::constant(alg, s)).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct Nabla3Report {
    /// The d²ξ dξ block of ∇³e_k is R^l_{mik} d²ξ^m dξ^i.
    pub d2_block_is_riemann: bool,
    /// ∇³e_k = R d²ξdξ + (∂_n C^l_{mik} + Γ^l_{np} C^p_{mik}) dξ^n dξ^m dξ^i.
    pub unsimplified_matches: bool,
    /// ∇³e_k = R d²ξdξ + ½[∇_n R_{imk} − ∇_m R_{ink}] dξ^n dξ^i dξ^m + (i√3/2)[∇_n R_{imk} + ∇_m R_{ink}] dξ^n dξ^i dξ^m.
    pub simplified_matches: bool,
    /// Same as `simplified_matches` with ∇R reduced to `∂R + ΓR` on the upper index.
    pub simplified_matches_partial: bool,
    /// ∇³e_k has no dξdξdξ part.
    pub triple_block_vanishes: bool,
}

/// Expands ∇(∇(∇ e_k)) in the exterior calculus and compares it with the coefficient formulas.
pub fn nabla3(jet: &ConnectionJet) -> Result<Nabla3Report> {
    require_second_order(jet)?;
    let n = jet.n;
    let (alg, g) = jet_field(jet);
    let r0 = riemann(jet);
    let c = second_covariant_field(n, &g);
    let origin = vec![ExactScalar::zero(); n];
    let dr_full = nabla_riemann(jet, true)?;
    let dr_part = nabla_riemann(jet, false)?;
    let half = ExactScalar::from_ratio(1, 2);
    let i_root3_half = ExactScalar::i() * ExactScalar::sqrt3() * &half;

    let mut report = Nabla3Report {
        d2_block_is_riemann: true,
        unsimplified_matches: true,
        simplified_matches: true,
        simplified_matches_partial: true,
        triple_block_vanishes: true,
    };
    for k in 0..n {
        let mut e_k = vec![ExactScalar::zero(); n];
        e_k[k] = ExactScalar::one();
        let start = FormElement::function(n, Side::D, constant_frame(&alg, e_k));
        let n1 = nabla_frame(n, &g, &start);
        let n3 = nabla_frame(n, &g, &nabla_frame(n, &g, &n1));
        let calc = frame_at_origin(&n3, n);

        let mut r_block = FormElement::zero(n, Side::D);
        for m in 0..n {
            for i in 0..n {
                let v = (0..n).map(|l| r0[flat(n, &[l, m, i, k])].clone()).collect();
                r_block.add_word(&[FormSym::D2(m as u8), FormSym::D1(i as u8)], constant_frame(&alg, v));
            }
        }
        let calc_d2: BTreeMap<_, _> = calc.iter().filter(|(w, _)| w.len() == 2).map(|(w, v)| (w.clone(), v.clone())).collect();
        report.d2_block_is_riemann &= calc_d2 == frame_at_origin(&r_block, n);
        report.triple_block_vanishes &= calc.keys().all(|w| w.len() != 3);

        let mut unsimplified = r_block.clone();
        let mut simplified = r_block.clone();
        let mut simplified_partial = r_block.clone();
        for ix in multi_indices(n, 3) {
            let (a, b, cc) = (ix[0], ix[1], ix[2]);
            let word = [FormSym::D1(a as u8), FormSym::D1(b as u8), FormSym::D1(cc as u8)];
            // Unsimplified: word (n, m, i) = (a, b, cc).
            let t = (0..n)
                .map(|l| {
                    let mut v = c[flat(n, &[l, b, cc, k])].partial(a).eval(&origin);
                    for p in 0..n {
                        v += jet.g(l, a, p) * c[flat(n, &[p, b, cc, k])].eval(&origin);
                    }
                    v
                })
                .collect();
            unsimplified.add_word(&word, constant_frame(&alg, t));
            // Simplified: word (n, i, m) = (a, b, cc).
            for (dr, target) in [(&dr_full, &mut simplified), (&dr_part, &mut simplified_partial)] {
                let v = (0..n)
                    .map(|l| {
                        let x = &dr[flat(n, &[l, b, cc, k, a])];
                        let y = &dr[flat(n, &[l, b, a, k, cc])];
                        &half * &(x - y) + &i_root3_half * &(x + y)
                    })
                    .collect();
                target.add_word(&word, constant_frame(&alg, v));
            }
        }
        report.unsimplified_matches &= calc == frame_at_origin(&unsimplified, n);
        report.simplified_matches &= calc == frame_at_origin(&simplified, n);
        report.simplified_matches_partial &= calc == frame_at_origin(&simplified_partial, n);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::prng;

    #[test]
    fn zero_potential() {
        let alg = CoordinateAlgebra::commutative(3);
        let a = GaugePotential::zero(&alg, 2);
        assert!(field_strength(&a).iter().flatten().all(FormCoeff::is_zero));
        assert!(curvature_calculus(&a).is_zero());
        assert!(covariant_identity_check(&a));
    }

    #[test]
    fn abelian_field_strength() {
        let alg = CoordinateAlgebra::commutative(2);
        let a1 = MatPoly::scalar(&alg, 1, &PolyFunction::var(&alg, 1));
        let a = GaugePotential::new(&alg, vec![a1, MatPoly::zero(&alg, 1)]).unwrap();
        let f = field_strength(&a);
        assert_eq!(f[0][1].get(0, 0), &PolyFunction::constant(&alg, ExactScalar::from_int(-1)));
        assert_eq!(f[1][0].get(0, 0), &PolyFunction::constant(&alg, ExactScalar::one()));
    }

    #[test]
    fn abelian_potentials_agree_everywhere() {
        let alg = CoordinateAlgebra::commutative(2);
        let mut rng = prng(4);
        for _ in 0..3 {
            let a = GaugePotential::random_abelian(&alg, &mut rng, 1, 3);
            let r = assemble_curvature_threeform(&a);
            assert!(r.displayed_agrees && r.ordered_agrees);
            assert!(covariant_identity_check(&a));
        }
    }

    #[test]
    fn nonabelian_needs_the_reordered_omega() {
        let alg = CoordinateAlgebra::commutative(3);
        let mut rng = prng(6);
        let a = GaugePotential::random_matrix(&alg, &mut rng, 2, 1);
        let r = assemble_curvature_threeform(&a);
        assert!(r.ordered_agrees);
        assert!(!r.displayed_agrees);
    }

    #[test]
    fn riemann_and_p_symmetries() {
        let mut rng = prng(8);
        let jet = ConnectionJet::random(&mut rng, 2, false);
        let (r, p) = (riemann(&jet), p_tensor(&jet));
        for ix in multi_indices(2, 4) {
            let sw = flat(2, &[ix[0], ix[2], ix[1], ix[3]]);
            assert_eq!(r[flat(2, &ix)], -&r[sw]);
            assert_eq!(p[flat(2, &ix)], p[sw]);
        }
        let z = ConnectionJet::zero(2);
        assert!(riemann(&z).iter().chain(p_tensor(&z).iter()).all(ExactScalar::is_zero));
    }

    #[test]
    fn bianchi_for_symmetric_connections() {
        let mut rng = prng(9);
        for n in [2, 3] {
            assert!(bianchi_holds(&ConnectionJet::random(&mut rng, n, true)).unwrap());
        }
    }

    #[test]
    fn p_is_not_a_tensor() {
        let mut rng = prng(10);
        let jet = ConnectionJet::random(&mut rng, 2, true);
        let mut c = vec![ExactScalar::zero(); 8];
        c[flat(2, &[0, 1, 1])] = ExactScalar::one();
        c[flat(2, &[1, 0, 1])] = ExactScalar::from_int(2);
        c[flat(2, &[1, 1, 0])] = ExactScalar::from_int(2);
        let t = tensor_change(&jet, &c).unwrap();
        assert!(t.riemann_invariant);
        assert!(!t.p_invariant);
    }

    #[test]
    fn nabla3_on_special_jets() {
        let flat_report = nabla3(&ConnectionJet::zero(2)).unwrap();
        assert!(flat_report.triple_block_vanishes && flat_report.simplified_matches);
        // Γ = 0 and ∂²Γ = 0 at the point make ∇R = 0 there.
        let mut rng = prng(12);
        let mut jet = ConnectionJet::zero(2);
        jet.d_gamma = (0..16).map(|_| small_rational(&mut rng)).collect();
        let r = nabla3(&jet).unwrap();
        assert!(r.d2_block_is_riemann && r.triple_block_vanishes && r.unsimplified_matches);
        assert!(nabla_riemann(&jet, true).unwrap().iter().all(ExactScalar::is_zero));
    }

    #[test]
    fn nabla3_random_jets() {
        let mut rng = prng(13);
        for n in [2, 3] {
            let r = nabla3(&ConnectionJet::random(&mut rng, n, true)).unwrap();
            assert!(r.d2_block_is_riemann && r.unsimplified_matches);
            assert!(!r.simplified_matches && !r.simplified_matches_partial);
        }
    }

    #[test]
    fn incomplete_jet_is_rejected() {
        let mut jet = ConnectionJet::zero(2);
        jet.dd_gamma = None;
        assert!(matches!(nabla3(&jet), Err(ChessError::IncompleteJet(_))));
    }
}
