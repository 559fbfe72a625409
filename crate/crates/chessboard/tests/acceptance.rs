//! The fifteen acceptance criteria, one line each.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the table on success.

mod common;

use std::time::{Duration, Instant};

use chessboard::cubic::{self, Law};
use chessboard::enveloping::{self, SearchConfig, SquareMatrix};
use chessboard::exterior::{self, CoordinateAlgebra, FormElement, Side};
use chessboard::geometry::{self, ConnectionJet, GaugePotential};
use chessboard::graded::{self, GradedMatrix};
use chessboard::grassmann::{self, GrassmannAlgebra};
use chessboard::sampling::{nonzero_scalar, prng, small_rational, small_scalar, Prng};
use chessboard::verify::{self, random_cubic, random_square, Suite, DEFAULT_SEED};
use chessboard::{automorphism, dirac, ExactScalar};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let t = Instant::now();
    let mut o = f();
    let elapsed = t.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            o.pass = false;
            o.detail = format!("{}; over the {:?} budget", o.detail, limit);
        }
    }
    (o, elapsed)
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn scalar_laws(rng: &mut Prng) -> Outcome {
    let laws = verify::scalar_laws();
    let bad = verify::field_axioms(rng, 1000);
    outcome(laws && bad.is_none(), format!("1+j+j²=0, j³=1, conj(j)=j²: {laws}; field axioms on 1000 samples: {}", bad.is_none()))
}

fn ternary_laws() -> Outcome {
    let cov = verify::star_cyclic_covariance(2);
    let osl = verify::oslash_from_star(2);
    let star_w = cubic::non_associativity_witness(2, Law::Star).map(|w| w.is_some()).unwrap_or(false);
    let osl_w = cubic::non_associativity_witness(2, Law::Oslash).map(|w| w.is_some()).unwrap_or(false);
    outcome(
        cov && osl && star_w && osl_w,
        format!("star covariance {cov}, oslash = star(J·, ·, J²·) {osl}, witnesses star {star_w} oslash {osl_w} (all 512 unit triples)"),
    )
}

fn tables() -> Outcome {
    let n2 = cubic::mult_table(2, Law::Star).map(|t| t.rows.len()).unwrap_or(0);
    let a = cubic::mult_table(3, Law::Star).and_then(|t| t.to_csv());
    let b = cubic::mult_table(3, Law::Star).and_then(|t| t.to_csv());
    let n3 = a.as_ref().map(|s| s.lines().count() - 1).unwrap_or(0);
    let same = matches!((&a, &b), (Ok(x), Ok(y)) if x == y);
    outcome(n2 == 512 && n3 == 19_683 && same, format!("n=2 rows {n2}, n=3 rows {n3}, byte-identical rerun {same}"))
}

fn bracket_algebra(rng: &mut Prng) -> Outcome {
    let self_zero = (0..200).all(|_| {
        let a = random_cubic(rng, 2);
        cubic::j_bracket(&a, &a, &a).unwrap().is_zero()
    }) && (0..20).all(|_| {
        let a = random_cubic(rng, 3);
        cubic::j_bracket(&a, &a, &a).unwrap().is_zero()
    });
    let [r1, r2] = cubic::rho_basis();
    let c = cubic::bracket_constant(&r1, &r2);
    let oracle = common::oracle();
    let matches_oracle = c.as_ref().is_some_and(|c| common::close_to(c, &oracle["rho"]["c12"]));
    let [n1, n2] = cubic::normalized_rho_basis();
    let normalized = cubic::bracket_constant(&n1, &n2) == Some(ExactScalar::from_int(-1));
    outcome(
        self_zero && matches_oracle && normalized,
        format!(
            "{{a,a,a}}=0 {self_zero}; c = {} (oracle {matches_oracle}); normalized c = -1 {normalized}",
            c.map(|c| c.to_string()).unwrap_or_else(|| "not scalar".into())
        ),
    )
}

fn enveloping_repr(rng: &mut Prng) -> Outcome {
    let [s1, s2, _] = enveloping::pauli();
    let pauli = enveloping::j_commutator(&s1, &s2, &s1).unwrap() == s2.scale(&ExactScalar::from_int(-2));
    let id = SquareMatrix::identity(2);
    let unit_mid = (0..100).all(|_| {
        let (a, c) = (random_square(rng, 2), random_square(rng, 2));
        enveloping::j_commutator(&a, &id, &c).unwrap() == a.mul(&c).unwrap().sub(&c.mul(&a).unwrap()).unwrap()
    });
    let traces = (0..1000).all(|_| {
        let (a, b, c) = (random_square(rng, 2), random_square(rng, 2), random_square(rng, 2));
        enveloping::j_commutator(&a, &b, &c).unwrap().trace().is_zero()
    });
    outcome(pauli && unit_mid && traces, format!("-2σ² {pauli}; [A,1,C]=AC-CA {unit_mid}; traceless on 1000 triples {traces}"))
}

fn double_brackets() -> Outcome {
    let classes = enveloping::enumerate_double_brackets().classes.len();
    let ternary = enveloping::double_bracket_identity_search(&SearchConfig::ternary(2, DEFAULT_SEED));
    let binary = enveloping::double_bracket_identity_search(&SearchConfig::binary(2, DEFAULT_SEED));
    let (null, stable) = ternary.as_ref().map(|c| (c.nullity, c.stable())).unwrap_or((usize::MAX, false));
    let jacobi = binary.as_ref().map(|c| c.nullity).unwrap_or(0);
    outcome(
        classes == 40 && null == 0 && stable && jacobi >= 1,
        format!("{classes} classes; null space dim {null} (re-check stable {stable}); commutator sanity dim {jacobi}"),
    )
}

fn automorphisms(rng: &mut Prng) -> Outcome {
    let family = (0..10).all(|_| {
        let l = automorphism::lambda_from_angles(rng.gen_range(-1.5..1.5), rng.gen_range(-3.1..3.1));
        automorphism::check_lambda_equations_approx(&l, 1e-9)
    });
    let exact = [
        automorphism::rotation_form(ExactScalar::from_ratio(3, 5), ExactScalar::from_ratio(4, 5)),
        automorphism::rotation_form(ExactScalar::zero(), ExactScalar::one()),
        automorphism::reflection(),
    ];
    let id = SquareMatrix::identity(2);
    let exact_ok = exact.iter().all(|l| {
        automorphism::check_lambda_equations(l)
            && l.determinant().pow(2).is_one()
            && automorphism::preserves_brackets(l, &id).unwrap_or(false)
    });
    outcome(family && exact_ok, format!("10 (ψ,φ) samples to 1e-9 {family}; exact solutions det²=1 and bracket-preserving {exact_ok}"))
}

fn graded_matrices(rng: &mut Prng) -> Outcome {
    let basis = GradedMatrix::unit_basis();
    let nilpotent = basis.iter().filter(|a| a.grade() != 0).all(|a| basis.iter().all(|b| graded::derivation_power(a, b, 3).is_zero()));
    let witness = graded::jacobi_defect_witness([1, 1, 1]);
    let regression = GradedMatrix::identity().scale(&(ExactScalar::one() - ExactScalar::j2()));
    let witness_ok = witness.as_ref().is_some_and(|(_, d)| !d.is_zero() && *d == regression);
    let d3 = basis.iter().all(|b| graded::matrix_d_power(b, 3).is_zero());
    let flat = (0..50).all(|_| {
        let u = GradedMatrix::from_entries(0, [nonzero_scalar(rng), nonzero_scalar(rng), nonzero_scalar(rng)]).unwrap();
        graded::curvature_omega(&graded::pure_gauge(&u).unwrap()).unwrap().is_zero()
    });
    outcome(
        nilpotent && witness_ok && d3 && flat,
        format!("(Der_A)³=0 {nilpotent}; Jacobi witness (1-j²)I {witness_ok}; d³=0 {d3}; Ω(U⁻¹dU)=0 on 50 U {flat}"),
    )
}

fn flat_cubic(rng: &mut Prng) -> Outcome {
    let agree = (0..1000).all(|_| {
        let (e, f) = graded::flat_forms(&small_scalar(rng), &small_scalar(rng), &small_scalar(rng));
        e == f
    });
    let sols = graded::enumerate_symmetric_flat();
    let all = sols.iter().all(|[a, b, c]| graded::flat_condition(a, b, c));
    outcome(agree && sols.len() == 9 && all, format!("forms agree on 1000 triples {agree}; {} solutions satisfy {all}", sols.len()))
}

fn grassmann_checks() -> Outcome {
    let dims = [GrassmannAlgebra::theta_only(2).basis().len(), GrassmannAlgebra::theta_only(3).basis().len()];
    let quartic = [2u8, 3].iter().all(|&n| {
        let alg = GrassmannAlgebra::theta_only(n);
        let k = n as usize;
        (0..k.pow(4)).all(|x| {
            let w: Vec<_> = (0..4).map(|p| grassmann::Gen::theta(((x / k.pow(p)) % k) as u8 + 1)).collect();
            alg.reduce(&w).is_none()
        })
    });
    let allowed = [(1, 0), (0, 1), (2, 0), (0, 2), (1, 1), (3, 0), (0, 3)];
    let extended = [2u8, 3].iter().all(|&n| {
        let b = GrassmannAlgebra::with_conjugates(n).basis();
        let shapes_ok = b.iter().all(|w| {
            let bars = w.iter().filter(|g| g.bar).count();
            allowed.contains(&(w.len() - bars, bars))
        });
        shapes_ok && b.len() as u64 == grassmann::dimension(n as u64, true)
    });
    let c = grassmann::derivation_ternary_closure();
    let closure = c.first_identity && c.second_identity;
    outcome(
        dims == [8, 20] && quartic && extended && closure,
        format!("dims {dims:?}; quartic words vanish {quartic}; extended basis = listed products {extended}; ∂ closure {closure}"),
    )
}

fn exterior_calculus(rng: &mut Prng) -> Outcome {
    let flat = verify::d_cubed_on_polynomials(&CoordinateAlgebra::commutative(3), rng, 100);
    let eps = verify::d_cubed_on_polynomials(&verify::epsilon_sample(), rng, 100);
    let d2 = verify::d2_oneform_structure(rng, 20);
    let delta = {
        let alg = CoordinateAlgebra::commutative(3);
        (0..20).all(|_| FormElement::function(3, Side::Delta, exterior::random_poly(&alg, rng, 4, 5)).delta().delta().delta().is_zero())
    };
    outcome(flat && eps && d2 && delta, format!("d³f=0 ε=0 {flat}, ε≠0 {eps}; d²(ω_k dξ^k) structure on 20 forms {d2}; δ³=0 {delta}"))
}

fn geometry_dual_path(rng: &mut Prng) -> Outcome {
    let alg = CoordinateAlgebra::commutative(3);
    let mut potentials: Vec<(bool, GaugePotential)> = (0..10).map(|_| (true, GaugePotential::random_abelian(&alg, rng, 1, 2))).collect();
    potentials.extend((0..10).map(|_| (false, GaugePotential::random_matrix(&alg, rng, 2, 1))));
    let mut displayed = [0, 0];
    let mut ordered = 0;
    let mut covariant = [0, 0];
    for (abelian, a) in &potentials {
        let slot = usize::from(!abelian);
        let asm = geometry::assemble_curvature_threeform(a);
        displayed[slot] += usize::from(asm.displayed_agrees);
        ordered += usize::from(asm.ordered_agrees);
        covariant[slot] += usize::from(geometry::covariant_identity_check(a));
    }
    let mut unsimplified = 0;
    let mut simplified = 0;
    for _ in 0..10 {
        let jet = ConnectionJet::random(rng, 2, true);
        if let Ok(r) = geometry::nabla3(&jet) {
            unsimplified += usize::from(r.d2_block_is_riemann && r.unsimplified_matches);
            simplified += usize::from(r.d2_block_is_riemann && r.simplified_matches);
        }
    }
    let pass = displayed == [10, 10] && covariant == [10, 10] && simplified == 10;
    outcome(
        pass,
        format!(
            "displayed Ω agrees abelian {}/10 nonabelian {}/10 (ordered form {ordered}/20); covariant identity abelian {}/10 nonabelian {}/10; \
             ∇³ simplified display {simplified}/10 (unsimplified {unsimplified}/10)",
            displayed[0], displayed[1], covariant[0], covariant[1]
        ),
    )
}

fn ternary_clifford() -> Outcome {
    let s = dirac::symmetrization_check();
    let convention = s.winner.is_some();
    let id = SquareMatrix::identity(3);
    let cubes = dirac::q_matrices().iter().all(|q| q.mul(q).unwrap().mul(q).unwrap() == id);
    let cube = dirac::operator_cube();
    let diag = cube.off_diagonal_zero && cube.scalar.is_some();
    outcome(
        convention && cubes && s.eta_cyclic && diag && cube.matches_dispersion,
        format!(
            "scalar convention {:?}; (Qᵃ)³=1 {cubes}; η cyclic {}; cube diagonal-scalar {diag}; matches dispersion {} (mixed coefficient {})",
            s.winner,
            s.eta_cyclic,
            cube.matches_dispersion,
            cube.mixed_coefficient.map(|c| c.to_string()).unwrap_or_default()
        ),
    )
}

fn dispersion(rng: &mut Prng) -> Outcome {
    let identity = (0..1000).all(|_| {
        let k = [small_rational(rng), small_rational(rng), small_rational(rng)];
        let c = dirac::cylindrical_identity_check(&small_rational(rng), &k);
        c.cubic_equals_zeta_r2 && c.factorization
    });
    let (waves, worst) = verify::plane_wave_residuals(rng, 5);
    let b = dirac::boundedness_report();
    let failing: Vec<String> = b.minors.iter().filter(|m| !m.cancels).map(|m| format!("{:?}x{:?}", m.rows, m.cols)).collect();
    outcome(
        identity && waves && b.determinant && b.all_minors,
        format!(
            "ζr² identity on 1000 rational k {identity}; plane-wave residual {worst:.1e} {waves}; determinant exponents cancel {}; \
             2x2 minors cancel {} ({} of {} do not)",
            b.determinant,
            b.all_minors,
            failing.len(),
            b.minors.len()
        ),
    )
}

fn full_verify() -> Outcome {
    let r = verify::run(Suite::All, DEFAULT_SEED);
    let failed = r.checks.iter().filter(|c| !c.passed).count();
    outcome(r.passed, format!("{} checks, {failed} failed", r.checks.len()))
}

#[test]
fn acceptance_criteria() {
    let mut rng = prng(DEFAULT_SEED);
    let rows: Vec<(u32, &str, Outcome, Duration)> = vec![
        {
            let (o, t) = timed(secs(1), || scalar_laws(&mut rng));
            (1, "exact scalar laws", o, t)
        },
        {
            let (o, t) = timed(secs(5), ternary_laws);
            (2, "ternary law relations", o, t)
        },
        {
            let (o, t) = timed(secs(60), tables);
            (3, "chessboard tables", o, t)
        },
        {
            let (o, t) = timed(None, || bracket_algebra(&mut rng));
            (4, "j-bracket algebra", o, t)
        },
        {
            let (o, t) = timed(None, || enveloping_repr(&mut rng));
            (5, "enveloping representation", o, t)
        },
        {
            let (o, t) = timed(secs(60), double_brackets);
            (6, "double-bracket search", o, t)
        },
        {
            let (o, t) = timed(None, || automorphisms(&mut rng));
            (7, "automorphisms", o, t)
        },
        {
            let (o, t) = timed(None, || graded_matrices(&mut rng));
            (8, "Z3-graded matrices", o, t)
        },
        {
            let (o, t) = timed(None, || flat_cubic(&mut rng));
            (9, "flat-connection cubic", o, t)
        },
        {
            let (o, t) = timed(None, grassmann_checks);
            (10, "Grassmann algebra", o, t)
        },
        {
            let (o, t) = timed(None, || exterior_calculus(&mut rng));
            (11, "exterior calculus", o, t)
        },
        {
            let (o, t) = timed(None, || geometry_dual_path(&mut rng));
            (12, "geometry dual path", o, t)
        },
        {
            let (o, t) = timed(None, ternary_clifford);
            (13, "ternary Clifford", o, t)
        },
        {
            let (o, t) = timed(None, || dispersion(&mut rng));
            (14, "dispersion", o, t)
        },
        {
            let (o, t) = timed(secs(300), full_verify);
            (15, "verify --suite all", o, t)
        },
    ];
    for (id, title, o, t) in &rows {
        println!("{:>2} {} {:<26} {:>8.2}s  {}", id, if o.pass { "PASS" } else { "FAIL" }, title, t.as_secs_f64(), o.detail);
    }
    let failed: Vec<u32> = rows.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!("{} of {} criteria pass", rows.len() - failed.len(), rows.len());
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
