"""Independent sympy oracle for the frozen regression values.

Recomputes a handful of quantities from scratch (no Rust code involved) and writes them to
crates/chessboard/tests/data/oracle.json. Complex values are stored as [re, im] floats.

    python3 python/oracle.py            # rewrite the fixture
    python3 python/oracle.py --check    # compare against the committed fixture
"""

import argparse
import itertools
import json
import sys
from pathlib import Path

import sympy as sp

ROOT = Path(__file__).resolve().parent.parent
FIXTURE = ROOT / "crates" / "chessboard" / "tests" / "data" / "oracle.json"

J = sp.Rational(-1, 2) + sp.sqrt(3) * sp.I / 2
J2 = sp.expand(J**2)


def c(v):
    v = complex(sp.N(sp.expand(v), 30))
    return [round(v.real, 15) + 0.0, round(v.imag, 15) + 0.0]


# Cubic matrices: dicts over 0-based index triples.


def cube(n, f):
    return {t: f(*t) for t in itertools.product(range(n), repeat=3)}


def star(a, b, cc, n):
    out = {}
    for i, k, l in itertools.product(range(n), repeat=3):
        out[(i, k, l)] = sp.expand(
            sum(a[(p, i, q)] * b[(q, k, r)] * cc[(r, l, p)] for p, q, r in itertools.product(range(n), repeat=3))
        )
    return out


def j_bracket(a, b, cc, n):
    x, y, z = star(a, b, cc, n), star(b, cc, a, n), star(cc, a, b, n)
    return {t: sp.expand(x[t] + J * y[t] + J2 * z[t]) for t in x}


def orbit_matrix(n, lead, factor):
    m = cube(n, lambda *_: sp.Integer(0))
    t = lead
    v = sp.Integer(1)
    for _ in range(3):
        m[t] = v
        v = sp.expand(v * factor)
        t = (t[1], t[2], t[0])
    return m


def proportional(x, y):
    ratio = None
    for t in x:
        if y[t] == 0:
            if sp.simplify(x[t]) != 0:
                return None
            continue
        r = sp.nsimplify(sp.simplify(x[t] / y[t]))
        if ratio is None:
            ratio = r
        elif sp.simplify(ratio - r) != 0:
            return None
    return ratio


def rho_constants():
    r1 = orbit_matrix(2, (0, 0, 1), J)
    r2 = orbit_matrix(2, (0, 1, 1), J)
    c12 = proportional(j_bracket(r1, r2, r1, 2), r2)
    c21 = proportional(j_bracket(r2, r1, r2, 2), r1)
    s = star(r1, r1, r2, 2)
    return {
        "c12": c(c12),
        "c21": c(c21),
        "star_r1_r1_r2": {"".join(str(i + 1) for i in t): c(v) for t, v in sorted(s.items())},
    }


def graded_jacobi():
    def unit(r, col):
        m = sp.zeros(3)
        m[r, col] = 1
        return m, (col - r) % 3

    def comm(x, y):
        (a, ga), (b, gb) = x, y
        return (a * b - J ** (ga * gb) * b * a).applyfunc(sp.expand), (ga + gb) % 3

    x, y, z = unit(0, 1), unit(1, 2), unit(2, 0)
    d = comm(comm(x, y), z)[0] + comm(comm(y, z), x)[0] + comm(comm(z, x), y)[0]
    return {"triple": ["E12", "E23", "E31"], "diagonal": [c(d[i, i]) for i in range(3)]}


def pure_gauge_entries():
    # U = diag(2, 3, 5); dB = ηB − Bη for grade-0 B; U⁻¹dU.
    eta = sp.Matrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    u = sp.diag(2, 3, 5)
    a = u.inv() * (eta * u - u * eta)
    return {"u": [2, 3, 5], "entries_12_23_31": [str(a[0, 1]), str(a[1, 2]), str(a[2, 0])]}


def flat_solutions():
    roots = [sp.Integer(1), J, J2]
    sols = set()
    for p in itertools.product(roots, repeat=3):
        if sp.simplify(sp.expand(p[0] * p[1] * p[2]) - 1) == 0:
            sols.add(tuple(tuple(c(v - 1)) for v in p))
    return sorted([list(map(list, s)) for s in sols])


def ternary_clifford():
    def q(a, b):
        return sp.Matrix([[0, 1, 0], [0, 0, a], [b, 0, 0]])

    qs = [q(J, J2), q(J2, J), q(1, 1)]
    bm = sp.diag(1, J, J2)
    eta = {}
    for a, b, cc in itertools.product(range(3), repeat=3):
        s = (qs[a] * qs[b] * qs[cc] + qs[b] * qs[cc] * qs[a] + qs[cc] * qs[a] * qs[b]).applyfunc(sp.expand)
        eta[f"{a + 1}{b + 1}{cc + 1}"] = c(s[0, 0] / 3)
    x, y, z, m = sp.symbols("x y z m")
    op = qs[0] * x + qs[1] * y + qs[2] * z + bm * m
    cube3 = (op * op * op).applyfunc(sp.expand)
    poly = sp.Poly(cube3[0, 0], x, y, z, m)
    return {
        "eta_cyclic_symmetrization": eta,
        "mixed_coefficient": c(poly.coeff_monomial(x * y * z)),
        "pure_cube_coefficients": [c(poly.coeff_monomial(v**3)) for v in (x, y, z, m)],
    }


def pauli_bracket():
    s1 = sp.Matrix([[0, 1], [1, 0]])
    s2 = sp.Matrix([[0, -sp.I], [sp.I, 0]])
    b = (s1 * s2 * s1 + J * s2 * s1 * s1 + J2 * s1 * s1 * s2).applyfunc(sp.expand)
    return {"sigma1_sigma2_sigma1": [[c(b[r, k]) for k in range(2)] for r in range(2)]}


def dispersion():
    pts = [((0.3, -0.2, 0.5), 1.0), ((1.0, 1.0, 1.0), 1.0), ((-2.0, 0.5, 1.5), 0.7), ((0.0, 0.0, 0.0), -1.3)]
    out = []
    for k, m in pts:
        kx, ky, kz = map(sp.nsimplify, k)
        mm = sp.nsimplify(m)
        rhs = kx**3 + ky**3 + kz**3 - 3 * kx * ky * kz + mm**3
        w = sp.real_root(rhs, 3)
        out.append({"k": list(k), "m": m, "omega": float(sp.N(w, 30))})
    return out


def build():
    return {
        "rho": rho_constants(),
        "graded_jacobi": graded_jacobi(),
        "pure_gauge": pure_gauge_entries(),
        "flat_solutions": flat_solutions(),
        "clifford": ternary_clifford(),
        "pauli": pauli_bracket(),
        "dispersion": dispersion(),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args()
    data = build()
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if args.check:
        if FIXTURE.read_text() != text:
            sys.exit("oracle fixture is stale")
        print("oracle fixture matches")
        return
    FIXTURE.parent.mkdir(parents=True, exist_ok=True)
    FIXTURE.write_text(text)
    print(f"wrote {FIXTURE}")


if __name__ == "__main__":
    main()
