"""Independent symbolic values frozen for the C++ tests.

Run: python3 tests/oracle/derive.py > tests/oracle/frozen.json
"""
import json
import itertools

import mpmath
import sympy as sp

mpmath.mp.dps = 40


def f(x):
    return float(sp.N(x, 30))


out = {}

# Two-pole reduction lambda = p + u1/(p - u2).
u1, u2, p = sp.symbols("u1 u2 p", real=True)
lam = p + u1 / (p - u2)
crit = sp.solve(sp.diff(lam, p), p)
pt = {u1: sp.Rational(3, 10), u2: sp.Rational(1, 5)}
v = sorted(f(c.subs(pt)) for c in crit)
r = sorted(f(lam.subs(p, c).subs(pt)) for c in crit)
w = sp.symbols("w")
ser = sp.series(lam.subs(p, 1 / w) - 1 / w, w, 0, 6).removeO()
moments = [sp.simplify(ser.coeff(w, k + 1)) for k in range(4)]
out["two_pole"] = {
    "u": [0.3, 0.2],
    "critical_points": v,
    "riemann_invariants": r,
    "lambda_pp": [f(sp.diff(lam, p, 2).subs(p, c).subs(pt)) for c in sorted(crit, key=lambda c: f(c.subs(pt)))],
    "moments": [f(m.subs(pt)) for m in moments],
}

# Residue metric of the two-pole reduction in Riemann invariants: g = diag(dA0/dr).
rp, rm = sp.symbols("rp rm", real=True)
A0 = ((rp - rm) / 4) ** 2
coords = [rm, rp]  # ascending critical points: v-, v+
g = sp.diag(sp.diff(A0, rm), sp.diff(A0, rp))
ginv = g.inv()
n = 2
Gam = [[[sp.simplify(sum(ginv[i, l] * (sp.diff(g[l, j], coords[k]) + sp.diff(g[l, k], coords[j])
                                           - sp.diff(g[j, k], coords[l])) for l in range(n)) / 2)
         for k in range(n)] for j in range(n)] for i in range(n)]
rpt = {rp: r[1], rm: r[0]}
out["two_pole"]["chart_point"] = [r[0], r[1]]
out["two_pole"]["metric_diagonal"] = [f(g[0, 0].subs(rpt)), f(g[1, 1].subs(rpt))]
out["two_pole"]["christoffel"] = [[[f(Gam[i][j][k].subs(rpt)) for k in range(n)] for j in range(n)] for i in range(n)]

# Logarithmic reduction lambda = p + ln(p-u1) + ln(p-u2) - 2 ln(p-u3) at u = (-1, 0, 1).
eps = [1, 1, -2]
uu = [-1, 0, 1]
lp = lambda q: 1 + sum(e / (q - a) for e, a in zip(eps, uu))
num = sp.Poly(sp.together(lp(p)).as_numer_denom()[0], p)
roots = sorted(f(x) for x in sp.Poly(num, p).nroots(n=40) if abs(sp.im(x)) < 1e-20)
lam_log = lambda q: q + sum(e * sp.log(sp.Abs(q - a)) for e, a in zip(eps, uu))
lpp = lambda q: -sum(e / (q - a) ** 2 for e, a in zip(eps, uu))
U = sp.symbols("U1:4", real=True)
lsym = p + sum(e * sp.log(p - a) for e, a in zip(eps, U))
ser = sp.series(lsym.subs(p, 1 / w) - 1 / w, w, 0, 5).removeO()
ser = sp.expand(sp.expand_log(ser, force=True))
mom = [sp.simplify(ser.coeff(w, k + 1)) for k in range(4)]
out["log3"] = {
    "u": uu,
    "critical_points": roots,
    "riemann_invariants": [f(lam_log(sp.Float(x, 40))) for x in roots],
    "lambda_pp": [f(lpp(sp.Float(x, 40))) for x in roots],
    "moments": [f(m.subs(dict(zip(U, uu)))) for m in mom],
    "moment_expressions": [str(m) for m in mom],
}

# Broken Hertling-Manin fixture: nine-term vector form on basis fields and a Haantjes value.
x1, x2, x3 = X = sp.symbols("u1 u2 u3", real=True)
e_ = sp.Rational(1, 2)
C = [[[sp.Integer(0)] * 3 for _ in range(3)] for _ in range(3)]


def put(i, j, k, val):
    C[i - 1][j - 1][k - 1] = val
    C[i - 1][k - 1][j - 1] = val


put(1, 1, 1, 1)
put(2, 1, 2, 1)
put(1, 2, 2, x2)
put(2, 1, 3, -e_ * x1)
put(1, 2, 3, -e_ * x1 * x2)
put(3, 3, 3, 1)
put(2, 3, 3, e_ * x1)
put(1, 3, 3, e_ ** 2 * x1 ** 2 * x2)


def prod(a, b):
    return [sum(C[i][j][k] * a[j] * b[k] for j in range(3) for k in range(3)) for i in range(3)]


def br(a, b):
    return [sum(a[m] * sp.diff(b[i], X[m]) - b[m] * sp.diff(a[i], X[m]) for m in range(3)) for i in range(3)]


def add(*vs):
    return [sum(c) for c in zip(*vs)]


def neg(a):
    return [-c for c in a]


def hm(Xf, Y, Z, W):
    terms = [
        br(prod(Xf, Y), prod(Z, W)),
        neg(prod(br(prod(Xf, Y), Z), W)),
        neg(prod(br(prod(Xf, Y), W), Z)),
        neg(prod(Xf, br(Y, prod(Z, W)))),
        prod(Xf, prod(br(Y, Z), W)),
        prod(Xf, prod(br(Y, W), Z)),
        neg(prod(Y, br(Xf, prod(Z, W)))),
        prod(Y, prod(br(Xf, Z), W)),
        prod(Y, prod(br(Xf, W), Z)),
    ]
    return add(*terms)


basis = [[sp.Integer(1 if a == b else 0) for a in range(3)] for b in range(3)]
wit = {x1: sp.Rational(3, 10), x2: sp.Rational(23, 20), x3: 0}
worst = 0.0
for a, b, c, d in itertools.product(range(3), repeat=4):
    for comp in hm(basis[a], basis[b], basis[c], basis[d]):
        worst = max(worst, abs(f(comp.subs(wit))))
assoc = 0.0
for a, b, c in itertools.product(range(3), repeat=3):
    lhs = prod(prod(basis[a], basis[b]), basis[c])
    rhs = prod(basis[a], prod(basis[b], basis[c]))
    assoc = max(assoc, max(abs(f(sp.simplify(l - r_).subs(wit))) for l, r_ in zip(lhs, rhs)))

Zc = [sp.Rational(3, 10), sp.Rational(-7, 10), sp.Rational(1, 2)]
V = sp.Matrix(3, 3, lambda i, j: sum(C[i][j][k] * Zc[k] for k in range(3)))


def apply(Mx, a):
    return list(Mx * sp.Matrix(a))


def nij(Mx, a, b):
    Va, Vb = apply(Mx, a), apply(Mx, b)
    return add(br(Va, Vb), neg(apply(Mx, br(Va, b))), neg(apply(Mx, br(a, Vb))), apply(Mx * Mx, br(a, b)))


def haantjes(Mx, a, b):
    Va, Vb = apply(Mx, a), apply(Mx, b)
    return add(nij(Mx, Va, Vb), neg(apply(Mx, nij(Mx, Va, b))), neg(apply(Mx, nij(Mx, a, Vb))),
               apply(Mx * Mx, nij(Mx, a, b)))


hmax = 0.0
for a, b in itertools.product(range(3), repeat=2):
    for comp in haantjes(V, basis[a], basis[b]):
        hmax = max(hmax, abs(f(comp.subs(wit))))
out["broken_hm"] = {
    "witness": [0.3, 1.15, 0.0],
    "hertling_manin_max": worst,
    "associativity_max": assoc,
    "haantjes_z": [0.3, -0.7, 0.5],
    "haantjes_max": hmax,
}

# Two-sphere metric diag(1, sin^2 t): Gaussian curvature 1.
th, ph = sp.symbols("th ph", real=True)
out["sphere"] = {"point": [0.7, 0.3], "r_1212": f(sp.sin(sp.Rational(7, 10)) ** 2)}

print(json.dumps(out, indent=2, sort_keys=True))
