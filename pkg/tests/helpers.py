"""Independent oracles for the test suite.

Nothing here calls the package's algorithms; sequences are rebuilt with
sympy or plain Fraction arithmetic so a shared bug cannot cancel out.
"""
from __future__ import annotations

import random
from fractions import Fraction

import sympy as sp

from dops.core import RecCoeffs, random_coeffs
from dops.poly import Poly

x, t = sp.symbols("x t")


def instance(d: int, seed: int, horizon: int = 40) -> RecCoeffs:
    return random_coeffs(d, horizon, random.Random(seed))


def to_sympy(p: Poly) -> sp.Expr:
    return sp.expand(sum(sp.Rational(c.numerator, c.denominator) * x ** k for k, c in enumerate(p.coeffs)))


def from_sympy(e) -> Poly:
    coeffs = sp.Poly(sp.expand(e), x).all_coeffs()[::-1]
    return Poly([Fraction(int(sp.fraction(c)[0]), int(sp.fraction(c)[1])) for c in coeffs])


def naive_sequence(c: RecCoeffs, N: int, r: int = 0) -> list:
    """P^{(r)}_0..P^{(r)}_N straight from the recurrence, in sympy."""
    d = c.d

    def b(n):
        return sp.Rational(str(c.beta[n + r]))

    def g(nu, L):
        return sp.Rational(str(c.gamma[nu][L + r - 1]))

    P = [sp.Integer(1)]
    for n in range(N):
        nxt = (x - b(n)) * P[n]
        for j in range(1, d + 1):
            if n - j >= 0:
                nxt -= g(d - j, n + 1 - j) * P[n - j]
        P.append(sp.expand(nxt))
    return P


def sympy_det(rows) -> sp.Expr:
    return sp.expand(sp.Matrix([[to_sympy(e) if isinstance(e, Poly) else e for e in row] for row in rows]).det())


def humbert_sequence(d: int, alpha, N: int) -> list:
    """Monic coefficients of t^n in (1 - x t + t^{d+1})^(-alpha)."""
    a = sp.Rational(str(alpha))
    ser = sp.series((1 - x * t + t ** (d + 1)) ** (-a), t, 0, N + 1).removeO()
    out = []
    for n in range(N + 1):
        cn = sp.expand(ser.coeff(t, n))
        out.append(sp.expand(cn / sp.Poly(cn, x).LC()))
    return out


def exponential_sequence(a, b: list, N: int) -> list:
    """n! [t^n] exp(x t/(1 - a t) + sum_k b_k t^k/k!), b = [b_1, b_2, ...]."""
    aa = sp.Rational(str(a))
    f = x * t / (1 - aa * t) + sum(sp.Rational(str(bk)) * t ** k / sp.factorial(k) for k, bk in enumerate(b, start=1))
    ser = sp.series(sp.exp(f), t, 0, N + 1).removeO()
    return [sp.expand(ser.coeff(t, n) * sp.factorial(n)) for n in range(N + 1)]


def q_derivative(e, q) -> sp.Expr:
    qq = sp.Rational(str(q))
    return sp.expand(sp.cancel((e.subs(x, qq * x) - e) / ((qq - 1) * x)))


def forward_difference(e, w) -> sp.Expr:
    ww = sp.Rational(str(w))
    return sp.expand((e.subs(x, x + ww) - e) / ww)


def all_minors_nonnegative(M) -> bool:
    """Brute-force sympy check of total nonnegativity."""
    from itertools import combinations

    A = sp.Matrix([[sp.Rational(str(v)) for v in row] for row in M])
    n = A.rows
    for k in range(1, n + 1):
        for rs in combinations(range(n), k):
            for cs in combinations(range(n), k):
                if A.extract(list(rs), list(cs)).det() < 0:
                    return False
    return True


def banded_matrix(rng: random.Random, n: int = 6) -> list:
    """Mix of bidiagonal products (TN), perturbed products and random bands."""
    d = rng.randint(1, 3)
    kind = rng.randrange(3)
    J = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        J[i][i] = Fraction(rng.randint(1, 6), rng.randint(1, 3))
        if i + 1 < n:
            J[i][i + 1] = Fraction(1)
    for _ in range(d):
        L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for i in range(1, n):
            L[i][i - 1] = Fraction(rng.randint(0, 5), rng.randint(1, 3))
        J = [[sum(L[i][k] * J[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    if kind == 1:
        i = rng.randrange(n)
        j = rng.randrange(max(0, i - d), min(n, i + 2))
        J[i][j] += Fraction(rng.randint(-6, 6), 2)
    elif kind == 2:
        for i in range(n):
            for j in range(max(0, i - d), min(n, i + 2)):
                J[i][j] = Fraction(1) if j == i + 1 else Fraction(rng.randint(-3, 9), 2)
    return J
