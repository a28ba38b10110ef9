"""Zeros through the truncated Jacobi matrix, total nonnegativity, interlacing.

Floating point enters only here.  Eigenvalues come from LAPACK (balancing and
Hessenberg QR via numpy), each root is then polished by Newton's method in
mpmath against the exact coefficients.  Exact Sturm counts serve as the
independent check on how many roots are real.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import mpmath
import numpy as np

from .core import RecCoeffs, associated, generate
from .darboux import jacobi_matrix
from .errors import NonRealRoots, QRNoConvergence
from .poly import Poly, count_real_roots, gcd_many, odd_multiplicity_real_roots, squarefree_factorization

TOL_REAL = 1e-9
TOL_GAP = 1e-8
TOL_NEWTON = 1e-12


@dataclass
class Root:
    re: float
    im: float
    refined: bool


@dataclass
class ZeroSet:
    roots: list
    tol_real: float = TOL_REAL
    tol_gap: float = TOL_GAP

    @property
    def radius(self) -> float:
        return max((abs(complex(r.re, r.im)) for r in self.roots), default=0.0)

    def all_real(self) -> bool:
        lim = self.tol_real * max(self.radius, 1.0)
        return all(abs(r.im) <= lim for r in self.roots)

    def reals(self) -> list[float]:
        if not self.all_real():
            raise NonRealRoots(f"imaginary parts exceed {self.tol_real} x spectral radius")
        return [r.re for r in self.roots]

    def min_gap(self) -> float:
        xs = self.reals()
        return min((b - a for a, b in zip(xs, xs[1:])), default=float("inf"))

    def simple(self) -> bool:
        xs = self.reals()
        spread = max(xs[-1] - xs[0], 1.0) if xs else 1.0
        return self.min_gap() > self.tol_gap * spread

    def to_rows(self) -> list[tuple[float, float, bool]]:
        return [(r.re, r.im, r.refined) for r in self.roots]


def _mp_poly(p: Poly):
    return [mpmath.mpf(c.numerator) / c.denominator for c in p.coeffs]


def _horner(cs, z):
    v = mpmath.mpf(0)
    dv = mpmath.mpf(0)
    scale = mpmath.mpf(0)
    az = abs(z)
    for c in reversed(cs):
        dv = dv * z + v
        v = v * z + c
        scale = scale * az + abs(c)
    return v, dv, scale


def refine(p: Poly, z: complex, steps: int = 60, tol: float = TOL_NEWTON, dps: int = 50) -> tuple[complex, bool]:
    """Newton iteration at ``dps`` digits; flag set when |p(z)| < tol * sum |c_k||z|^k."""
    with mpmath.workdps(dps):
        cs = _mp_poly(p)
        w = mpmath.mpc(z.real, z.imag) if z.imag else mpmath.mpf(z.real)
        eps = mpmath.mpf(10) ** (-(dps - 10))
        for _ in range(steps):
            v, dv, _ = _horner(cs, w)
            if not dv:
                break
            delta = v / dv
            w -= delta
            if abs(delta) <= eps * max(abs(w), 1):
                break
        v, _, scale = _horner(cs, w)
        ok = bool(abs(v) <= tol * scale)
        return complex(w), ok


def eigenvalues(M: Sequence[Sequence]) -> np.ndarray:
    A = np.array([[float(v) for v in row] for row in M], dtype=float)
    try:
        return np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise QRNoConvergence(str(exc)) from exc


def zeros_of(coeffs: RecCoeffs, n: int, tol_real: float = TOL_REAL, tol_gap: float = TOL_GAP,
             newton_tol: float = TOL_NEWTON) -> ZeroSet:
    """Zeros of P_n as eigenvalues of the leading n x n Jacobi block, Newton-polished."""
    if n < 1:
        raise ValueError("n must be at least 1")
    P = generate(coeffs, n)[n]
    ev = eigenvalues(jacobi_matrix(coeffs, n))
    radius = max(float(np.max(np.abs(ev))), 1.0)
    roots = []
    for z in ev:
        z = complex(z)
        w, ok = refine(P, z, tol=newton_tol)
        # a refined root that drifted to a different cluster is rejected
        if abs(w - z) > 1e-3 * radius:
            w, ok = z, False
        if abs(w.imag) <= tol_real * radius:
            w = complex(w.real, 0.0)
        roots.append(Root(w.real, w.imag, ok))
    roots.sort(key=lambda r: (r.re, r.im))
    return ZeroSet(roots, tol_real, tol_gap)


def interlacing_check(a: ZeroSet, b: ZeroSet) -> bool:
    """Strict alternation of two real spectra whose sizes differ by one."""
    xa, xb = a.reals(), b.reals()
    if abs(len(xa) - len(xb)) != 1:
        raise ValueError("spectra must differ in size by exactly one")
    big, small = (xa, xb) if len(xa) > len(xb) else (xb, xa)
    merged = []
    for i, s in enumerate(small):
        merged += [big[i], s]
    merged.append(big[-1])
    tol = max(a.tol_gap, b.tol_gap)
    spread = max(merged[-1] - merged[0], 1.0)
    return all(v - u > tol * spread for u, v in zip(merged, merged[1:]))


# ---------------------------------------------------------------- total nonnegativity

def _exact(m: Sequence[Sequence]) -> list[list[Fraction]]:
    return [[v if isinstance(v, Fraction) else Fraction(v) for v in row] for row in m]


def _det(A: list[list[Fraction]]) -> Fraction:
    A = [row[:] for row in A]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            if A[r][c]:
                f = A[r][c] / A[c][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det


@dataclass
class TNResult:
    ok: bool
    mode: str
    witness: object = field(default=None, repr=False)

    def __bool__(self) -> bool:
        return self.ok


def tn_oracle(m: Sequence[Sequence]) -> TNResult:
    """Every minor, exactly.  Feasible up to n = 8."""
    A = _exact(m)
    n = len(A)
    if n > 8:
        raise ValueError("exhaustive minors are limited to n <= 8")
    for k in range(1, n + 1):
        for rows in combinations(range(n), k):
            for cols in combinations(range(n), k):
                v = _det([[A[i][j] for j in cols] for i in rows])
                if v < 0:
                    return TNResult(False, "oracle", (rows, cols, v))
    return TNResult(True, "oracle")


def _neville(A: list[list[Fraction]]):
    """Neville elimination by rows without exchanges.

    Returns (elementary factors, U) with A = prod (I + m E_{i,i-1}) * U, or
    None when a zero above a nonzero entry would force an exchange.
    """
    A = [row[:] for row in A]
    n = len(A)
    factors = []
    for k in range(n - 1):
        prev = [row[:] for row in A]
        step = []
        for i in range(n - 1, k, -1):
            if not prev[i][k]:
                step.append((i, Fraction(0)))
                continue
            if not prev[i - 1][k]:
                return None
            f = prev[i][k] / prev[i - 1][k]
            step.append((i, f))
            A[i] = [x - f * y for x, y in zip(prev[i], prev[i - 1])]
        factors.append(step)
    return factors, A


def _elementary(n: int, i: int, m: Fraction, lower: bool = True) -> list[list[Fraction]]:
    E = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    if lower:
        E[i][i - 1] = m
    else:
        E[i - 1][i] = m
    return E


def _mul(a, b):
    return [[sum((x * y for x, y in zip(row, colm)), Fraction(0)) for colm in zip(*b)] for row in a]


def tn_constructive(m: Sequence[Sequence]) -> TNResult:
    """Factor A = F D G with F, G products of elementary bidiagonals, D diagonal.

    Rows of A are eliminated to an upper triangular U, then the rows of U^T
    to a diagonal.  Nonnegative multipliers and a nonnegative diagonal make
    every factor TN, so the product is TN.  For nonsingular A the converse
    holds as well; a singular TN matrix may need an exchange and is then
    reported as not certified.  The witness on success is the factor list,
    whose product is checked against A exactly.
    """
    A = _exact(m)
    n = len(A)
    first = _neville(A)
    if first is None:
        return TNResult(False, "constructive", "rows: elimination needs an exchange")
    fl, U = first
    second = _neville([list(c) for c in zip(*U)])
    if second is None:
        return TNResult(False, "constructive", "columns: elimination needs an exchange")
    gl, D = second
    diag = [D[i][i] for i in range(n)]
    if any(D[i][j] for i in range(n) for j in range(n) if i != j):
        return TNResult(False, "constructive", "columns: elimination left off-diagonal entries")
    mults = [v for step in fl + gl for _, v in step]
    if any(v < 0 for v in mults):
        return TNResult(False, "constructive", "negative multiplier")
    if any(v < 0 for v in diag):
        return TNResult(False, "constructive", "negative pivot")
    factors = []
    for step in fl:
        factors += [_elementary(n, i, v) for i, v in sorted(step, reverse=True)]
    factors.append([[diag[r] if r == c else Fraction(0) for c in range(n)] for r in range(n)])
    upper = []
    for step in gl:
        upper += [_elementary(n, i, v, lower=False) for i, v in sorted(step)]
    factors += upper[::-1]
    prod = factors[0]
    for f in factors[1:]:
        prod = _mul(prod, f)
    if prod != A:
        raise ArithmeticError("bidiagonal factors do not reproduce the matrix")
    return TNResult(True, "constructive", factors)


def tn_check(m: Sequence[Sequence], mode: str = "constructive") -> TNResult:
    if mode == "oracle":
        return tn_oracle(m)
    if mode == "constructive":
        return tn_constructive(m)
    raise ValueError(f"unknown mode {mode!r}")


def oscillation_check(m: Sequence[Sequence], mode: str = "constructive") -> bool:
    """TN, nonsingular, and positive entries next to the diagonal on both sides."""
    A = _exact(m)
    n = len(A)
    if any(A[i][i + 1] <= 0 or A[i + 1][i] <= 0 for i in range(n - 1)):
        return False
    if not _det(A):
        return False
    return bool(tn_check(A, mode))


# ---------------------------------------------------------------- exact structure

@dataclass
class ZeroStructure:
    n: int
    max_multiplicity: int
    common_gcd_degree: int
    real_roots: int
    nodal_roots: int
    nodal_bound: int | None

    def ok(self, d: int) -> bool:
        """Multiplicity at most d and no zero shared by P_n..P_{n+d}."""
        return self.max_multiplicity <= d and self.common_gcd_degree == 0

    @property
    def nodal_ok(self) -> bool | None:
        """Odd-multiplicity real roots against the nodal lower bound; None when no bound applies.

        Reported only: for d >= 2 positive gamma^0 does not force the bound.
        """
        if self.nodal_bound is None:
            return None
        return self.nodal_roots >= self.nodal_bound

    def to_json(self) -> dict:
        return {"n": self.n, "max_multiplicity": self.max_multiplicity,
                "common_gcd_degree": self.common_gcd_degree, "real_roots": self.real_roots,
                "nodal_roots": self.nodal_roots, "nodal_bound": self.nodal_bound, "nodal_ok": self.nodal_ok}


def zero_structure(coeffs: RecCoeffs, n: int) -> ZeroStructure:
    """Exact multiplicities of P_n, common zeros of P_n..P_{n+d}, and the nodal count.

    Nodal zeros are counted as distinct real roots of odd multiplicity.  The
    bound m+1 for P_{dm+q}, 1 <= q <= d, is attached when every stored
    gamma^0 is positive.
    """
    d = coeffs.d
    seq = generate(coeffs, n + d)
    P = seq[n]
    mult = max((k for _, k in squarefree_factorization(P)), default=0) if P.degree > 0 else 0
    g = gcd_many([seq[j] for j in range(n, n + d + 1)])
    bound = None
    if n >= 1 and all(v > 0 for v in coeffs.gamma[0]):
        bound = (n - 1) // d + 1
    return ZeroStructure(n, mult, g.degree, count_real_roots(P), odd_multiplicity_real_roots(P), bound)


def sturm_real_count(coeffs: RecCoeffs, n: int) -> int:
    """Distinct real zeros of P_n, exactly."""
    return count_real_roots(generate(coeffs, n)[n])


def spectra_for_interlacing(coeffs: RecCoeffs, n: int, kind: str = "prev", **tol):
    """(zeros of P_n, zeros of P_{n-1}) or (zeros of P_n, zeros of P^{(1)}_{n-1})."""
    a = zeros_of(coeffs, n, **tol)
    if kind == "prev":
        b = zeros_of(coeffs, n - 1, **tol)
    elif kind == "assoc1":
        b = zeros_of(associated(coeffs, 1), n - 1, **tol)
    else:
        raise ValueError(f"unknown interlacing partner {kind!r}")
    return a, b
