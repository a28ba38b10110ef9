"""Casorati determinants built from associated sequences and the identities they satisfy.

Conventions used throughout:

* ``col(s, k)`` is the column (P_k^{(s)}, ..., P_{k+d}^{(s)});
* ``row(k, r)`` is the row (P_k^{(r)}, P_{k-1}^{(r+1)}, ..., P_{k-d}^{(r+d)});
* delta(n, r) = det[col(r, n), col(r+1, n-1), ..., col(r+d, n-d)].

For every s the sequence y^{(s)}_N = P^{(s)}_{N-s} obeys the recurrence of
P_N itself, so all of these determinants are Casoratians of solutions of one
linear recurrence of order d+1.  Every verifier returns a residual polynomial
that is zero exactly when the identity holds.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .copoly import Perturbation, co_dilated, co_recursive, co_recursive_A
from .core import Family, RecCoeffs, generate
from .errors import BadOffsets, BadParameter, BadSelector, UnsupportedD
from .poly import ONE, X, ZERO, Poly, poly_det


def det(m: Sequence[Sequence]) -> Poly:
    """Exact determinant of a square matrix of Poly (or rational) entries."""
    return poly_det(m)


def _fam(coeffs) -> Family:
    return coeffs if isinstance(coeffs, Family) else Family(coeffs)


def _first_nonzero(*residuals: Poly) -> Poly:
    for r in residuals:
        if r:
            return r
    return ZERO


def _gprod(fam: Family, lo: int, hi: int) -> Fraction:
    out = Fraction(1)
    for i in range(lo, hi + 1):
        out *= fam.g(0, i)
    return out


def col(fam: Family, s: int, k: int, length: int | None = None) -> list[Poly]:
    length = fam.d + 1 if length is None else length
    return [fam(k + t, s) for t in range(length)]


def row(fam: Family, k: int, r: int) -> list[Poly]:
    return [fam(k - j, r + j) for j in range(fam.d + 1)]


def _from_columns(cols: Sequence[Sequence[Poly]]) -> list[list[Poly]]:
    return [list(x) for x in zip(*cols)]


# --- delta ---------------------------------------------------------------

def delta_direct(coeffs, n: int, r: int) -> Poly:
    fam = _fam(coeffs)
    d = fam.d
    return det(_from_columns([col(fam, r + j, n - j) for j in range(d + 1)]))


def delta_closed(coeffs, n: int, r: int) -> Fraction:
    fam = _fam(coeffs)
    return (-1) ** ((fam.d + 1) * n) * _gprod(fam, r + 1, r + n)


def companion(fam: Family, N: int) -> list[list[Poly]]:
    """Transfer matrix C_N with (y_{N+1..N+d+1}) = C_N (y_{N..N+d}) for every solution y."""
    d = fam.d
    C = [[ZERO] * (d + 1) for _ in range(d + 1)]
    for i in range(d):
        C[i][i + 1] = ONE
    for t in range(d):
        C[d][t] = Poly.const(-fam.g(t, N + 1 + t))
    C[d][d] = X - fam.b(N + d)
    return C


def _matmul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return [[sum((a[i][k] * b[k][j] for k in range(m)), ZERO) for j in range(p)] for i in range(n)]


def delta_companion(coeffs, n: int, r: int) -> tuple[list[list[Poly]], Poly]:
    """(W, det-product): W = C_{n+r-1} ... C_r W_0 and the product of det C_N.

    W_0 is the unit lower-triangular starting block, so W must reproduce the
    direct Casorati matrix entry by entry.
    """
    fam = _fam(coeffs)
    d = fam.d
    W = _from_columns([col(fam, r + j, -j) for j in range(d + 1)])
    prod = ONE
    for N in range(r, n + r):
        C = companion(fam, N)
        W = _matmul(C, W)
        prod = prod * det(C)
    return W, prod


def verify_delta(coeffs, n: int, r: int) -> Poly:
    """Residual of the closed form of delta(n, r), by the direct and the transfer-matrix routes."""
    fam = _fam(coeffs)
    d = fam.d
    closed = delta_closed(fam, n, r)
    direct = delta_direct(fam, n, r)
    W, prod = delta_companion(fam, n, r)
    direct_matrix = _from_columns([col(fam, r + j, n - j) for j in range(d + 1)])
    entry = ZERO
    for a, b in zip(W, direct_matrix):
        for u, v in zip(a, b):
            entry = _first_nonzero(entry, u - v)
    return _first_nonzero(direct - closed, prod - closed, det(W) - closed, entry)


def verify_D(coeffs, n: int, r: int, i: int) -> Poly:
    """det[col(i, n-i), col(r, n-r), ..., col(r+d-1, n-r-d+1)] = delta(n-r+1, r-1) P_{r-i-1}^{(i)}."""
    if r < 1 or not 0 <= i <= r - 1:
        raise BadParameter("need r >= 1 and 0 <= i <= r-1")
    fam = _fam(coeffs)
    d = fam.d
    cols = [col(fam, i, n - i)] + [col(fam, r + j, n - r - j) for j in range(d)]
    return det(_from_columns(cols)) - fam(r - i - 1, i) * delta_closed(fam, n - r + 1, r - 1)


def linear_dependence_det(coeffs, N: int, shifts: Sequence[int]) -> Poly:
    """(d+2)x(d+2) Casoratian of y^{(s)} for s in shifts, rows N..N+d+1; identically zero.

    y^{(s)} solves the recurrence only from the equation producing y_{s+1} on,
    so N >= max(shifts) - d is required.
    """
    fam = _fam(coeffs)
    d = fam.d
    if len(shifts) != d + 2:
        raise BadParameter(f"need {d + 2} shifts")
    if N < max(shifts) - d:
        raise BadParameter("rows start before every column solves the recurrence")
    return det(_from_columns([[fam(N + t - s, s) for t in range(d + 2)] for s in shifts]))


# --- B-type determinant and its recurrence over association levels --------

def b_det(fam: Family, n: int, r: int) -> Poly:
    d = fam.d
    return det([[fam(n + i - j, r + j) for j in range(d)] for i in range(d)])


def verify_B_recurrence(coeffs, n: int, r: int) -> Poly:
    fam = _fam(coeffs)
    d = fam.d
    if n < d + 1:
        raise BadParameter("the recurrence needs n >= d+1")
    rhs = ZERO
    for s in range(1, d):
        c = -(-1) ** (s * (d - 1)) * _gprod(fam, r + 1, r + s - 1) * fam.g(s, r + s)
        rhs = rhs + b_det(fam, n - s, r + s) * c
    c = (-1) ** (d * (d - 1)) * _gprod(fam, r + 1, r + d - 1)
    rhs = rhs + b_det(fam, n - d, r + d) * (X - fam.b(r + d - 1)) * c
    rhs = rhs + b_det(fam, n - d - 1, r + d + 1) * ((-1) ** (d * d) * _gprod(fam, r + 1, r + d))
    return b_det(fam, n, r) - rhs


# --- F: rows at arbitrary degrees -----------------------------------------

def f_det(fam: Family, n: int, r: int, m: Sequence[int]) -> Poly:
    return det([row(fam, n, r)] + [row(fam, mi, r) for mi in m])


def _check_offsets(fam: Family, n: int, m: Sequence[int]) -> None:
    if len(m) != fam.d:
        raise BadOffsets(f"need {fam.d} offsets, got {len(m)}")
    if any(mi <= n for mi in m):
        raise BadOffsets("every offset must exceed n")


def verify_F(coeffs, n: int, r: int, m: Sequence[int]) -> Poly:
    fam = _fam(coeffs)
    _check_offsets(fam, n, m)
    d = fam.d
    shifted = det([[fam(mi - n - 1 - j, r + n + 1 + j) for j in range(d)] for mi in m])
    return f_det(fam, n, r, m) - delta_closed(fam, n, r) * shifted


# --- perturbed first column -------------------------------------------------

NABLA_SELECTORS = ("nabla", "nabla_tilde", "nabla_check", "R", "R_tilde", "R_check", "G")


class _Perturbed:
    """Sequences and scalars shared by the perturbed-determinant tables."""

    def __init__(self, coeffs: RecCoeffs, p: Perturbation, which: str, N: int):
        self.fam = Family(coeffs)
        self.k = p.k
        self.lam = p.lam
        self.lbar = 1 - p.lam
        d = coeffs.d
        if which.endswith("tilde"):
            self.A = [ZERO] * d
            target = co_dilated(coeffs, p.k + 1, p.lam)
        elif which.endswith("check"):
            self.A = co_recursive_A(coeffs, p)
            target = co_dilated(co_recursive(coeffs, p), p.k + 1, p.lam)
        else:
            self.A = co_recursive_A(coeffs, p)
            target = co_recursive(coeffs, p)
        self.Z = generate(target, N)
        self.dilated = which.endswith(("tilde", "check"))

    def factor(self, r: int) -> Poly:
        """Scalar factor multiplying the reduced determinant at association level r."""
        fam, k, d = self.fam, self.k, self.fam.d
        if not self.dilated:
            if r >= k + 1:
                return self.Z[r - 1]
            if r == 0 and k == 0:
                return self.A[d - 1] * (-1) ** (d + 1)
            raise BadParameter(f"no closed form for level {r} below the perturbation level {k}")
        if r >= k + 2:
            return self.Z[r - 1]
        if r == k + 1:
            return self.Z[k] - fam(k) * self.lbar
        if r == 0 and k == 0:
            # last-band contribution of the dilated gamma_1^0 in the equation for P_{d+1}
            c = fam.g(1, 1) if d >= 2 else -(X - fam.b(0))
            return (self.A[d - 1] + c * self.lbar) * (-1) ** (d + 1)
        raise BadParameter(f"no closed form for level {r} below the perturbation level {k}")


def verify_nabla(coeffs, pert: Perturbation | None, n: int, r: int, which: str,
                 m: Sequence[int] | None = None, shifts: Sequence[int] | None = None) -> Poly:
    """Residual of a perturbed-column determinant identity.

    which:
      ``nabla`` / ``nabla_tilde`` / ``nabla_check``
          det[col of Z at n, col(r, n-r), ..., col(r+d-1, n-r-d+1)] for Z the
          co-recursive, co-dilated or co-modified sequence (the dilation acts
          on gamma_{k+1}^0); compared with factor(r) * delta(n-r+1, r-1).
      ``R`` / ``R_tilde`` / ``R_check``
          rows (Z_j, P^{(r)}_{j-r}, ..., P^{(r+d-1)}_{j-r-d+1}) for j in
          (n, *m); compared with factor(r) * F at level r-1, degree n-r+1 and
          offsets m_i-r+1 (level 0 at r = 0).
      ``G``
          det[P^{(s_j)}_{n-s_j+i}] against (-1)^{d+1} gamma_n^0 times its value at n-1.
    """
    if which not in NABLA_SELECTORS:
        raise BadSelector(f"unknown selector {which!r}; expected one of {NABLA_SELECTORS}")
    if which == "G":
        return _verify_G(coeffs, n, shifts)
    fam = Family(coeffs)
    d = fam.d
    if pert is None:
        pert = Perturbation(0, [0] * d)
    top = n + d + 1 if m is None else max([n, *m]) + 1
    pd = _Perturbed(coeffs, pert, which, top)
    if which.startswith("nabla"):
        cols = [[pd.Z[n + t] for t in range(d + 1)]] + [col(fam, r + j, n - r - j) for j in range(d)]
        lhs = det(_from_columns(cols))
        base = delta_closed(fam, n - r + 1, r - 1) if r >= 1 else delta_closed(fam, n, 0)
        return lhs - pd.factor(r) * base
    if m is None:
        raise BadOffsets("R-type determinants need offsets m")
    _check_offsets(fam, n, m)
    rows = [[pd.Z[j]] + [fam(j - r - i, r + i) for i in range(d)] for j in (n, *m)]
    lhs = det(rows)
    if r >= 1:
        base = f_det(fam, n - r + 1, r - 1, [mi - r + 1 for mi in m])
    else:
        base = f_det(fam, n, 0, m)
    return lhs - pd.factor(r) * base


def g_det(fam: Family, n: int, shifts: Sequence[int]) -> Poly:
    d = fam.d
    return det([[fam(n - s + i, s) for s in shifts] for i in range(d + 1)])


def _verify_G(coeffs, n: int, shifts: Sequence[int] | None) -> Poly:
    fam = _fam(coeffs)
    d = fam.d
    shifts = list(range(d + 1)) if shifts is None else list(shifts)
    if len(shifts) != d + 1 or len(set(shifts)) != d + 1:
        raise BadParameter(f"need {d + 1} distinct association shifts")
    if n < 1:
        raise BadParameter("the ratio needs n >= 1")
    return g_det(fam, n, shifts) - g_det(fam, n - 1, shifts) * ((-1) ** (d + 1) * fam.g(0, n))


# --- transfer polynomials ---------------------------------------------------

def transfer_table(coeffs, n: int, p: int) -> dict[int, list[Poly]]:
    """T_q^{(i)}, i = 1..d+1 stored at list index i-1, for -d <= q <= p+d.

    Every solution y satisfies y_{n+d+q} = sum_i T_q^{(i)} y_{n+d+1-i}.
    """
    fam = _fam(coeffs)
    d = fam.d
    T: dict[int, list[Poly]] = {}
    for s in range(d + 1):
        T[-s] = [ONE if i == s else ZERO for i in range(d + 1)]
    for q in range(0, p + d):
        a = X - fam.b(n + d + q)
        nxt = []
        for i in range(d + 1):
            v = T[q][i] * a
            for j in range(1, d + 1):
                v = v - T[q - j][i] * fam.g(d - j, n + d + q + 1 - j)
            nxt.append(v)
        T[q + 1] = nxt
    return T


def transfer_Tp(coeffs, n: int, p: int) -> tuple[list[Poly], Poly]:
    """(T_p, residual): the expansion is checked on all d+1 fundamental solutions
    and det[T_{p+t}^{(i)}] delta(n, 0) (-1)^{d(d+1)/2} = delta(n+d+p, 0)."""
    if p < 0:
        raise BadParameter("p must be nonnegative")
    fam = _fam(coeffs)
    d = fam.d
    T = transfer_table(fam, n, p)
    res = ZERO
    for s in range(d + 1):
        for q in range(p + 1):
            lhs = fam(n + d + q - s, s)
            rhs = sum((T[q][i] * fam(n + d - i - s, s) for i in range(d + 1)), ZERO)
            res = _first_nonzero(res, lhs - rhs)
    M = [[T[p + t][i] for i in range(d + 1)] for t in range(d + 1)]
    sign = (-1) ** (d * (d + 1) // 2)
    dres = det(M) * (delta_closed(fam, n, 0) * sign) - delta_direct(fam, n + d + p, 0)
    return T[p], _first_nonzero(res, dres)


# --- Christoffel-Darboux type identities -----------------------------------

CD_KINDS = ("product", "sum", "multipoint", "confluent", "confluent_assoc")


def _minor2(fam: Family, n: int, m: int, r: int, lag: int) -> Poly:
    a = m - n - lag
    return det([[fam(a - 1, r + n + 1), fam(a - 2, r + n + 2)],
                [fam(a, r + n + 1), fam(a - 1, r + n + 2)]])


def _h(fam: Family, n: int, m: int, k: int, r: int) -> Poly:
    return det([row(fam, n, r), row(fam, m, r), row(fam, k, r)])


def _check_nmk(n: int, m: int, k: int) -> None:
    if not k > m > n >= 0:
        raise BadOffsets("need k > m > n >= 0")


def cd_product(fam: Family, n: int, m: int, k: int, r: int) -> Poly:
    _check_nmk(n, m, k)
    rhs = (fam(k - m - 1, m + r + 1) * _minor2(fam, n, m, r, 0)
           + fam(k - m - 2, m + r + 2) * _minor2(fam, n, m, r, 1) * fam.g(0, m + r))
    return _h(fam, n, m, k, r) - rhs * delta_closed(fam, n, r)


def cd_sum(fam: Family, n: int, m: int, k: int, r: int) -> Poly:
    """Weighted sum over the middle row index, weights [(-1)^v prod_{l<=v} gamma_{l+r}^0]^{-1}."""
    _check_nmk(n, m, k)
    lhs = ZERO
    for v in range(n + 1, m + 1):
        w = (-1) ** v * _gprod(fam, r + 1, r + v)
        lhs = lhs + _h(fam, n, v, k, r) * (1 / w)
    c = Fraction((-1) ** (m - n)) * _gprod(fam, r + 1, r + n) / _gprod(fam, r + 1, r + m)
    rhs = fam(k - m - 1, m + r + 1) * _minor2(fam, n, m, r, 0) * c
    return lhs - rhs


def _multipoint_lhs_rhs(fam: Family, n: int, r: int, args: Sequence) -> tuple[Poly, Poly]:
    """Both sides with variable j evaluated at args[j] (a rational or the Poly X)."""
    d = fam.d
    dn = delta_closed(fam, n, r)

    def ev(p: Poly, a):
        return p.compose(a) if isinstance(a, Poly) else Poly.const(p(a))

    lhs = ZERO
    for v in range(1, n + 1):
        cols = []
        for j in range(d + 1):
            a = args[j]
            c = [ev(fam(v - j + t, r + j), a) for t in range(d)]
            c.append(ev(fam(v - j + d - 1, r + j), a) * a)
            cols.append(c)
        lhs = lhs + det(_from_columns(cols)) * (dn / delta_closed(fam, v, r))
    top = det(_from_columns([[ev(p, args[j]) for p in col(fam, r + j, n - j)] for j in range(d + 1)]))
    return lhs, top - dn


def _confluent_cols(fam: Family, v: int, r: int, assoc: bool, reduced: bool) -> list[list[Poly]]:
    d = fam.d
    cols = []
    for j in range(d + 1):
        s, o = (r + j, v - j) if assoc else (r, v)
        c = [fam(o + t, s).deriv(j) for t in range(d)]
        last = fam(o + d - 1, s)
        if reduced:
            # x P^{[j]} removed by the row operation; the Leibniz term j P^{[j-1]} remains
            c.append(last.deriv(j - 1) * j if j else ZERO)
        else:
            c.append((X * last).deriv(j))
        cols.append(c)
    return cols


def cd_confluent(fam: Family, n: int, r: int, assoc: bool) -> Poly:
    d = fam.d
    dn = delta_closed(fam, n, r)
    lhs_full = ZERO
    lhs_red = ZERO
    for v in range(1, n + 1):
        w = dn / delta_closed(fam, v, r)
        lhs_full = lhs_full + det(_from_columns(_confluent_cols(fam, v, r, assoc, False))) * w
        lhs_red = lhs_red + det(_from_columns(_confluent_cols(fam, v, r, assoc, True))) * w
    if assoc:
        rhs = det(_from_columns([[fam(n - j + t, r + j).deriv(j) for t in range(d + 1)] for j in range(d + 1)]))
    else:
        top = det(_from_columns([[fam(n + t, r).deriv(j) for t in range(d + 1)] for j in range(d + 1)]))
        rhs = top - dn * math.prod(math.factorial(k) for k in range(1, d + 1))
    return _first_nonzero(lhs_full - rhs, lhs_red - rhs)


def verify_cd(coeffs, kind: str, n: int, r: int = 0, m: int | None = None, k: int | None = None,
              points: Sequence | None = None, symbolic: int | None = None) -> Poly:
    """Residual of a Christoffel-Darboux type identity.

    ``product`` and ``sum`` need d = 2 and k > m > n.  ``multipoint`` evaluates
    at ``points`` (default x_i = i + 1/2) and additionally keeps variable
    ``symbolic`` (default the last one) as an indeterminate; both routes must vanish.
    """
    if kind not in CD_KINDS:
        raise BadSelector(f"unknown kind {kind!r}; expected one of {CD_KINDS}")
    fam = _fam(coeffs)
    d = fam.d
    if kind in ("product", "sum"):
        if d != 2:
            raise UnsupportedD(f"{kind} identity is stated for d = 2 only")
        fn = cd_product if kind == "product" else cd_sum
        return fn(fam, n, m, k, r)
    if kind == "multipoint":
        pts = [Fraction(2 * i + 1, 2) for i in range(1, d + 2)] if points is None else [Fraction(p) for p in points]
        if len(pts) != d + 1 or len(set(pts)) != d + 1:
            raise BadParameter(f"need {d + 1} distinct sample points")
        lhs, rhs = _multipoint_lhs_rhs(fam, n, r, pts)
        sym = d if symbolic is None else symbolic
        args = list(pts)
        args[sym] = X
        lhs2, rhs2 = _multipoint_lhs_rhs(fam, n, r, args)
        return _first_nonzero(lhs - rhs, lhs2 - rhs2)
    return cd_confluent(fam, n, r, assoc=(kind == "confluent_assoc"))
