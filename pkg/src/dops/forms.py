"""Dual forms through their moments.

A form is never manipulated as an algebraic object here: it is a table of
moments, and every bracket is a finite sum of moments times polynomial
coefficients.  The n-th dual form u_r is characterized by <u_r, P_m> = delta_{rm},
so its moment (u_r)_n is the coefficient of P_r when x^n is expanded in the
basis P.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .copoly import co_dilated
from .core import Family, RecCoeffs, associated, expand_in_basis, generate
from .errors import (
    BadParameter,
    BadSelector,
    DenominatorVanishes,
    NotGradedMonic,
    NotQuasi,
    SeriesDivisionByZero,
)
from .poly import ONE, X, ZERO, Poly, to_fraction


@dataclass(frozen=True)
class MomentTable:
    """``rows[r][n]`` is (u_r)_n for 0 <= r < count, 0 <= n <= N."""

    d: int
    rows: tuple

    @property
    def N(self) -> int:
        return len(self.rows[0]) - 1

    @property
    def count(self) -> int:
        return len(self.rows)

    def get(self, r: int, n: int) -> Fraction:
        if not 0 <= r < self.count:
            raise IndexError(f"dual index {r} outside 0..{self.count - 1}")
        if not 0 <= n <= self.N:
            raise IndexError(f"moment order {n} outside 0..{self.N}")
        return self.rows[r][n]

    def bracket(self, r: int, p: Poly, shift: int = 0) -> Fraction:
        """<u_r, x^shift p>."""
        if p.degree + shift > self.N:
            raise IndexError(f"degree {p.degree + shift} exceeds moment order {self.N}")
        row = self.rows[r]
        return sum((row[n + shift] * c for n, c in enumerate(p.coeffs) if c), Fraction(0))

    def duality_defects(self, seq: Sequence[Poly]) -> list[tuple[int, int, Fraction]]:
        """(r, m, value) wherever <u_r, P_m> differs from delta_{rm}."""
        out = []
        for r in range(self.count):
            for m, p in enumerate(seq):
                if m > self.N:
                    break
                v = self.bracket(r, p)
                if v != (1 if r == m else 0):
                    out.append((r, m, v))
        return out

    def to_json(self) -> dict:
        return {"d": self.d, "moments": [[str(v) for v in row] for row in self.rows]}


def moments(coeffs: RecCoeffs, N: int, count: int | None = None) -> MomentTable:
    """Moments (u_r)_n, 0 <= n <= N, of the first ``count`` dual forms (default d)."""
    count = coeffs.d if count is None else count
    if count < 1:
        raise BadParameter("need at least one dual form")
    seq = generate(coeffs, max(N, count - 1))
    rows = [[Fraction(0)] * (N + 1) for _ in range(count)]
    xn = ONE
    for n in range(N + 1):
        c = expand_in_basis(xn, seq)
        for r in range(min(count, len(c))):
            rows[r][n] = c[r]
        xn = xn * X
    return MomentTable(coeffs.d, tuple(tuple(row) for row in rows))


def moments_by_jacobi(coeffs: RecCoeffs, N: int, count: int | None = None) -> MomentTable:
    """Same table, obtained by multiplying coefficient vectors by the Jacobi matrix.

    If x^n = sum_k c_k P_k then x^{n+1} = sum_k c_k x P_k, and x P_k is read off
    the recurrence.  No polynomial is ever formed.
    """
    d = coeffs.d
    count = d if count is None else count
    rows = [[Fraction(0)] * (N + 1) for _ in range(count)]
    c = [Fraction(1)]
    for n in range(N + 1):
        for r in range(min(count, len(c))):
            rows[r][n] = c[r]
        if n == N:
            break
        nxt = [Fraction(0)] * (len(c) + 1)
        for k, ck in enumerate(c):
            if not ck:
                continue
            nxt[k + 1] += ck
            nxt[k] += ck * coeffs.b(k)
            for j in range(1, d + 1):
                if k - j >= 0:
                    nxt[k - j] += ck * coeffs.g(d - j, k + 1 - j)
        c = nxt
    return MomentTable(d, tuple(tuple(row) for row in rows))


# ---------------------------------------------------------------- series

class Series:
    """Truncated Laurent series in 1/z.

    ``coeffs[k]`` multiplies z^{-k}; negative k are positive powers of z.
    Every coefficient with key <= ``order`` is exact; ``order`` None means the
    series is a finite exact sum.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Mapping[int, object], order: int | None):
        self.coeffs = {k: to_fraction(v) for k, v in coeffs.items() if v and (order is None or k <= order)}
        self.order = order

    @classmethod
    def stieltjes(cls, mt: MomentTable, r: int) -> "Series":
        """S(u_r)(z) = -sum_n (u_r)_n z^{-n-1}, exact through z^{-(N+1)}."""
        return cls({n + 1: -mt.get(r, n) for n in range(mt.N + 1)}, mt.N + 1)

    @classmethod
    def polynomial(cls, p: Poly) -> "Series":
        return cls({-k: c for k, c in enumerate(p.coeffs)}, None)

    @classmethod
    def constant(cls, c) -> "Series":
        return cls({0: c}, None)

    @property
    def valuation(self) -> int:
        if self.coeffs:
            return min(self.coeffs)
        if self.order is None:
            raise SeriesDivisionByZero("the zero series has no leading term")
        return self.order + 1

    def __getitem__(self, k: int) -> Fraction:
        if self.order is not None and k > self.order:
            raise IndexError(f"coefficient of z^-{k} beyond order {self.order}")
        return self.coeffs.get(k, Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def truncate(self, order: int) -> "Series":
        if self.order is not None and order > self.order:
            raise IndexError(f"cannot extend order {self.order} to {order}")
        return Series(self.coeffs, order)

    def _join_order(self, other: "Series") -> int | None:
        if self.order is None:
            return other.order
        if other.order is None:
            return self.order
        return min(self.order, other.order)

    def __add__(self, other) -> "Series":
        if not isinstance(other, Series):
            other = Series.constant(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return Series(out, self._join_order(other))

    def __neg__(self) -> "Series":
        return Series({k: -v for k, v in self.coeffs.items()}, self.order)

    def __sub__(self, other) -> "Series":
        if not isinstance(other, Series):
            other = Series.constant(other)
        return self + (-other)

    def scale(self, c) -> "Series":
        c = to_fraction(c)
        return Series({k: c * v for k, v in self.coeffs.items()}, self.order)

    def __mul__(self, other) -> "Series":
        if not isinstance(other, Series):
            return self.scale(other)
        # a coefficient of the product is exact while no unknown term of a factor can reach it
        bounds = []
        if self.order is not None:
            bounds.append(self.order + other.valuation)
        if other.order is not None:
            bounds.append(other.order + self.valuation)
        order = min(bounds) if bounds else None
        out: dict[int, Fraction] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                if order is None or k <= order:
                    out[k] = out.get(k, Fraction(0)) + a * b
        return Series(out, order)

    __rmul__ = __mul__

    def reciprocal(self) -> "Series":
        if not self.coeffs:
            raise SeriesDivisionByZero("leading coefficient vanishes")
        v = self.valuation
        if self.order is None and len(self.coeffs) > 1:
            raise BadParameter("reciprocal of a finite sum needs an explicit truncation order")
        if self.order is None:
            return Series({-v: 1 / self.coeffs[v]}, None)
        lead = self.coeffs[v]
        span = self.order - v
        # (lead z^-v)(1 + t) with t in powers of 1/z; invert 1 + t by long division
        t = [self.coeffs.get(v + k, Fraction(0)) / lead for k in range(span + 1)]
        inv = [Fraction(1)] + [Fraction(0)] * span
        for k in range(1, span + 1):
            inv[k] = -sum((t[i] * inv[k - i] for i in range(1, k + 1)), Fraction(0))
        return Series({k - v: inv[k] / lead for k in range(span + 1)}, self.order - 2 * v)

    def __truediv__(self, other) -> "Series":
        if not isinstance(other, Series):
            other = to_fraction(other)
            if not other:
                raise SeriesDivisionByZero("division by zero scalar")
            return self.scale(1 / other)
        return self * other.reciprocal()

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": {str(k): str(v) for k, v in sorted(self.coeffs.items())}}

    def __repr__(self) -> str:
        return f"Series({dict(sorted(self.coeffs.items()))}, order={self.order})"


# ---------------------------------------------------------------- brackets

BRACKET_SELECTORS = (
    "last_band_product",
    "last_dual_product",
    "coefficient_brackets",
    "associated_first",
    "associated_product",
    "bracket_recursion",
)


@dataclass
class BracketReport:
    which: str
    rows: list = field(default_factory=list)

    def add(self, label: str, lhs, rhs) -> None:
        self.rows.append((label, to_fraction(lhs), to_fraction(rhs)))

    @property
    def ok(self) -> bool:
        return all(lhs == rhs for _, lhs, rhs in self.rows)

    @property
    def failures(self) -> list:
        return [row for row in self.rows if row[1] != row[2]]

    def to_json(self) -> dict:
        return {
            "identity": self.which,
            "checked": len(self.rows),
            "residual_is_zero": self.ok,
            "failures": [[lab, str(a), str(b)] for lab, a, b in self.failures],
        }


def _prod(values) -> Fraction:
    out = Fraction(1)
    for v in values:
        out *= v
    return out


def bracket_check(coeffs: RecCoeffs, which: str, K: int = 3) -> BracketReport:
    """Check one family of bracket identities for powers up to x^K.

    Selectors:

    * ``last_band_product``: <u_r, x^{k+1} P_{(k+1)d+r}> = gamma^0_{kd+r+1} <u_r, x^k P_{kd+r}>,
      and the product form against <u_r, P_r> = 1.
    * ``last_dual_product``: <u_{d-1}, x^k P_{(k+1)d-1}> = prod_{v=0..k} gamma^0_{vd}, gamma_0^0 := 1.
    * ``coefficient_brackets``: beta_v = <u_v, x P_v>; gamma_v^{v+s} = <u_{v-1}, x P_{d-1-s}>;
      gamma_{n+1+v}^v = <u_{n+v}, x P_{n+d}>.
    * ``associated_first``: <u_v^{(1)}, x P^{(1)}_{v+1+i}> = <u_{v+1}, x P_{v+2+i}> = gamma_{v+2}^{d-1-i}.
    * ``associated_product``: <u_v^{(r)}, x^r P^{(r)}_{dr+v}> = <u_{v+r}, x^r P_{r(d+1)+v}>
      = prod_{i=1..r} gamma^0_{d(r-i)+v+r+1}.
      The associated duals act on the associated basis: <u_v^{(r)}, P_m> is
      not the shifted bracket.
    * ``bracket_recursion``: the three-case recursion for <u_r, x^k P_{dk+r-i}> in k.
    """
    d = coeffs.d
    fam = Family(coeffs)
    g0 = lambda L: coeffs.g(0, L)  # noqa: E731
    rep = BracketReport(which)
    if which == "last_band_product":
        mt = moments(coeffs, (d + 1) * (K + 1) + d)
        for r in range(d):
            for k in range(K + 1):
                lhs = mt.bracket(r, fam((k + 1) * d + r), k + 1)
                rep.add(f"step r={r} k={k}", lhs, g0(k * d + r + 1) * mt.bracket(r, fam(k * d + r), k))
                rep.add(f"product r={r} k={k}", lhs, _prod(g0(v * d + r + 1) for v in range(k + 1)))
    elif which == "last_dual_product":
        mt = moments(coeffs, (d + 1) * (K + 1) + d)
        for k in range(K + 1):
            rhs = _prod(g0(v * d) if v else Fraction(1) for v in range(k + 1))
            rep.add(f"k={k}", mt.bracket(d - 1, fam((k + 1) * d - 1), k), rhs)
    elif which == "coefficient_brackets":
        span = K + d
        mt = moments(coeffs, span + 2 * d + 1, count=span + d)
        for v in range(d):
            rep.add(f"beta v={v}", mt.bracket(v, fam(v), 1), coeffs.b(v))
        for s in range(d - 1):
            for v in range(1, d - s):
                rep.add(f"initial band v={v} s={s}", mt.bracket(v - 1, fam(d - 1 - s), 1), coeffs.g(v + s, v))
        for n in range(K + 1):
            for v in range(d):
                rep.add(f"band n={n} v={v}", mt.bracket(n + v, fam(n + d), 1), coeffs.g(v, n + 1 + v))
    elif which == "associated_first":
        mt = moments(coeffs, 2 * d + 2, count=d + 1)
        ma = moments(associated(coeffs, 1), 2 * d + 2, count=d)
        for v in range(d):
            for i in range(d):
                rhs = coeffs.g(d - 1 - i, v + 2)
                rep.add(f"associated v={v} i={i}", ma.bracket(v, fam(v + 1 + i, 1), 1), rhs)
                rep.add(f"shifted v={v} i={i}", mt.bracket(v + 1, fam(v + 2 + i), 1), rhs)
    elif which == "associated_product":
        top = K * (d + 1) + d
        mt = moments(coeffs, top + K, count=d + K)
        for r in range(1, K + 1):
            ma = moments(associated(coeffs, r), top, count=d)
            for v in range(d):
                rhs = _prod(g0(d * (r - i) + v + r + 1) for i in range(1, r + 1))
                rep.add(f"associated r={r} v={v}", ma.bracket(v, fam(d * r + v, r), r), rhs)
                rep.add(f"shifted r={r} v={v}", mt.bracket(v + r, fam(r * (d + 1) + v), r), rhs)
    elif which == "bracket_recursion":
        mt = moments(coeffs, (d + 1) * (K + 1) + d)
        br = lambda r, k, m: mt.bracket(r, fam(m), k) if m >= 0 else Fraction(0)  # noqa: E731
        g = lambda nu, L: coeffs.g(nu, L) if L >= 1 else Fraction(0)  # noqa: E731
        for r in range(d):
            for k in range(1, K + 1):
                base = d * (k - 1) + r
                rep.add(f"closed r={r} k={k}", br(r, k, d * k + r), _prod(g0(v * d + r + 1) for v in range(k)))
                for i in range(1, d):
                    rhs = sum((g(i - j, base + 1 - j) * br(r, k - 1, base - j) for j in range(i + 1)), Fraction(0))
                    rep.add(f"upper r={r} k={k} i={i}", br(r, k, d * k + r - i), rhs)
                rhs = coeffs.b(base) * br(r, k - 1, base)
                rhs += sum((g(d - 1 - j, base - j) * br(r, k - 1, base - 1 - j) for j in range(d)), Fraction(0))
                rep.add(f"middle r={r} k={k}", br(r, k, base), rhs)
                for l in range(d + 1, d * k + r + 1):
                    m = d * k + r - l
                    rhs = br(r, k - 1, m + 1) + coeffs.b(m) * br(r, k - 1, m)
                    rhs += sum((g(d - 1 - j, m - j) * br(r, k - 1, m - 1 - j) for j in range(d)), Fraction(0))
                    rep.add(f"lower r={r} k={k} l={l}", br(r, k, m), rhs)
    else:
        raise BadSelector(f"unknown bracket identity {which!r}; choose from {BRACKET_SELECTORS}")
    return rep


def positive_definite(coeffs: RecCoeffs) -> bool:
    """Real coefficients with every stored gamma^0 strictly positive."""
    return all(g > 0 for g in coeffs.gamma[0])


# ---------------------------------------------------------------- Stieltjes relations

STIELTJES_SELECTORS = ("markov", "codilated")


def markov_residual(coeffs: RecCoeffs, n: int, r: int, N: int = 20) -> Series:
    """S(u_{r-1}) S(u_n^{(r)}) + S(u_{n+r}) through z^{-N}."""
    if r < 1 or n < 0:
        raise BadParameter("need r >= 1 and n >= 0")
    M = N + n + r + 2
    mt = moments(coeffs, M, count=max(coeffs.d, n + r + 1))
    ma = moments(associated(coeffs, r), M, count=max(coeffs.d, n + 1))
    res = Series.stieltjes(mt, r - 1) * Series.stieltjes(ma, n) + Series.stieltjes(mt, n + r)
    return res.truncate(N)


def codilated_residual(coeffs: RecCoeffs, nu: int, lam, N: int = 20) -> Series:
    """S(u~_nu) - S(u_nu)/D with gamma_1^0 dilated by lam, through z^{-N}.

    D = lam - (1-lam) P_1(z) S(u_0) + (1-lam) sum_{j=0}^{d-2} gamma_1^{d-1-j} S(u_{j+1}).
    """
    d = coeffs.d
    if not 0 <= nu < d:
        raise BadParameter(f"dual index {nu} outside 0..{d - 1}")
    lam = to_fraction(lam)
    lbar = 1 - lam
    M = N + d + 2
    mt = moments(coeffs, M)
    mc = moments(co_dilated(coeffs, 1, lam), M)
    S = [Series.stieltjes(mt, r) for r in range(d)]
    den = Series.constant(lam) - Series.polynomial(X - coeffs.b(0)) * S[0] * lbar
    for j in range(d - 1):
        den = den + S[j + 1] * (lbar * coeffs.g(d - 1 - j, 1))
    res = Series.stieltjes(mc, nu) - S[nu] / den
    return res.truncate(N)


def stieltjes_relations(coeffs: RecCoeffs, which: str, N: int = 20, **params) -> Series:
    """Residual series of the selected relation; zero through z^{-N} when it holds."""
    if which == "markov":
        return markov_residual(coeffs, params.get("n", 0), params.get("r", 1), N)
    if which == "codilated":
        return codilated_residual(coeffs, params.get("nu", 0), params.get("lam", Fraction(1, 2)), N)
    raise BadSelector(f"unknown series relation {which!r}; choose from {STIELTJES_SELECTORS}")


# ---------------------------------------------------------------- quasi-orthogonality

@dataclass
class QuasiResult:
    """P_n = Q_n + sum_{i=1}^{dl} a[n][i] Q_{n-i}; ``a[n][0]`` is 1."""

    l: int
    a: list


def _check_monic(seq: Sequence[Poly], name: str) -> None:
    for n, p in enumerate(seq):
        if p.degree != n or not p.is_monic():
            raise NotGradedMonic(f"{name}[{n}] is not monic of degree {n}")


def quasi_detect(P: Sequence[Poly], Q: Sequence[Poly], d: int) -> QuasiResult:
    """Smallest l with P_n in span(Q_n, ..., Q_{n-dl}) for every stored n.

    The leading entry a[n][dl] must be nonzero for all n >= dl, and at least
    d+1 stored indices n >= dl must witness the relation, otherwise a long
    enough pair of unrelated sequences would always qualify.
    """
    P, Q = list(P), list(Q)
    _check_monic(P, "P")
    _check_monic(Q, "Q")
    N = min(len(P), len(Q)) - 1
    a = []
    width = 0
    for n in range(N + 1):
        c = expand_in_basis(P[n], Q[: n + 1])
        row = [c[n - i] for i in range(n + 1)]
        a.append(row)
        nz = [i for i, v in enumerate(row) if v]
        width = max(width, max(nz))
    l = -(-width // d)
    if d * l > N - d:
        raise NotQuasi(f"no order l <= {(N - d) // d} fits {N + 1} stored terms")
    for n in range(d * l, N + 1):
        if not a[n][d * l]:
            raise NotQuasi(f"coefficient a[{n}][{d * l}] vanishes for the minimal order {l}")
    return QuasiResult(l, [row[: d * l + 1] for row in a])


def quasi_structure_residuals(P: Sequence[Poly], Q: Sequence[Poly], pi: Poly) -> list[tuple[int, list]]:
    """(n, coefficients) where pi Q_n has components on P_j with j < n.

    pi Q_n must be a combination of P_{n+l}, ..., P_n with l = deg pi; only n
    with n + l within the stored P are examined.
    """
    P, Q = list(P), list(Q)
    l = pi.degree
    out = []
    for n in range(min(len(Q), len(P) - l)):
        c = expand_in_basis(pi * Q[n], P[: n + l + 1])
        low = c[:n]
        if any(low):
            out.append((n, low))
    return out


def quasi_reduce(coeffs: RecCoeffs, a_table: Mapping[int, Sequence], r: int):
    """Rewrite Q_n = sum_{s=0}^{r} a_n^{(s)} P_{n-s} with d+1 polynomial coefficients.

    ``a_table[n]`` lists a_n^{(1)}..a_n^{(r)}.  Returns ``(U, residuals)``:
    ``U[n]`` holds U_0..U_{r-1} and ``residuals[n]`` is the difference between
    the reduced form and the direct sum (zero when the reduction is right).
    """
    d = coeffs.d
    if r <= d:
        raise BadParameter(f"reduction needs r > d, got r={r}, d={d}")
    fam = Family(coeffs)
    g = lambda nu, L: coeffs.g(nu, L) if L >= 1 else Fraction(0)  # noqa: E731
    U_all, res = {}, {}
    for n, arow in a_table.items():
        if n < r:
            raise BadParameter(f"row n={n} needs n >= r={r}")
        a = [Fraction(1)] + [to_fraction(v) for v in arow]
        if len(a) != r + 1:
            raise BadParameter(f"row n={n} has {len(a) - 1} entries, expected {r}")
        U = [ONE]

        def u(i: int) -> Poly:
            return U[i] if i >= 0 else ZERO

        for s in range(1, r):
            p = Poly.const(a[s]) + (X - coeffs.b(n - s)) * U[s - 1]
            for i in range(d):
                p = p - u(s - 2 - i) * g(d - 1 - i, n - s + 1)
            U.append(p)
        q = U[r - 1] * fam(n - r + 1)
        lead = Poly.const(a[r])
        for i in range(d):
            lead = lead - u(r - 2 - i) * g(d - 1 - i, n - r + 1)
        q = q + lead * fam(n - r)
        for t in range(2, d + 1):
            c = ZERO
            for i in range(d - t + 1):
                c = c + u(r - 2 - i) * g(d - t - i, n - r + 2 - t)
            q = q - c * fam(n - r + 1 - t)
        direct = ZERO
        for s in range(r + 1):
            direct = direct + fam(n - s) * a[s]
        U_all[n] = U
        res[n] = q - direct
    return U_all, res


# ---------------------------------------------------------------- Uvarov

@dataclass
class UvarovResult:
    """L[m] = L_m(x;c) and Q[m] for 0 <= m <= N.

    ``at_c`` holds Q_m(c)(1 + lam L_{m-1}(c;c)) - P_m(c); ``defects`` lists
    (r, j, m, value) where <v_r, x^j Q_m> fails to vanish although
    m >= dj + r + 1, with v_r = u_r + lam delta_c.
    """

    L: list
    Q: list
    norms: list
    at_c: list
    defects: list


def uvarov(coeffs: RecCoeffs, c, lam, N: int) -> UvarovResult:
    """Q_m = P_m - lam P_m(c) L_{m-1}(x;c) / (1 + lam L_{m-1}(c;c)).

    L_m(x;c) = sum_{i=0}^{m} P_{floor(i/d)}(c) P_i(x) / <u_r, P_i P_j> with
    i = dj + r; the denominators are read from the moment table and equal the
    last-band products, so they never vanish.
    """
    d = coeffs.d
    c, lam = to_fraction(c), to_fraction(lam)
    fam = Family(coeffs)
    top = 2 * N + 2
    mt = moments(coeffs, top)
    norms = []
    for i in range(N + 1):
        j, r = divmod(i, d)
        norms.append(mt.bracket(r, fam(i) * fam(j)))
    L, partial = [], ZERO
    for i in range(N + 1):
        partial = partial + fam(i) * (fam(i // d)(c) / norms[i])
        L.append(partial)
    Q, at_c = [], []
    for m in range(N + 1):
        if m == 0:
            Q.append(ONE)
            at_c.append(Fraction(0))
            continue
        den = 1 + lam * L[m - 1](c)
        if not den:
            raise DenominatorVanishes(f"1 + lam L_{m - 1}(c;c) = 0")
        q = fam(m) - L[m - 1] * (lam * fam(m)(c) / den)
        Q.append(q)
        at_c.append(q(c) * den - fam(m)(c))
    defects = []
    for r in range(d):
        for j in range((N - r - 1) // d + 1):
            for m in range(d * j + r + 1, N + 1):
                v = mt.bracket(r, Q[m], j) + lam * c ** j * Q[m](c)
                if v:
                    defects.append((r, j, m, v))
    return UvarovResult(L, Q, norms, at_c, defects)
