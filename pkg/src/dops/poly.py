"""Dense univariate polynomials with exact rational coefficients.

Coefficients are stored low-to-high: ``coeffs[k]`` is the coefficient of x**k.
The zero polynomial has an empty coefficient tuple.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to Fraction (floats are refused)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {value!r} as an exact rational")


def _strip(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _strip([to_fraction(c) for c in coeffs])

    @classmethod
    def _raw(cls, coeffs: tuple) -> "Poly":
        # caller guarantees Fractions with nonzero leading coefficient
        p = object.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        p = ONE
        for r in roots:
            p = p * cls((-to_fraction(r), 1))
        return p

    # -- basic properties -------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == Poly.const(other).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = "x" if k == 1 else f"x^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly.const(other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly._raw(_strip(out))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = to_fraction(other)
            if not c:
                return ZERO
            return Poly._raw(tuple(c * a for a in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return Poly._raw(_strip(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "Poly":
        return self * to_fraction(c)

    def shift(self, k: int) -> "Poly":
        """Multiply by x**k."""
        if not self.coeffs or k == 0:
            return self
        return Poly._raw((Fraction(0),) * k + self.coeffs)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lc = other.lc
        if len(rem) - 1 < db:
            return ZERO, self
        quot = [Fraction(0)] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] / lc
            quot[k] = c
            if c:
                for j, bj in enumerate(other.coeffs):
                    rem[k + j] -= c * bj
        return Poly._raw(_strip(quot)), Poly._raw(_strip(rem[:db]))

    def __floordiv__(self, other) -> "Poly":
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other) -> "Poly":
        return self.divmod(self._coerce(other))[1]

    def exact_div(self, other) -> "Poly":
        """Division that must leave no remainder."""
        if not isinstance(other, Poly):
            c = to_fraction(other)
            return Poly._raw(tuple(a / c for a in self.coeffs))
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def __truediv__(self, other) -> "Poly":
        return self.exact_div(other)

    # -- calculus and evaluation -----------------------------------------

    def __call__(self, x):
        """Horner evaluation; works for Fractions, ints, floats, mpmath numbers and Polys."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def deriv(self, k: int = 1) -> "Poly":
        p = self
        for _ in range(k):
            p = Poly._raw(tuple(i * c for i, c in enumerate(p.coeffs) if i)) if p.coeffs else p
            p = Poly._raw(_strip(list(p.coeffs)))
        return p

    def compose(self, other: "Poly") -> "Poly":
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def substitute_power(self, k: int) -> "Poly":
        """p(x**k)."""
        if k == 1 or not self.coeffs:
            return self
        out = [Fraction(0)] * (k * self.degree + 1)
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return Poly._raw(tuple(out))

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self.exact_div(self.lc)

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]


ZERO = Poly._raw(())
ONE = Poly._raw((Fraction(1),))
X = Poly._raw((Fraction(0), Fraction(1)))


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm (gcd(0, 0) = 0)."""
    while b:
        a, b = b, a % b
    return a.monic()


def gcd_many(polys: Sequence[Poly]) -> Poly:
    g = ZERO
    for p in polys:
        g = gcd(g, p)
        if g.degree == 0:
            break
    return g


def squarefree_part(p: Poly) -> Poly:
    if p.degree <= 0:
        return p.monic() if p else p
    return (p // gcd(p, p.deriv())).monic()


def squarefree_factorization(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm over Q: returns (factor, multiplicity) pairs with monic, nonconstant factors."""
    out = []
    if p.degree <= 0:
        return out
    p = p.monic()
    dp = p.deriv()
    a = gcd(p, dp)
    b = p // a
    c = dp // a
    i = 1
    while b.degree > 0:
        e = c - b.deriv()
        g = gcd(b, e)
        if g.degree > 0:
            out.append((g, i))
        b = b // g
        c = e // g
        i += 1
    return out


def max_multiplicity(p: Poly) -> int:
    fac = squarefree_factorization(p)
    return max((m for _, m in fac), default=0)


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.deriv()]
    while seq[-1]:
        r = -(seq[-2] % seq[-1])
        if not r:
            break
        seq.append(r)
    return seq


def _sign_changes(values: Iterable) -> int:
    signs = [v > 0 for v in values if v]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: Poly) -> int:
    """Number of distinct real roots, by Sturm's theorem on the whole line."""
    if p.degree <= 0:
        return 0
    seq = sturm_sequence(p)
    at_neg_inf = [s.lc * (-1) ** s.degree for s in seq]
    at_pos_inf = [s.lc for s in seq]
    return _sign_changes(at_neg_inf) - _sign_changes(at_pos_inf)


def count_real_roots_in(p: Poly, lo, hi) -> int:
    """Distinct real roots in the half-open interval (lo, hi]."""
    if p.degree <= 0:
        return 0
    seq = sturm_sequence(p)
    lo, hi = to_fraction(lo), to_fraction(hi)
    return _sign_changes(s(lo) for s in seq) - _sign_changes(s(hi) for s in seq)


def odd_multiplicity_real_roots(p: Poly) -> int:
    """Distinct real roots at which p changes sign."""
    return sum(count_real_roots(f) for f, m in squarefree_factorization(p) if m % 2)


def poly_det(rows: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a square matrix of polynomials by fraction-free Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return ONE
    a = [[e if isinstance(e, Poly) else Poly.const(e) for e in row] for row in rows]
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ZERO
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * piv - a[i][k] * a[k][j]).exact_div(prev)
        prev = piv
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det
