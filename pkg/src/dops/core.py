"""Recurrence data, sequence generation, association and Favard-style extraction.

Index map (the source of most off-by-one bugs, so spelled out once):

* ``RecCoeffs.gamma[nu][n]`` stores gamma_{n+1}^{nu}; ``RecCoeffs.g(nu, L)``
  returns gamma_L^{nu} for L >= 1.
* The (d+2)-term recurrence, uniform for every n >= 0 once P_m = 0 for m < 0:

      x P_n = P_{n+1} + beta_n P_n + sum_{j=1..d} gamma_{n+1-j}^{d-j} P_{n-j}

  so gamma_L^{nu} multiplies P_{L-1} in the equation that produces
  P_{L+d-nu}.  Terms with n-j < 0 are simply absent (this is the short-sum
  reading of the initial block for P_2..P_d).
* In the monic Jacobi matrix, entry (i+j, i) below the diagonal is
  gamma_{i+1}^{d-j}, diagonal (i, i) is beta_i and the superdiagonal is 1.
* The associated sequence of order r uses beta_{n+r}, gamma_{L+r}^{nu}.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BadSelector, MissingCoefficient, NotGradedMonic, RegularityViolation
from .poly import ONE, X, ZERO, Poly, to_fraction


def _row(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(to_fraction(v) for v in values)


@dataclass(frozen=True)
class RecCoeffs:
    d: int
    beta: tuple
    gamma: tuple

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("order d must be positive")
        object.__setattr__(self, "beta", _row(self.beta))
        gamma = tuple(_row(g) for g in self.gamma)
        if len(gamma) != self.d:
            raise ValueError(f"expected {self.d} gamma rows, got {len(gamma)}")
        object.__setattr__(self, "gamma", gamma)
        for n, g0 in enumerate(gamma[0]):
            if not g0:
                raise RegularityViolation(f"gamma_{n + 1}^0 = 0")

    @classmethod
    def constant(cls, d: int, beta, gammas: Sequence, horizon: int) -> "RecCoeffs":
        """Constant coefficients: ``gammas[nu]`` is the value of every gamma^nu."""
        return cls(d, [beta] * horizon, [[g] * horizon for g in gammas])

    def b(self, n: int) -> Fraction:
        if n < 0 or n >= len(self.beta):
            raise MissingCoefficient(f"beta_{n} not available (horizon {len(self.beta)})")
        return self.beta[n]

    def g(self, nu: int, L: int) -> Fraction:
        """gamma_L^nu."""
        if not 0 <= nu < self.d:
            raise IndexError(f"gamma band {nu} outside 0..{self.d - 1}")
        row = self.gamma[nu]
        if L < 1 or L > len(row):
            raise MissingCoefficient(f"gamma_{L}^{nu} not available (stored 1..{len(row)})")
        return row[L - 1]

    @property
    def horizon(self) -> int:
        """Largest N for which P_0..P_N can be generated."""
        h = len(self.beta)
        for nu, row in enumerate(self.gamma):
            h = min(h, len(row) + self.d - nu)
        return h

    def truncate(self, N: int) -> "RecCoeffs":
        """The minimal descriptor that generates exactly P_0..P_N."""
        d = self.d
        if N > self.horizon:
            raise MissingCoefficient(f"cannot truncate to {N}, horizon is {self.horizon}")
        return RecCoeffs(d, self.beta[:N], [self.gamma[nu][: max(0, N - d + nu)] for nu in range(d)])

    def replace(self, beta=None, gamma=None) -> "RecCoeffs":
        return RecCoeffs(self.d, self.beta if beta is None else beta, self.gamma if gamma is None else gamma)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "beta": [str(b) for b in self.beta],
            "gamma": [[str(g) for g in row] for row in self.gamma],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RecCoeffs":
        return cls(int(obj["d"]), obj["beta"], obj["gamma"])


@dataclass(frozen=True)
class PolySeq:
    """Graded monic sequence: ``polys[n]`` is monic of degree n."""

    polys: tuple
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        if self.check:
            for n, p in enumerate(self.polys):
                if p.degree != n or not p.is_monic():
                    raise NotGradedMonic(f"entry {n} is not monic of degree {n}: {p}")

    def __len__(self) -> int:
        return len(self.polys)

    def __getitem__(self, n):
        return self.polys[n]

    def __iter__(self):
        return iter(self.polys)

    def at(self, n: int) -> Poly:
        """P_n with the convention P_n = 0 for n < 0."""
        if n < 0:
            return ZERO
        return self.polys[n]


def step(coeffs: RecCoeffs, prev: Sequence[Poly]) -> Poly:
    """Next polynomial P_n from P_0..P_{n-1}."""
    n = len(prev)
    if n == 0:
        return ONE
    d = coeffs.d
    m = n - 1
    p = X * prev[m] - prev[m] * coeffs.b(m)
    for j in range(1, d + 1):
        if m - j < 0:
            break
        p = p - prev[m - j] * coeffs.g(d - j, m + 1 - j)
    return p


def generate(coeffs: RecCoeffs, N: int) -> PolySeq:
    """P_0..P_N from the (d+2)-term recurrence."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    polys: list[Poly] = []
    for _ in range(N + 1):
        polys.append(step(coeffs, polys))
    return PolySeq(tuple(polys), check=False)


def associated(coeffs: RecCoeffs, r: int) -> RecCoeffs:
    """Descriptor of the associated sequence of order r (first r rows/columns of J deleted)."""
    if r < 0:
        raise ValueError("use anti_associated for negative orders")
    if r == 0:
        return coeffs
    if r > len(coeffs.beta):
        raise MissingCoefficient(f"cannot shift by {r}: only {len(coeffs.beta)} betas stored")
    return RecCoeffs(coeffs.d, coeffs.beta[r:], [row[r:] for row in coeffs.gamma])


def anti_associated(coeffs: RecCoeffs, rows: Sequence) -> RecCoeffs:
    """Prepend rows/columns to the Jacobi matrix.

    ``rows`` lists ``(beta, gammas)`` pairs, outermost first; ``gammas[nu]`` becomes
    the new lowest gamma^nu entry of that column.  ``rows[0]`` ends up at index 0.
    """
    d = coeffs.d
    betas, cols = [], [[] for _ in range(d)]
    for beta, gammas in rows:
        gammas = list(gammas)
        if len(gammas) != d:
            raise ValueError(f"each prepended row needs {d} gamma values")
        if not to_fraction(gammas[0]):
            raise RegularityViolation("prepended gamma^0 is zero")
        betas.append(beta)
        for nu in range(d):
            cols[nu].append(gammas[nu])
    return RecCoeffs(d, list(betas) + list(coeffs.beta), [cols[nu] + list(coeffs.gamma[nu]) for nu in range(d)])


class Family:
    """Memoized access to P_n^{(r)} for one descriptor.

    ``fam(n, r)`` is the n-th associated polynomial of order r, zero for n < 0.
    """

    def __init__(self, coeffs: RecCoeffs):
        self.coeffs = coeffs
        self.d = coeffs.d
        self._seqs: dict[int, list[Poly]] = {}
        self._shifted: dict[int, RecCoeffs] = {}

    def __call__(self, n: int, r: int = 0) -> Poly:
        if n < 0:
            return ZERO
        if r not in self._seqs:
            self._shifted[r] = associated(self.coeffs, r)
            self._seqs[r] = []
        seq = self._seqs[r]
        c = self._shifted[r]
        while len(seq) <= n:
            seq.append(step(c, seq))
        return seq[n]

    def seq(self, N: int, r: int = 0) -> PolySeq:
        return PolySeq(tuple(self(n, r) for n in range(N + 1)), check=False)

    def b(self, n: int) -> Fraction:
        return self.coeffs.b(n)

    def g(self, nu: int, L: int) -> Fraction:
        return self.coeffs.g(nu, L)


def expand_in_basis(target: Poly, basis: Sequence[Poly]) -> list[Fraction]:
    """Coefficients c with target = sum c[k] basis[k], basis graded monic."""
    deg = target.degree
    if deg >= len(basis):
        raise ValueError(f"basis of length {len(basis)} cannot represent degree {deg}")
    out = [Fraction(0)] * max(deg + 1, 0)
    rem = target
    for k in range(deg, -1, -1):
        c = rem[k]
        if c:
            out[k] = c
            rem = rem - basis[k] * c
    if rem:
        raise NotGradedMonic("basis is not graded monic")
    return out


@dataclass
class QuasiReport:
    """Expansion table of x P_n when the sequence is not a d-OPS.

    ``chi[n][v]`` is the coefficient of P_v in x P_n - P_{n+1} (v <= n).
    ``violations`` lists (n, v) with v < n - d and a nonzero coefficient, and
    ``zero_gamma0`` lists n where the last band coefficient vanished.
    """

    d: int
    chi: list
    violations: list
    zero_gamma0: list

    @property
    def is_dops(self) -> bool:
        return not self.violations and not self.zero_gamma0


def expansion_table(seq: Sequence[Poly]) -> list[list[Fraction]]:
    """chi[n][v]: x P_n = P_{n+1} + sum_v chi[n][v] P_v, for n = 0..len-2."""
    polys = list(seq)
    for n, p in enumerate(polys):
        if p.degree != n or not p.is_monic():
            raise NotGradedMonic(f"entry {n} is not monic of degree {n}")
    table = []
    for n in range(len(polys) - 1):
        c = expand_in_basis(X * polys[n] - polys[n + 1], polys[: n + 1])
        table.append(c + [Fraction(0)] * (n + 1 - len(c)))
    return table


def extract_recurrence(seq: Sequence[Poly], d: int):
    """Recover RecCoeffs from a graded monic sequence, or a QuasiReport if it is not a d-OPS.

    With P_0..P_N supplied, the result equals ``coeffs.truncate(N)`` for the
    generating descriptor.
    """
    chi = expansion_table(seq)
    N = len(chi)
    violations = [(n, v) for n, row in enumerate(chi) for v in range(0, n - d) if row[v]]
    beta = [chi[n][n] for n in range(N)]
    gamma = [[] for _ in range(d)]
    zero_g0 = []
    for nu in range(d):
        j = d - nu
        # gamma_L^nu = chi[L-1+j][L-1]
        L = 1
        while L - 1 + j < N:
            val = chi[L - 1 + j][L - 1]
            if nu == 0 and not val:
                zero_g0.append(L)
            gamma[nu].append(val)
            L += 1
    report = QuasiReport(d, chi, violations, zero_g0)
    if not report.is_dops:
        return report
    return RecCoeffs(d, beta, gamma)


def random_rational(rng: random.Random, num: int = 20, den: int = 5, positive: bool = False) -> Fraction:
    """p/q with |p| <= num, 1 <= q <= den (p >= 1 when positive)."""
    p = rng.randint(1, num) if positive else rng.randint(-num, num)
    return Fraction(p, rng.randint(1, den))


def random_coeffs(d: int, horizon: int, rng: random.Random, positive: bool = False) -> RecCoeffs:
    """Random descriptor with gamma^0 resampled until nonzero."""
    beta = [random_rational(rng, positive=positive) for _ in range(horizon)]
    gamma = []
    for nu in range(d):
        row = []
        for _ in range(horizon):
            v = random_rational(rng, positive=positive)
            while nu == 0 and not v:
                v = random_rational(rng, positive=positive)
            row.append(v)
        gamma.append(row)
    return RecCoeffs(d, beta, gamma)


# --- association expansions ---------------------------------------------

def _split_rhs(fam: Family, n: int, m: int, r: int) -> Poly:
    """Expansion of P_{n+m}^{(r)} around level n+r (P_{n-k}^{(r)} as multipliers)."""
    d = fam.d
    out = fam(m, n + r) * fam(n, r)
    for k in range(1, d + 1):
        lead = fam(n - k, r)
        if lead.is_zero():
            continue
        inner = ZERO
        for i in range(1, d - k + 2):
            inner = inner + fam(m - i, n + r + i) * fam.g(d - k + 1 - i, n + r - k + 1)
        out = out - inner * lead
    return out


def dual_step(fam: Family, level: int, state: list[Poly]) -> list[Poly]:
    """Rewrite sum_j state[j] P^{(level+j)}_{.} one association level deeper via the dual recurrence."""
    d = fam.d
    c0 = state[0]
    new = [c0 * (X - fam.b(level)) + state[1] if d >= 1 else None]
    for i in range(1, d):
        new.append(state[i + 1] - c0 * fam.g(d - i, level + 1))
    new.append(-(c0 * fam.g(0, level + 1)))
    return new


def iterated_dual_coefficients(fam: Family, k: int, r: int) -> list[Poly]:
    """Coefficients c_0..c_d with P_{n-k}^{(k)} = sum_j c_j P_{n-k-r-j}^{(k+r+j)}.

    Obtained by applying the dual recurrence r times; c_0 = P_r^{(k)} and
    c_j = -q_{j,r-1} for j >= 1.
    """
    d = fam.d
    state = [ONE] + [ZERO] * d
    for s in range(r):
        state = dual_step(fam, k + s, state)
    return state


def association_expansion_check(coeffs, identity: str, n: int, m: int, r: int) -> Poly:
    """Residual (LHS - RHS) of an association expansion.

    identity:
      ``"split"``  P_{n+m}^{(r)} expanded with P_{n-k}^{(r)} multipliers
      ``"split_swapped"``  same with the roles of n and m interchanged
      ``"dual"``  dual recurrence P_{n+1}^{(r)} = (x - beta_r) P_n^{(r+1)} - ...
      ``"dual_iterated"``  r-fold iterated dual recurrence for P_{n-k}^{(k)} with k = m
    """
    fam = coeffs if isinstance(coeffs, Family) else Family(coeffs)
    d = fam.d
    ident = identity
    if ident == "split":
        return fam(n + m, r) - _split_rhs(fam, n, m, r)
    if ident == "split_swapped":
        return fam(n + m, r) - _split_rhs(fam, m, n, r)
    if ident == "dual":
        rhs = (X - fam.b(r)) * fam(n, r + 1)
        for i in range(1, d + 1):
            rhs = rhs - fam(n - i, r + 1 + i) * fam.g(d - i, r + 1)
        return fam(n + 1, r) - rhs
    if ident == "dual_iterated":
        k = m
        c = iterated_dual_coefficients(fam, k, r)
        rhs = ZERO
        for j in range(d + 1):
            rhs = rhs + c[j] * fam(n - k - r - j, k + r + j)
        res = fam(n - k, k) - rhs
        # leading coefficient must be P_r^{(k)}, the others of degree r-1
        return res + (c[0] - fam(r, k))
    raise BadSelector(f"unknown identity {identity!r}")


def q_closed_form(fam: Family, k: int, r: int, i: int) -> Poly:
    """q_{i,r-1} of the iterated dual recurrence, read off the interchanged expansion."""
    d = fam.d
    out = ZERO
    for j in range(1, d - i + 2):
        p = fam(r - j, k)
        if p:
            out = out + p * fam.g(d - j + 1 - i, r + k - j + 1)
    return out
