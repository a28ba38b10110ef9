"""d-symmetric sequences B_{n+d+1} = x B_{n+d} - rho_{n+1} B_n and their d+1 components.

Component s collects B_{(d+1)n+s}(x) = x^s B^s_n(x^{d+1}); component polynomials
live in the variable t = x^{d+1}.  rho_m is 1-based; any rho with index < 1 is
read as zero, which is what makes the multi-index sums valid for small n.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Sequence

from .core import PolySeq, QuasiReport, RecCoeffs, expand_in_basis, extract_recurrence, generate
from .darboux import darboux_chain
from .errors import BadSelector, MissingCoefficient, IndexOutOfRange, InconsistentFit, MissingRho, NotDSymmetric, RegularityViolation
from .forms import moments
from .poly import X, ZERO, Poly, to_fraction


@dataclass(frozen=True)
class SymData:
    d: int
    rho: tuple

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("order d must be positive")
        rho = tuple(to_fraction(r) for r in self.rho)
        for m, r in enumerate(rho, start=1):
            if not r:
                raise RegularityViolation(f"rho_{m} = 0")
        object.__setattr__(self, "rho", rho)

    @classmethod
    def constant(cls, d: int, value, count: int) -> "SymData":
        return cls(d, [value] * count)

    def r(self, m: int) -> Fraction:
        """rho_m, zero for m < 1."""
        if m < 1:
            return Fraction(0)
        if m > len(self.rho):
            raise MissingRho(f"rho_{m} not available (stored 1..{len(self.rho)})")
        return self.rho[m - 1]

    def as_coeffs(self) -> RecCoeffs:
        """The symmetric family as a (d+2)-term recurrence: only gamma^0 = rho survives."""
        H = len(self.rho) + self.d
        return RecCoeffs(self.d, [0] * H, [list(self.rho)] + [[0] * (H - self.d + nu) for nu in range(1, self.d)])

    def to_json(self) -> dict:
        return {"d": self.d, "rho": [str(r) for r in self.rho]}

    @classmethod
    def from_json(cls, obj: dict) -> "SymData":
        return cls(int(obj["d"]), obj["rho"])


def dsym_generate(s: SymData, N: int) -> PolySeq:
    d = s.d
    B = [X ** n for n in range(min(N, d) + 1)]
    for n in range(N - d):
        B.append(X * B[n + d] - B[n] * s.r(n + 1))
    return PolySeq(tuple(B), check=False)


def decompose(B: Sequence[Poly], d: int) -> list[PolySeq]:
    """Components B^0..B^d of a d-symmetric sequence."""
    comps: list[list[Poly]] = [[] for _ in range(d + 1)]
    for n, p in enumerate(B):
        s = n % (d + 1)
        coeffs = []
        for e, c in enumerate(p.coeffs):
            if not c:
                continue
            if e % (d + 1) != s:
                raise NotDSymmetric(f"B_{n} has a nonzero coefficient at exponent {e}")
        for e in range(s, p.degree + 1, d + 1):
            coeffs.append(p[e])
        comps[s].append(Poly(coeffs))
    return [PolySeq(tuple(c), check=False) for c in comps]


def recompose(components: Sequence[Sequence[Poly]], d: int) -> list[Poly]:
    out = []
    n = 0
    while True:
        q, s = divmod(n, d + 1)
        if q >= len(components[s]):
            return out
        out.append(components[s][q].substitute_power(d + 1).shift(s))
        n += 1


# ---------------------------------------------------------------- component recurrences

def _sd8_term(s: SymData, i: int, n: int, k: int) -> Fraction:
    """Coefficient of B^i_{n+1-k} in x B^i_n (k >= 1), as a sum over nondecreasing tuples."""
    d = s.d
    total = Fraction(0)
    for tup in combinations_with_replacement(range(1, d - k + 3), k):
        term = Fraction(1)
        for j, ij in enumerate(tup, start=1):
            term *= s.r((n - j) * (s.d + 1) + ij + j + i)
            if not term:
                break
        total += term
    return total


def component_horizon(s: SymData, i: int) -> int:
    """Number of beta's obtainable for component i from the stored rho."""
    H = 0
    while True:
        try:
            _sd8_term(s, i, H, 1)
        except MissingRho:
            return H
        H += 1


def component_coeffs(s: SymData, i: int, terms: int | None = None) -> RecCoeffs:
    """Recurrence of component i from the multi-index sums.

    x B^i_n = B^i_{n+1} + sum_{k=1}^{d+1} c_k(n) B^i_{n+1-k}, so beta_n = c_1(n)
    and gamma^{d+1-k}_{n+2-k} = c_k(n).
    """
    d = s.d
    if not 0 <= i <= d:
        raise IndexOutOfRange(f"component index {i} outside 0..{d}")
    H = component_horizon(s, i) if terms is None else terms
    beta = [_sd8_term(s, i, n, 1) for n in range(H)]
    gamma = []
    for nu in range(d):
        k = d + 1 - nu
        # gamma^nu_L comes from n = L + k - 2
        gamma.append([_sd8_term(s, i, L + k - 2, k) for L in range(1, H - d + nu + 1)])
    return RecCoeffs(d, beta, gamma)


def component_coeffs_fit(s: SymData, i: int, terms: int) -> RecCoeffs:
    """Recurrence of component i read off the decomposed sequence."""
    d = s.d
    if not 0 <= i <= d:
        raise IndexOutOfRange(f"component index {i} outside 0..{d}")
    B = dsym_generate(s, (d + 1) * terms + i)
    comp = decompose(B, d)[i]
    out = extract_recurrence(list(comp)[: terms + 1], d)
    if isinstance(out, QuasiReport):
        raise InconsistentFit(f"component {i} is not a d-OPS on the first {terms} terms")
    return out


def component_coeffs_checked(s: SymData, i: int, terms: int) -> RecCoeffs:
    """Both routes, truncated to ``terms`` betas; raises InconsistentFit on any difference."""
    a = component_coeffs(s, i, terms)
    b = component_coeffs_fit(s, i, terms)
    if a != b:
        raise InconsistentFit(f"component {i}: summed and fitted coefficients differ")
    return a


def gamma0_product(s: SymData, i: int, n: int) -> Fraction:
    """prod_{v=n}^{d+n} rho_{(v-1)d+n+i}."""
    out = Fraction(1)
    for v in range(n, s.d + n + 1):
        out *= s.r((v - 1) * s.d + n + i)
    return out


# ---------------------------------------------------------------- links

LINK_SELECTORS = ("adjacent", "skip", "kernel_expansion", "power", "kernel_link", "origin_ratio")


def _comp(comps, i: int, n: int) -> Poly:
    if n < 0:
        return ZERO
    return comps[i][n]


def verify_links(s: SymData, which: str, n: int = 0, i: int = 0, k: int = 0, r: int = 1):
    """Residual of one link between components (or of the power relation on B).

    * ``adjacent``: B^i_{n+1} = B^{i+1}_{n+1} + rho_{(d+1)n+i+2} B^{i+1}_n, 0 <= i < d.
    * ``skip``: B^i_{n+1} = sum over 2 <= j_1 < ... < j_t <= k+1 of
      rho_{(d+1)n+i+j_1} rho_{(d+1)(n-1)+i+j_2} ... B^{i+k}_{n+1-t}.
    * ``kernel_expansion``: t B^d_n = B^i_{n+1} + sum over 1 <= j_0 < ... < j_t <= i+1 of
      rho_{(d+1)n+j_0} ... rho_{(d+1)(n-t)+j_t} B^i_{n-t}.
    * ``power``: x^r B_n = B_{n+r} + sum over 1 <= i_1 <= ... <= i_k <= r-k+1 of
      rho_{n+i_1-d} ... rho_{n+i_k-kd} B_{n+r-k(d+1)}.
    * ``kernel_link``: t B^d_n = B^0_{n+1} + rho_{(d+1)n+1} B^0_n.
    * ``origin_ratio``: rho_{(d+1)n+1} + B^0_{n+1}(0)/B^0_n(0), a scalar.
    """
    d = s.d
    if which == "power":
        B = dsym_generate(s, n + r)
        at = lambda m: B[m] if m >= 0 else ZERO  # noqa: E731
        rhs = at(n + r)
        for kk in range(1, r + 1):
            for tup in combinations_with_replacement(range(1, r - kk + 2), kk):
                c = Fraction(1)
                for j, ij in enumerate(tup, start=1):
                    c *= s.r(n + ij - j * d)
                rhs = rhs + at(n + r - kk * (d + 1)) * c
        return X ** r * B[n] - rhs
    comps = decompose(dsym_generate(s, (d + 1) * (n + 2) + d), d)
    T = X
    if which == "adjacent":
        if not 0 <= i < d:
            raise IndexOutOfRange(f"adjacent link needs 0 <= i < {d}")
        return comps[i][n + 1] - comps[i + 1][n + 1] - _comp(comps, i + 1, n) * s.r((d + 1) * n + i + 2)
    if which == "skip":
        if not (0 <= i and i + k <= d):
            raise IndexOutOfRange("skip link needs 0 <= i <= i+k <= d")
        rhs = comps[i + k][n + 1]
        for t in range(1, k + 1):
            for js in combinations(range(2, k + 2), t):
                c = Fraction(1)
                for q, j in enumerate(js):
                    c *= s.r((d + 1) * (n - q) + i + j)
                rhs = rhs + _comp(comps, i + k, n + 1 - t) * c
        return comps[i][n + 1] - rhs
    if which == "kernel_expansion":
        if not 0 <= i <= d:
            raise IndexOutOfRange(f"component index {i} outside 0..{d}")
        rhs = comps[i][n + 1]
        for t in range(0, i + 1):
            for js in combinations(range(1, i + 2), t + 1):
                c = Fraction(1)
                for q, j in enumerate(js):
                    c *= s.r((d + 1) * (n - q) + j)
                rhs = rhs + _comp(comps, i, n - t) * c
        return T * comps[d][n] - rhs
    if which == "kernel_link":
        return T * comps[d][n] - comps[0][n + 1] - comps[0][n] * s.r((d + 1) * n + 1)
    if which == "origin_ratio":
        zero = Fraction(0)
        return Poly.const(s.r((d + 1) * n + 1) + comps[0][n + 1](zero) / comps[0][n](zero))
    raise BadSelector(f"unknown link {which!r}; choose from {LINK_SELECTORS}")


def link_sweep(s: SymData, which: str, N: int) -> list[tuple[dict, Poly]]:
    """All parameter combinations with n <= N for one link; returns (params, residual) pairs."""
    d = s.d
    out = []
    for n in range(N + 1):
        if which == "adjacent":
            grid = [dict(n=n, i=i) for i in range(d)]
        elif which == "skip":
            grid = [dict(n=n, i=i, k=k) for i in range(d + 1) for k in range(d - i + 1)]
        elif which == "kernel_expansion":
            grid = [dict(n=n, i=i) for i in range(d + 1)]
        elif which == "power":
            grid = [dict(n=n, r=r) for r in range(1, d + 3)]
        elif which in ("kernel_link", "origin_ratio"):
            grid = [dict(n=n)]
        else:
            raise BadSelector(f"unknown link {which!r}; choose from {LINK_SELECTORS}")
        for p in grid:
            out.append((p, verify_links(s, which, **p)))
    return out


def chain_free_parameters(s: SymData) -> list[list[Fraction]]:
    """Free bidiagonal entries that make the Darboux chain of component 0 land on the components.

    Stage s has free rows 1..d-s-1; the factor equal to the link matrix from
    component s to s+1 carries rho_{(m-1)(d+1)+s+2} in row m.
    """
    d = s.d
    return [[s.r((m - 1) * (d + 1) + st + 2) for m in range(1, d - st)] for st in range(d)]


def chain_components(s: SymData, N: int):
    """(chain sequences, components) truncated to degree N, for comparison."""
    d = s.d
    c0 = component_coeffs(s, 0)
    links, _, res = darboux_chain(c0, N, free=chain_free_parameters(s))
    comps = decompose(dsym_generate(s, (d + 1) * N + d), d)
    return [list(l.seq) for l in links], [list(c)[: N + 1] for c in comps], res


# ---------------------------------------------------------------- Hahn property

def normalized_derivative(seq: Sequence[Poly]) -> list[Poly]:
    """P'_{n+1}/(n+1) for n = 0..len-2."""
    return [seq[n + 1].deriv() * Fraction(1, n + 1) for n in range(len(seq) - 1)]


def nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {v : rows v = 0} by exact row reduction."""
    A = [list(r) for r in rows]
    pivots = []
    rank = 0
    for c in range(ncols):
        p = next((i for i in range(rank, len(A)) if A[i][c]), None)
        if p is None:
            continue
        A[rank], A[p] = A[p], A[rank]
        inv = 1 / A[rank][c]
        A[rank] = [v * inv for v in A[rank]]
        for i in range(len(A)):
            if i != rank and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[rank])]
        pivots.append(c)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(A, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


@dataclass
class OrderReport:
    """One derivative order of a Hahn check.

    ``positive``: the order-``order`` derivative sequence is a d-OPS.
    ``lam``: lam[n][v] with S_n = sum_v lam[n][v] S'_{n-v} (S' one order higher);
    ``lam_residuals``: expansion coefficients beyond v = d+1;
    ``lam_formula_residuals``: differences from the closed form in terms of
    both recurrences; ``pi``: a degree <= 2 polynomial with
    pi S_n' in span(S_{n+1}, S_n, S_{n-1}), or None.
    """

    order: int
    positive: bool
    coeffs: object
    lam: list = field(default_factory=list)
    lam_residuals: list = field(default_factory=list)
    lam_formula_residuals: list = field(default_factory=list)
    pi: Poly | None = None
    structure: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "hahn_positive": self.positive,
            "combination_residual_is_zero": not self.lam_residuals and not self.lam_formula_residuals,
            "structure_pi": None if self.pi is None else self.pi.to_strings(),
        }


def _lambda_formula(c: RecCoeffs, cd: RecCoeffs, n: int, v: int, d: int) -> Fraction:
    """Coefficient of S'_{n-v} in S_n from the two recurrences."""
    if v == 0:
        return Fraction(1)
    if v == 1:
        return n * (c.b(n) - cd.b(n - 1))
    j = v - 1
    g = lambda co, nu, L: co.g(nu, L) if L >= 1 else Fraction(0)  # noqa: E731
    return (n - j) * g(c, d - j, n + 1 - j) - n * g(cd, d - j, n - j)


def _structure_relation(S: list[Poly], d: int):
    """Find pi of degree <= 2 with pi S_n' in span(S_{n+1}, S_n, S_{n-1}) for all testable n."""
    N = len(S) - 1
    rows = []
    for n in range(1, N):
        dn = S[n].deriv()
        cols = []
        for e in range(3):
            prod = dn.shift(e)
            c = expand_in_basis(prod, S[: prod.degree + 1]) if prod else []
            cols.append(c + [Fraction(0)] * (n + 2 - len(c)))
        for k in range(0, n - 1):
            rows.append([cols[e][k] for e in range(3)])
    basis = nullspace(rows, 3)
    if not basis:
        return None, []
    pi = Poly(basis[0])
    if pi.degree < 0:
        return None, []
    out = []
    for n in range(1, N):
        prod = pi * S[n].deriv()
        c = expand_in_basis(prod, S[: prod.degree + 1]) if prod else []
        c = c + [Fraction(0)] * (n + 2 - len(c))
        out.append((n, c[n + 1], c[n], c[n - 1]))
    if any(not cn for (_, _, _, cn) in out):
        return None, []
    return pi, out


def hahn_check(obj, max_order: int = 3, N: int | None = None) -> list[OrderReport]:
    """Derivative sequences of orders 0..max_order, each tested for d-orthogonality.

    For each order whose sequence and successor are both d-OPS, the
    (d+2)-term combination S_n = sum_{v<=d+1} lam_{n,v} S'_{n-v} is solved and
    checked, and a degree <= 2 structure polynomial is searched for.
    """
    coeffs = obj.as_coeffs() if isinstance(obj, SymData) else obj
    d = coeffs.d
    if N is None:
        N = min(coeffs.horizon, 4 * (d + 2) + max_order + 2)
    seqs = [list(generate(coeffs, N))]
    for _ in range(max_order + 1):
        seqs.append(normalized_derivative(seqs[-1]))
    fits = [extract_recurrence(S, d) for S in seqs]
    reports = []
    for j in range(max_order + 1):
        S, Sd = seqs[j], seqs[j + 1]
        pos = isinstance(fits[j], RecCoeffs)
        rep = OrderReport(j, pos, fits[j])
        if pos:
            for n in range(len(Sd)):
                c = expand_in_basis(S[n], Sd[: n + 1])
                lam = [c[n - v] for v in range(n + 1)]
                rep.lam.append(lam[: d + 2])
                if any(lam[d + 2:]):
                    rep.lam_residuals.append((n, lam[d + 2:]))
            if isinstance(fits[j + 1], RecCoeffs):
                c, cd = fits[j], fits[j + 1]
                for n in range(len(Sd)):
                    for v in range(min(n, d + 1) + 1):
                        try:
                            val = _lambda_formula(c, cd, n, v, d)
                        except MissingCoefficient:
                            continue
                        if val != rep.lam[n][v]:
                            rep.lam_formula_residuals.append((n, v, rep.lam[n][v] - val))
            rep.pi, rep.structure = _structure_relation(S, d)
        reports.append(rep)
    return reports


def hahn_positive(reports: list[OrderReport]) -> bool:
    return all(r.positive and not r.lam_residuals and not r.lam_formula_residuals for r in reports)


# ---------------------------------------------------------------- Pearson-type connection

@dataclass
class PearsonLine:
    r: int
    a: Fraction | None
    b: Fraction | None
    consistent: bool
    normalization: Fraction | None
    literal_sum: Fraction | None


def pearson_dsym_check(s: SymData, N: int = 12) -> list[PearsonLine]:
    """Fit the connection between the duals of B and of its normalized derivative.

    Lines: w~_r = b w_r + a x w_{r+1} (r <= d-2) and w~_{d-1} = a x^2 w_0 + b w_{d-1}.
    Each (a, b) is solved from two independent moment equations and then
    checked on all moments up to N.  ``normalization`` is the order-r moment
    of the right side, which must equal 1; ``literal_sum`` is b + a.
    """
    d = s.d
    c = s.as_coeffs()
    mw = moments(c, N + 2)
    A = normalized_derivative(list(generate(c, N + d + 3)))
    ca = extract_recurrence(A, d)
    if isinstance(ca, QuasiReport):
        raise InconsistentFit("derivative sequence is not a d-OPS")
    mt = moments(ca, N)
    out = []
    for r in range(d):
        if r <= d - 2:
            eqs = [(mw.get(r, n), mw.get(r + 1, n + 1), mt.get(r, n)) for n in range(N + 1)]
        else:
            eqs = [(mw.get(d - 1, n), mw.get(0, n + 2), mt.get(d - 1, n)) for n in range(N + 1)]
        sol = None
        for p in range(len(eqs)):
            for q in range(p + 1, len(eqs)):
                (b1, a1, y1), (b2, a2, y2) = eqs[p], eqs[q]
                det = b1 * a2 - b2 * a1
                if det:
                    sol = ((b1 * y2 - b2 * y1) / det, (y1 * a2 - y2 * a1) / det)
                    break
            if sol:
                break
        if sol is None:
            out.append(PearsonLine(r, None, None, False, None, None))
            continue
        a, b = sol
        ok = all(b * wb + a * wa == y for wb, wa, y in eqs)
        norm = b * eqs[r][0] + a * eqs[r][1]
        out.append(PearsonLine(r, a, b, ok, norm, a + b))
    return out
