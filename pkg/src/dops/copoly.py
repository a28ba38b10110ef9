"""Finite perturbations of the recurrence: co-recursive, co-dilated and co-modified sequences.

Perturbation window at level k: the equations producing P_{k+1}..P_{k+d}.
In the equation producing P_{k+1+j} (0 <= j < d):

* beta_{k+j} becomes beta_{k+j} + mu[j];
* the band-nu coefficient (1 <= nu <= d-1), which is gamma_L^nu with
  L = k+1+j-d+nu, gets eta[nu-1][j] added.  Slots with L < 1 do not exist
  and must carry zero.

gamma^0 is never touched by the co-recursive part.  Dilation multiplies one
gamma^0 entry by lambda; the complementary scalar 1 - lambda is recomputed
wherever needed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Family, RecCoeffs, generate
from .errors import BadParameter, ZeroLambda
from .poly import Poly, to_fraction


@dataclass(frozen=True)
class Perturbation:
    k: int
    mu: tuple
    eta: tuple = ()
    lam: Fraction = Fraction(1)

    def __post_init__(self):
        if self.k < 0:
            raise BadParameter("level k must be nonnegative")
        object.__setattr__(self, "mu", tuple(to_fraction(m) for m in self.mu))
        object.__setattr__(self, "eta", tuple(tuple(to_fraction(e) for e in row) for row in self.eta))
        object.__setattr__(self, "lam", to_fraction(self.lam))

    @property
    def d(self) -> int:
        return len(self.mu)

    def eta_at(self, nu: int, j: int) -> Fraction:
        if nu - 1 < len(self.eta) and j < len(self.eta[nu - 1]):
            return self.eta[nu - 1][j]
        return Fraction(0)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "mu": [str(m) for m in self.mu],
            "eta": [[str(e) for e in row] for row in self.eta],
            "lambda": str(self.lam),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Perturbation":
        return cls(int(obj["k"]), obj["mu"], obj.get("eta", []), obj.get("lambda", "1"))


def _check_shape(coeffs: RecCoeffs, p: Perturbation) -> None:
    d = coeffs.d
    if len(p.mu) != d:
        raise BadParameter(f"mu needs {d} entries, got {len(p.mu)}")
    if len(p.eta) > max(d - 1, 0):
        raise BadParameter(f"eta has at most {d - 1} rows")
    for nu in range(1, d):
        for j in range(d):
            L = p.k + 1 + j - d + nu
            if L < 1 and p.eta_at(nu, j):
                raise BadParameter(f"eta[{nu - 1}][{j}] targets the nonexistent gamma_{L}^{nu}")


def co_recursive(coeffs: RecCoeffs, p: Perturbation) -> RecCoeffs:
    """Descriptor of the co-recursive sequence at level p.k (p.lam is ignored)."""
    _check_shape(coeffs, p)
    d, k = coeffs.d, p.k
    beta = list(coeffs.beta)
    gamma = [list(row) for row in coeffs.gamma]
    for j in range(d):
        beta[k + j] = coeffs.b(k + j) + p.mu[j]
        for nu in range(1, d):
            L = k + 1 + j - d + nu
            if L >= 1:
                gamma[nu][L - 1] = coeffs.g(nu, L) + p.eta_at(nu, j)
    return RecCoeffs(d, beta, gamma)


def co_dilated(coeffs: RecCoeffs, k: int, lam) -> RecCoeffs:
    """gamma_k^0 replaced by lam * gamma_k^0 (k >= 1)."""
    lam = to_fraction(lam)
    if not lam:
        raise ZeroLambda("dilation factor must be nonzero")
    if k < 1:
        raise BadParameter("dilation level starts at 1")
    gamma = [list(row) for row in coeffs.gamma]
    gamma[0][k - 1] = lam * coeffs.g(0, k)
    return RecCoeffs(coeffs.d, coeffs.beta, gamma)


def co_recursive_A(coeffs: RecCoeffs, p: Perturbation) -> list[Poly]:
    """A_1..A_d with P^c_n = P_n - sum_i A_i P_{n-k-i}^{(k+i)}.

    Built inductively: A_s collects the perturbation applied in the equation
    for P_{k+s}, each perturbed coefficient multiplying the closed-form
    expression of the already known P^c_m.
    """
    _check_shape(coeffs, p)
    d, k = coeffs.d, p.k
    fam = Family(coeffs)
    A: list[Poly] = []

    def closed(m: int) -> Poly:
        out = fam(m)
        for i, a in enumerate(A, start=1):
            out = out - a * fam(m - k - i, k + i)
        return out

    for s in range(1, d + 1):
        j = s - 1
        a = closed(k + s - 1) * p.mu[j]
        for nu in range(1, d):
            e = p.eta_at(nu, j)
            if e:
                # band nu multiplies P_{m-1-(d-nu)} in the equation for P_m
                a = a + closed(k + s - 1 - (d - nu)) * e
        A.append(a)
    return A


def co_recursive_closed_form(coeffs: RecCoeffs, p: Perturbation, N: int):
    """(A, residuals) where residuals[n] = P^c_n - (P_n - sum A_i P^{(k+i)}_{n-k-i}) for n <= N."""
    A = co_recursive_A(coeffs, p)
    fam = Family(coeffs)
    pc = generate(co_recursive(coeffs, p), N)
    res = []
    for n in range(N + 1):
        rhs = fam(n)
        if n > p.k:
            for i, a in enumerate(A, start=1):
                rhs = rhs - a * fam(n - p.k - i, p.k + i)
        res.append(pc[n] - rhs)
    return A, res


def co_dilated_closed_form(coeffs: RecCoeffs, k: int, lam, N: int) -> list[Poly]:
    """Residuals of P~_n = P_n + gamma_k^0 (1 - lam) P_{k-1} P_{n-d-k}^{(d+k)}."""
    lam = to_fraction(lam)
    fam = Family(coeffs)
    pt = generate(co_dilated(coeffs, k, lam), N)
    c = coeffs.g(0, k) * (1 - lam)
    d = coeffs.d
    return [pt[n] - (fam(n) + fam(k - 1) * fam(n - d - k, d + k) * c) for n in range(N + 1)]


def co_modified(coeffs: RecCoeffs, p: Perturbation, N: int | None = None):
    """Co-recursive window at level k combined with dilation of gamma_{k+1}^0.

    Returns ``(descriptor, residuals)``; residuals cover the combined closed form
    and the relation (co-modified) = (co-recursive) + (co-dilated at k+1) - (original)
    for every n <= N.
    """
    if not p.lam:
        raise ZeroLambda("dilation factor must be nonzero")
    out = co_dilated(co_recursive(coeffs, p), p.k + 1, p.lam)
    if N is None:
        N = min(out.horizon, 12)
    d, k = coeffs.d, p.k
    fam = Family(coeffs)
    A = co_recursive_A(coeffs, p)
    chk = generate(out, N)
    qc = generate(co_recursive(coeffs, p), N)
    pt = generate(co_dilated(coeffs, k + 1, p.lam), N)
    c = coeffs.g(0, k + 1) * (1 - p.lam)
    res = []
    for n in range(N + 1):
        rhs = fam(n)
        if n > k:
            for i, a in enumerate(A, start=1):
                rhs = rhs - a * fam(n - k - i, k + i)
            rhs = rhs + fam(k) * fam(n - d - k - 1, d + k + 1) * c
        r = chk[n] - rhs
        r2 = chk[n] - (qc[n] + pt[n] - fam(n))
        res.append(r if r else r2)
    return out, res


def all_zero(residuals) -> bool:
    return all(not r for r in residuals)
