"""Named example families, coefficients from closed forms at rational parameters."""
from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Sequence

from .core import RecCoeffs
from .dsym import SymData
from .errors import BadParameter, RegularityViolation
from .poly import to_fraction


def pochhammer(a, k: int) -> Fraction:
    """Rising factorial (a)_k."""
    a = to_fraction(a)
    out = Fraction(1)
    for i in range(k):
        out *= a + i
    return out


def q_binomial(n: int, k: int, q) -> Fraction:
    """Gaussian binomial [n choose k]_q; ordinary binomial at q = 1."""
    q = to_fraction(q)
    if k < 0 or k > n:
        return Fraction(0)
    num = den = Fraction(1)
    for i in range(k):
        num *= 1 - q ** (n - i) if q != 1 else n - i
        den *= 1 - q ** (i + 1) if q != 1 else i + 1
    return num / den


def q_appell(d: int, q, beta0, gamma1: Sequence, horizon: int = 40) -> RecCoeffs:
    """beta_n = q^n beta_0, gamma^i_{n+1} = [n+d-i choose d-i]_q q^n gamma^i_1."""
    q, beta0 = to_fraction(q), to_fraction(beta0)
    if not q:
        raise BadParameter("q must be nonzero")
    if len(gamma1) != d:
        raise BadParameter(f"need {d} initial gamma values, got {len(gamma1)}")
    g1 = [to_fraction(g) for g in gamma1]
    if not g1[0]:
        raise BadParameter("gamma^0_1 must be nonzero")
    beta = [q ** n * beta0 for n in range(horizon)]
    gamma = [[q_binomial(n + d - i, d - i, q) * q ** n * g1[i] for n in range(horizon)] for i in range(d)]
    return RecCoeffs(d, beta, gamma)


def d_charlier(d: int, w, betas: Sequence, horizon: int = 40) -> RecCoeffs:
    """beta_n = w n - beta_0, gamma^i_{n+1} = -beta_i (n+1)_{d-i}.

    The Pochhammer length d-i is the one that makes the family Appell for
    the forward difference of step w; d-1 fails already for d = 1.
    """
    w = to_fraction(w)
    if len(betas) != d:
        raise BadParameter(f"need {d} parameters beta_0..beta_{d - 1}, got {len(betas)}")
    bs = [to_fraction(b) for b in betas]
    if not bs[0]:
        raise BadParameter("beta_0 must be nonzero")
    beta = [w * n - bs[0] for n in range(horizon)]
    gamma = [[-bs[i] * pochhammer(n + 1, d - i) for n in range(horizon)] for i in range(d)]
    return RecCoeffs(d, beta, gamma)


def humbert_rho(d: int, alpha, m: int) -> Fraction:
    """rho_m for the monic Humbert family, m >= 1."""
    alpha = to_fraction(alpha)
    n = m - 1
    den = pochhammer(alpha + n, d + 1)
    if not den:
        raise BadParameter(f"(alpha+{n})_{d + 1} vanishes for alpha = {alpha}")
    return pochhammer(n + 1, d + 1) / den * (Fraction((d + 1)) * (alpha - 1) / (n + d + 1) + 1)


def humbert(d: int, alpha, count: int = 60) -> SymData:
    rho = [humbert_rho(d, alpha, m) for m in range(1, count + 1)]
    for m, r in enumerate(rho, start=1):
        if not r:
            raise BadParameter(f"rho_{m} vanishes for alpha = {alpha}")
    return SymData(d, rho)


def exponential_bands(d: int, a, b: Sequence, horizon: int = 40) -> tuple[list, list]:
    """Raw (beta, gamma) of the family generated by exp(xt/(1-at) + sum_{1<=k<d} b_k t^k/k!).

    ``b`` lists b_1..b_{d-1}; b_i is zero from i = d on.
    """
    a = to_fraction(a)
    bb = [Fraction(0)] + [to_fraction(v) for v in b]
    if len(bb) > d:
        raise BadParameter(f"only b_1..b_{d - 1} enter, got {len(b)} values")

    def bk(i: int) -> Fraction:
        return bb[i] if 0 <= i < len(bb) else Fraction(0)

    beta = [-(2 * a * n + bk(1)) for n in range(horizon)]
    gamma = [[Fraction(0)] * horizon for _ in range(d)]
    for L in range(1, horizon + 1):
        gamma[d - 1][L - 1] = L * (a * a * (L - 1) + 2 * a * bk(1) - bk(2))
    for k in range(2, d + 1):
        for L in range(1, horizon + 1):
            n = L + k - 1
            gamma[d - k][L - 1] = -comb(n, k) * (bk(k + 1) - 2 * a * k * bk(k) + a * a * k * (k - 1) * bk(k - 1))
    return beta, gamma


def exponential(d: int, a, b: Sequence, horizon: int = 40) -> RecCoeffs:
    """The exponential generating-function family as a d-OPS.

    gamma^0 vanishes identically when a = 0 (the Appell reduction then has
    fewer than d+2 terms) and when d = 1; both raise BadParameter.
    """
    beta, gamma = exponential_bands(d, a, b, horizon)
    try:
        return RecCoeffs(d, beta, gamma)
    except RegularityViolation as exc:
        raise BadParameter(f"not a d-OPS for these parameters: {exc}") from exc


def laguerre_type(d: int, alpha, horizon: int = 40) -> RecCoeffs:
    """Placeholder for the Laguerre-type family known only through x P_n' = n P_n + ...

    Its recurrence coefficients are not available in closed form here, so
    no descriptor can be produced.
    """
    raise BadParameter("Laguerre-type family: recurrence coefficients not available")


FIXTURES = {
    "q_appell": q_appell,
    "d_charlier": d_charlier,
    "humbert": humbert,
    "exponential": exponential,
    "laguerre_type": laguerre_type,
}


def fixture(name: str, **params):
    try:
        f = FIXTURES[name]
    except KeyError:
        raise BadParameter(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
    return f(**params)
