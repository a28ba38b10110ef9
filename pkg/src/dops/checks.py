"""Named identity checks over one descriptor, for sweeps and the command line.

Each check maps (coeffs, n, rng) to a list of (params, residual) pairs; a
residual is anything ``is_zero`` understands.  The rng only feeds
perturbations and sample parameters, so a seed fixes the whole run.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable

from . import casorati as cas
from .copoly import Perturbation, co_dilated_closed_form, co_modified, co_recursive_closed_form
from .core import RecCoeffs, association_expansion_check, random_rational
from .darboux import kernel, kernel_dual_matrix, lu, lu_residual, m_from_values, ul, ul_residual
from .errors import BadSelector, Breakdown, ZeroAtOrigin
from .forms import BRACKET_SELECTORS, Series, bracket_check, codilated_residual, markov_residual, uvarov
from .poly import Poly


def is_zero(res) -> bool:
    if isinstance(res, bool):
        return res
    if isinstance(res, (Poly, Fraction, int)):
        return not res
    if isinstance(res, Series):
        return res.is_zero()
    if isinstance(res, (list, tuple)):
        return all(is_zero(r) for r in res)
    raise TypeError(f"cannot judge residual of type {type(res).__name__}")


def residual_terms(res) -> list:
    """Nonzero residual content as strings; a Poly keeps its low-to-high array."""
    if isinstance(res, Poly):
        return [str(c) for c in res.coeffs] if res else []
    if isinstance(res, (Fraction, int)):
        return [str(res)] if res else []
    if isinstance(res, Series):
        return [f"z^-{k}:{v}" for k, v in sorted(res.coeffs.items()) if v]
    if isinstance(res, (list, tuple)):
        out = []
        for i, r in enumerate(res):
            out += [f"[{i}]{t}" for t in residual_terms(r)]
        return out
    return []


def random_perturbation(d: int, rng: random.Random, k: int | None = None) -> Perturbation:
    k = rng.randint(0, 2) if k is None else k
    mu = [random_rational(rng) for _ in range(d)]
    eta = [[random_rational(rng) if k + 1 + j - d + nu >= 1 else 0 for j in range(d)] for nu in range(1, d)]
    lam = random_rational(rng)
    while not lam:
        lam = random_rational(rng)
    return Perturbation(k, mu, eta, lam)


def _delta(c, n, rng):
    return [(dict(r=r), cas.verify_delta(c, n, r)) for r in range(4)]


def _delta_companion(c, n, rng):
    out = []
    for r in range(4):
        W, prod = cas.delta_companion(c, n, r)
        direct = cas.delta_direct(c, n, r)
        out.append((dict(r=r), [cas.det(W) - direct, prod - direct]))
    return out


def _delta_columns(c, n, rng):
    return [(dict(r=r, i=i), cas.verify_D(c, n, r, i)) for r in range(1, 4) for i in range(r) if n - r + 1 >= 0]


def _b_recurrence(c, n, rng):
    if n < c.d + 1:
        return []
    return [(dict(r=r), cas.verify_B_recurrence(c, n, r)) for r in range(3)]


def _f_det(c, n, rng):
    d = c.d
    out = []
    for r in range(3):
        m = [n + i for i in range(1, d + 1)]
        out.append((dict(r=r, m=m), cas.verify_F(c, n, r, m)))
        m = sorted(rng.sample(range(n + 1, n + d + 4), d))
        out.append((dict(r=r, m=m), cas.verify_F(c, n, r, m)))
    return out


def _nabla(which):
    def run(c, n, rng):
        d = c.d
        p = random_perturbation(d, rng)
        # closed forms exist from level k+1 on, and at level 0 when k = 0
        levels = ([0] if p.k == 0 else []) + list(range(p.k + 1, p.k + 4))
        out = []
        for r in levels:
            if n - r - d + 1 < 0:
                continue
            # the dilated gamma_1^0 reaches the columns only from n = 1 on
            if r == 0 and n == 0 and not which.endswith(("nabla", "R")):
                continue
            if which.startswith("nabla"):
                out.append((dict(r=r, k=p.k), cas.verify_nabla(c, p, n, r, which)))
            else:
                m = [n + i for i in range(1, d + 1)]
                out.append((dict(r=r, k=p.k, m=m), cas.verify_nabla(c, p, n, r, which, m=m)))
        return out
    return run


def _g_ratio(c, n, rng):
    if n < 1:
        return []
    return [(dict(shifts=list(range(c.d + 1))), cas.verify_nabla(c, None, n, 0, "G"))]


def _transfer(c, n, rng):
    if n < c.d:
        return []
    return [(dict(p=p), cas.transfer_Tp(c, n, p)[1]) for p in range(4)]


def _cd(kind):
    def run(c, n, rng):
        if kind == "product":
            return [(dict(m=m, k=k), cas.verify_cd(c, kind, n, m=m, k=k))
                    for m in range(n + 1, 9) for k in range(m + 1, 9)]
        if kind == "sum":
            # the telescoped sum holds for m = n+1 only
            return [(dict(m=n + 1, k=k), cas.verify_cd(c, kind, n, m=n + 1, k=k)) for k in range(n + 2, 9)]
        return [(dict(r=r), cas.verify_cd(c, kind, n, r=r)) for r in range(2)]
    return run


def _lin_dep(c, n, rng):
    d = c.d
    shifts = list(range(d + 2))
    N = max(n, max(shifts) - d)
    return [(dict(N=N, shifts=shifts), cas.linear_dependence_det(c, N, shifts))]


def _assoc(ident):
    def run(c, n, rng):
        # r dual steps need degree n - m >= r
        return [(dict(m=m, r=r), association_expansion_check(c, ident, n, m, r))
                for m in range(0, 3) for r in range(0, 3) if ident != "dual_iterated" or n - m >= r]
    return run


def _brackets(c, n, rng):
    return [(dict(which=w), [lhs - rhs for _, lhs, rhs in bracket_check(c, w, K=max(1, n)).rows])
            for w in BRACKET_SELECTORS]


def _markov(c, n, rng):
    return [(dict(r=r), markov_residual(c, n, r, N=20)) for r in range(1, 3)]


def _codilated_series(c, n, rng):
    lam = random_rational(rng) or Fraction(1)
    return [(dict(nu=nu, lam=str(lam)), codilated_residual(c, nu, lam, N=15)) for nu in range(c.d)]


def _perturbations(c, n, rng):
    p = random_perturbation(c.d, rng)
    lam = p.lam
    out = [(dict(kind="co_recursive", k=p.k), co_recursive_closed_form(c, p, n)[1])]
    out.append((dict(kind="co_dilated", k=p.k + 1), co_dilated_closed_form(c, p.k + 1, lam, n)))
    out.append((dict(kind="co_modified", k=p.k), co_modified(c, p, n)[1]))
    return out


def _darboux(c, n, rng):
    N = max(n, 2)
    try:
        f = lu(c, N)
    except ZeroAtOrigin:
        return []
    out = [(dict(part="lu"), lu_residual(c, f))]
    out.append((dict(part="m_values"), [a - b for a, b in zip(f.m, m_from_values(c, N))]))
    try:
        g = ul(c, N=N)
        out.append((dict(part="ul"), ul_residual(c, g)))
    except Breakdown:
        pass
    k = kernel(c, N)
    out.append((dict(part="kernel"), k.expansion_residuals + k.division_residuals))
    out.append((dict(part="kernel_dual"), kernel_dual_matrix(c, N).residuals))
    return out


def _uvarov(c, n, rng):
    cpt = random_rational(rng)
    lam = random_rational(rng)
    try:
        res = uvarov(c, cpt, lam, max(n, 1))
    except ZeroDivisionError:
        return []
    return [(dict(c=str(cpt), lam=str(lam)), res.at_c)]


CHECKS: dict[str, Callable] = {
    "delta": _delta,
    "delta_companion": _delta_companion,
    "delta_columns": _delta_columns,
    "b_recurrence": _b_recurrence,
    "f_det": _f_det,
    "nabla": _nabla("nabla"),
    "nabla_tilde": _nabla("nabla_tilde"),
    "nabla_check": _nabla("nabla_check"),
    "R": _nabla("R"),
    "R_tilde": _nabla("R_tilde"),
    "R_check": _nabla("R_check"),
    "g_ratio": _g_ratio,
    "transfer": _transfer,
    "cd_product": _cd("product"),
    "cd_sum": _cd("sum"),
    "cd_multipoint": _cd("multipoint"),
    "cd_confluent": _cd("confluent"),
    "cd_confluent_assoc": _cd("confluent_assoc"),
    "linear_dependence": _lin_dep,
    "split": _assoc("split"),
    "split_swapped": _assoc("split_swapped"),
    "dual": _assoc("dual"),
    "dual_iterated": _assoc("dual_iterated"),
    "brackets": _brackets,
    "markov": _markov,
    "codilated_series": _codilated_series,
    "perturbations": _perturbations,
    "darboux": _darboux,
    "uvarov": _uvarov,
}


def run_check(name: str, coeffs: RecCoeffs, n: int, rng: random.Random) -> list[dict]:
    """Records {identity, params, residual_is_zero, residual_coeffs} for one descriptor."""
    try:
        fn = CHECKS[name]
    except KeyError:
        raise BadSelector(f"unknown identity {name!r}; choose from {sorted(CHECKS)}") from None
    out = []
    for params, res in fn(coeffs, n, rng):
        out.append({"identity": name, "params": dict(params, n=params.get("n", n)),
                    "residual_is_zero": is_zero(res), "residual_coeffs": residual_terms(res)})
    return out
