"""Acceptance suite: one test per criterion, full-strength assertions, seeded instances.

Each test records PASS or FAIL through the ``criterion`` fixture; the
summary prints one line per criterion at the end of the run.
"""
import random
import time
from fractions import Fraction

import pytest

from dops import casorati as cas
from dops.checks import run_check
from dops.copoly import co_dilated
from dops.core import associated, generate, random_coeffs, random_rational
from dops.darboux import from_positive_factors, kernel, lu, lu_residual, m_from_values, ul, ul_residual
from dops.dsym import (LINK_SELECTORS, SymData, chain_components, component_coeffs, component_coeffs_fit,
                       decompose, dsym_generate, hahn_check, hahn_positive, link_sweep, recompose)
from dops.errors import Breakdown, ZeroAtOrigin
from dops.fixtures import fixture
from dops.forms import codilated_residual, markov_residual, quasi_detect, uvarov
from dops.poly import X
from dops.zeros import _det, interlacing_check, sturm_real_count, tn_check, zero_structure, zeros_of
from helpers import banded_matrix


def rand(d, seed, horizon=60, positive=False):
    return random_coeffs(d, horizon, random.Random(seed), positive=positive)


def zero_matrix(M):
    return all(not v for row in M for v in row)


def factorable(d, seed, N):
    """First seed at or after ``seed`` whose P_n(0) are nonzero up to N, with its LU."""
    while True:
        c = rand(d, seed)
        try:
            return c, lu(c, N)
        except ZeroAtOrigin:
            seed += 10_000


# 1 ------------------------------------------------------------------------------

def test_c01_casorati_closed_form(criterion):
    with criterion(1, "delta closed form, 240 instances"):
        t0 = time.perf_counter()
        for d in (1, 2, 3):
            for i in range(20):
                c = rand(d, 1000 + 20 * d + i)
                for r in range(4):
                    for n in range(11):
                        assert not cas.verify_delta(c, n, r), (d, i, r, n)
        assert time.perf_counter() - t0 < 60


# 2 ------------------------------------------------------------------------------

SUITE = ["b_recurrence", "f_det", "delta_columns", "delta_companion", "nabla", "nabla_tilde", "nabla_check",
         "R", "R_tilde", "R_check", "transfer", "g_ratio"]


def test_c02_determinant_suite(criterion):
    with criterion(2, "determinant tables, 10 instances each"):
        t0 = time.perf_counter()
        for d in (1, 2, 3):
            for i in range(10):
                seed = 2000 + 10 * d + i
                c = rand(d, seed)
                for name in SUITE:
                    for n in (d + 2, d + 5):
                        for rec in run_check(name, c, n, random.Random(seed)):
                            assert rec["residual_is_zero"], rec
        for i in range(10):
            c = rand(2, 2100 + i)
            for n in range(1, 7):
                for rec in run_check("cd_product", c, n, random.Random(i)):
                    assert rec["residual_is_zero"], rec
        assert time.perf_counter() - t0 < 180


# 3 ------------------------------------------------------------------------------

def test_c03_christoffel_darboux_adjacent_and_multipoint(criterion):
    with criterion(3, "telescoped sum m = n+1; multipoint; confluent"):
        for i in range(5):
            c = rand(2, 3000 + i)
            for n in range(0, 7):
                for k in range(n + 2, 9):
                    assert not cas.verify_cd(c, "sum", n, m=n + 1, k=k), (i, n, k)
        for d in (1, 2, 3):
            c = rand(d, 3100 + d)
            for n in range(7):
                for r in range(2):
                    for kind in ("multipoint", "confluent", "confluent_assoc"):
                        assert not cas.verify_cd(c, kind, n, r=r), (d, n, r, kind)


@pytest.mark.xfail(strict=True, reason="telescoped weighted sum is not an identity for m >= n+2")
def test_c03_christoffel_darboux_wide_gaps(criterion):
    with criterion(3, "telescoped sum m >= n+2"):
        for i in range(5):
            c = rand(2, 3000 + i)
            for n in range(0, 7):
                for m in range(n + 2, 8):
                    for k in range(m + 1, 9):
                        assert not cas.verify_cd(c, "sum", n, m=m, k=k), (i, n, m, k)


# 4 ------------------------------------------------------------------------------

def test_c04_darboux(criterion):
    with criterion(4, "LU/UL windows, m from values, kernel residuals"):
        for d in (1, 2, 3):
            for i in range(5):
                c, f = factorable(d, 4000 + 10 * d + i, 21)
                w = lu(c, 12)
                assert zero_matrix(lu_residual(c, w))
                assert f.m[:20] == m_from_values(c, 20)
                try:
                    g = ul(c, N=12)
                except Breakdown:
                    g = ul(c, free=[Fraction(j + 2) for j in range(d)], N=12)
                assert zero_matrix(ul_residual(c, g))
                k = kernel(c, 15)
                assert k.all_zero()


# 5 ------------------------------------------------------------------------------

def test_c05_worked_example(criterion):
    with criterion(5, "d = 2 constant rho components and first kernel polynomial"):
        d = 2
        for rho in (Fraction(1), Fraction(3, 2)):
            s = SymData.constant(d, rho, 200)
            comps = [component_coeffs(s, i, 12) for i in range(d + 1)]
            for i, ci in enumerate(comps):
                assert ci.b(0) == (i + 1) * rho
                assert ci.g(d - 1, 1) == (i + 1) * (d - Fraction(i, 2)) * rho ** 2
            P = generate(comps[0], 2)
            k = kernel(comps[0], 3)
            ratio = P[2](Fraction(0)) / P[1](Fraction(0))
            assert X * k.K[1] == P[2] - P[1] * ratio
            assert k.K[1] == X - (d + 1) * rho
            assert list(k.K[:4]) == list(generate(comps[d], 3))


# 6 ------------------------------------------------------------------------------

def test_c06_dsymmetric(criterion):
    with criterion(6, "decomposition, links, both coefficient routes, chain"):
        for d in (1, 2, 3):
            rng = random.Random(6000 + d)
            s = SymData(d, [random_rational(rng, positive=True) for _ in range(200)])
            B = list(dsym_generate(s, 40))
            assert recompose(decompose(B, d), d) == B
            for which in LINK_SELECTORS:
                assert all(not r for _, r in link_sweep(s, which, 5)), which
            for i in range(d + 1):
                assert component_coeffs(s, i, 8) == component_coeffs_fit(s, i, 8)
            chain, comps, res = chain_components(s, 6)
            assert chain == comps and not any(res)


# 7 ------------------------------------------------------------------------------

def test_c07_hahn_constant_families(criterion):
    with criterion(7, "constant-rho families and components are Hahn"):
        for d in (2, 3):
            for rho in (Fraction(1), Fraction(3, 2)):
                s = SymData.constant(d, rho, 120)
                targets = [s] + [component_coeffs(s, i, 24) for i in range(d + 1)]
                for obj in targets:
                    reports = hahn_check(obj, 3)
                    assert hahn_positive(reports)
                    assert all(all(v for v in r.coeffs.gamma[0]) for r in reports)


@pytest.mark.xfail(strict=True, reason="Laguerre-type fixture has no recurrence coefficients to test")
def test_c07_hahn_negative_control(criterion):
    with criterion(7, "Laguerre-type negative control"):
        s = fixture("laguerre_type", d=2, alpha=1)
        assert not hahn_positive(hahn_check(s, 3))


# 8 ------------------------------------------------------------------------------

def test_c08_stieltjes(criterion):
    with criterion(8, "Markov product to z^-20, co-dilated to z^-15"):
        for d in (1, 2):
            for i in range(10):
                c = rand(d, 8000 + 10 * d + i, horizon=80)
                for n in range(3):
                    for r in (1, 2):
                        assert markov_residual(c, n, r, N=20).is_zero(), (d, i, n, r)
                lam = random_rational(random.Random(i)) or Fraction(2)
                for nu in range(d):
                    assert codilated_residual(c, nu, lam, N=15).is_zero()
                    assert codilated_residual(c, nu, 1, N=15).is_zero()
                assert co_dilated(c, 1, 1) == c


# 9 ------------------------------------------------------------------------------

def test_c09_uvarov(criterion):
    with criterion(9, "value at c for m <= 10; lambda = 0"):
        for i in range(10):
            d = 1 + i % 3
            c = rand(d, 9000 + i)
            rng = random.Random(9100 + i)
            pt, lam = random_rational(rng), random_rational(rng)
            res = uvarov(c, pt, lam, 10)
            assert all(not v for v in res.at_c)
            assert list(uvarov(c, pt, 0, 10).Q) == list(generate(c, 10))


# 10 -----------------------------------------------------------------------------

def test_c10_zeros_under_positivity(criterion):
    with criterion(10, "20 positive instances"):
        t0 = time.perf_counter()
        for i in range(20):
            d = 1 + i % 3
            n = 2 + i % 11
            c = from_positive_factors(d, n + 2 * d + 4, random.Random(10_000 + i))
            assert all(v > 0 for v in c.beta) and all(v > 0 for row in c.gamma for v in row)
            zs = zeros_of(c, n, tol_real=1e-9, tol_gap=1e-8)
            assert zs.all_real() and all(v > 0 for v in zs.reals()) and zs.simple()
            assert sturm_real_count(c, n) == n
            assert interlacing_check(zs, zeros_of(c, n - 1))
            assert interlacing_check(zs, zeros_of(associated(c, 1), n - 1))
        assert time.perf_counter() - t0 < 30


# 11 -----------------------------------------------------------------------------

def test_c11_tn_oracle_equivalence(criterion):
    with criterion(11, "200 banded 6x6 matrices"):
        tn = 0
        for i in range(200):
            rng = random.Random(11_000 + i)
            M = banded_matrix(rng)
            while not _det(M):
                M = banded_matrix(rng)
            a = bool(tn_check(M, "oracle"))
            assert bool(tn_check(M, "constructive")) == a, i
            tn += a
        assert 0 < tn < 200


# 12 -----------------------------------------------------------------------------

def test_c12_multiplicity_bound(criterion):
    with criterion(12, "100 instances, mixed signs"):
        for i in range(100):
            d = 1 + i % 3
            c = rand(d, 12_000 + i, horizon=30, positive=(i % 2 == 1))
            for n in range(1, 11):
                s = zero_structure(c, n)
                assert s.max_multiplicity <= d and s.common_gcd_degree == 0, (i, n)


# 13 -----------------------------------------------------------------------------

def test_c13_quasi_orthogonality(criterion):
    with criterion(13, "kernel sequence is quasi of order 1"):
        for i in range(10):
            d = 1 + i % 3
            c, _ = factorable(d, 13_000 + i, 14)
            k = kernel(c, 10)
            q = quasi_detect(list(generate(c, 10)), list(k.K), d)
            assert q.l == 1
            assert all(q.a[n][j] == k.factor.L[n][n - j] for n in range(11) for j in range(len(q.a[n])))
