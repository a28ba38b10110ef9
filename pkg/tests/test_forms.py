import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dops.core import RecCoeffs, generate, random_rational
from dops.darboux import kernel
from dops.errors import BadParameter, BadSelector, NotQuasi
from dops.forms import (BRACKET_SELECTORS, Series, bracket_check, codilated_residual, markov_residual, moments,
                        moments_by_jacobi, positive_definite, quasi_detect, quasi_reduce, stieltjes_relations,
                        uvarov)
from dops.poly import X
from helpers import instance

seeds = st.integers(0, 10_000)


def test_gaussian_moments():
    # monic Hermite: u_0 is the normal law with variance 1/2
    c = RecCoeffs(1, [0] * 10, [[Fraction(n, 2) for n in range(1, 11)]])
    row = moments(c, 6).rows[0]
    assert row == (1, 0, Fraction(1, 2), 0, Fraction(3, 4), 0, Fraction(15, 8))


@given(st.integers(1, 3), seeds)
@settings(max_examples=20, deadline=None)
def test_moment_routes_agree_and_duality(d, seed):
    c = instance(d, seed, 30)
    mt = moments(c, 12)
    assert mt == moments_by_jacobi(c, 12)
    assert not mt.duality_defects(list(generate(c, 12)))


@pytest.mark.parametrize("which", BRACKET_SELECTORS)
@pytest.mark.parametrize("d", [1, 2, 3])
def test_brackets(which, d):
    assert bracket_check(instance(d, 3 * d, 40), which, K=3).ok


@pytest.mark.parametrize("d", [1, 2])
def test_series_relations(d):
    c = instance(d, 17, 50)
    assert markov_residual(c, 2, 1, N=12).is_zero()
    assert codilated_residual(c, 0, Fraction(2, 3), N=12).is_zero()
    assert stieltjes_relations(c, "codilated", N=10, lam=1).is_zero()
    with pytest.raises(BadSelector):
        stieltjes_relations(c, "nope")


def test_series_reciprocal():
    s = Series.constant(2) - Series.polynomial(X) * Series.constant(0)
    assert (s * s.reciprocal() - Series.constant(1)).truncate(8).is_zero()


@pytest.mark.parametrize("d", [1, 2, 3])
def test_uvarov(d):
    c = instance(d, 5, 40)
    rng = random.Random(d)
    res = uvarov(c, random_rational(rng), random_rational(rng), 8)
    assert all(not v for v in res.at_c)
    same = uvarov(c, Fraction(1, 3), 0, 8)
    assert list(same.Q) == list(generate(c, 8))
    if d == 1:
        assert not res.defects


@pytest.mark.parametrize("d", [1, 2, 3])
def test_quasi_detect_kernel(d):
    c = instance(d, 8, 40)
    k = kernel(c, 10)
    q = quasi_detect(list(generate(c, 10)), list(k.K), d)
    assert q.l == 1
    assert all(q.a[n][j] == k.factor.L[n][n - j] for n in range(11) for j in range(len(q.a[n])))


def test_quasi_detect_rejects_unrelated():
    c = instance(1, 1, 30)
    P = list(generate(c, 8))
    Q = [X ** n for n in range(9)]
    with pytest.raises(NotQuasi):
        quasi_detect(P, Q, 1)


def test_quasi_reduce_residuals():
    c = instance(2, 4, 40)
    rng = random.Random(0)
    table = {n: [random_rational(rng) for _ in range(3)] for n in range(3, 9)}
    _, res = quasi_reduce(c, table, 3)
    assert not any(res.values())
    with pytest.raises(BadParameter):
        quasi_reduce(c, table, 2)


def test_positive_definite():
    assert positive_definite(RecCoeffs(1, [0] * 4, [[1] * 4]))
    assert not positive_definite(RecCoeffs(1, [0] * 4, [[1, -1, 1, 1]]))
