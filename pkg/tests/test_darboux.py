import random

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from dops.core import RecCoeffs, generate
from dops.darboux import (bidiag_factor, coeffs_from_matrix, darboux_chain, from_positive_factors, jacobi_matrix,
                          kernel, kernel_dual_matrix, lu, lu_residual, m_from_values, ul,
                          ul_corecursive_residuals, ul_residual)
from dops.errors import Breakdown, ZeroAtOrigin
from helpers import instance, naive_sequence, x


def _zero(M):
    return all(not v for row in M for v in row)


def test_jacobi_matrix_bands():
    c = RecCoeffs(2, [1, 2, 3, 4], [[5, 6, 7], [8, 9, 10]])
    J = jacobi_matrix(c, 4)
    assert [J[i][i] for i in range(4)] == [1, 2, 3, 4]
    assert all(J[i][i + 1] == 1 for i in range(3))
    assert [J[i + 1][i] for i in range(3)] == [8, 9, 10]
    assert [J[i + 2][i] for i in range(2)] == [5, 6]
    assert coeffs_from_matrix(J, 2, rows=4) == c.truncate(4)


def test_characteristic_polynomial_is_P_n():
    c = instance(2, 4, 20)
    J = sp.Matrix(jacobi_matrix(c, 6)).applyfunc(lambda v: sp.Rational(str(v)))
    assert sp.expand(J.charpoly(x).as_expr()) == naive_sequence(c, 6)[6]


@given(st.integers(1, 3), st.integers(0, 10_000))
@settings(max_examples=20, deadline=None)
def test_lu_ul_reconstruct(d, seed):
    c = instance(d, seed, 30)
    try:
        f = lu(c, 12)
    except ZeroAtOrigin:
        return
    assert _zero(lu_residual(c, f))
    vals = [p.subs(x, 0) for p in naive_sequence(c, 12)]
    assert [sp.Rational(str(v)) for v in f.m] == [-vals[n] / vals[n - 1] for n in range(1, 13)]
    try:
        g = ul(c, N=12)
    except Breakdown:
        return
    assert _zero(ul_residual(c, g))
    assert not any(ul_corecursive_residuals(c, g))


def test_zero_at_origin():
    # P_1 = x has P_1(0) = 0
    c = RecCoeffs(1, [0] * 6, [[1] * 6])
    with pytest.raises(ZeroAtOrigin):
        lu(c, 3)
    with pytest.raises(ZeroAtOrigin):
        m_from_values(c, 3)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_kernel_polynomials(d):
    c = instance(d, 20 + d, 40)
    k = kernel(c, 10)
    assert k.all_zero()
    P = naive_sequence(c, 11)
    for n in range(10):
        ratio = P[n + 1].subs(x, 0) / P[n].subs(x, 0)
        assert sp.expand(x * sum(cf * x ** i for i, cf in enumerate(map(sp.Rational, map(str, k.K[n].coeffs))))) \
            == sp.expand(P[n + 1] - ratio * P[n])
    assert not any(kernel_dual_matrix(c, 6).residuals)


@pytest.mark.parametrize("d", [2, 3])
def test_bidiagonal_factor_and_chain(d):
    c = instance(d, 5, 40)
    f = lu(c, 10)
    bf = bidiag_factor(f.L, d)
    assert bf.product() == f.L
    links, bf2, res = darboux_chain(c, 6)
    assert not any(res)
    assert list(links[0].seq) == list(generate(c, 6))


def test_positive_factor_instances():
    for seed in range(5):
        c = from_positive_factors(2, 14, random.Random(seed))
        assert all(v > 0 for v in c.beta)
        assert all(v > 0 for row in c.gamma for v in row)
        assert bidiag_factor(lu(c, 10).L, 2).positive
