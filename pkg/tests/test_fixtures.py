from fractions import Fraction

import pytest
import sympy as sp

from dops.core import generate
from dops.dsym import dsym_generate, hahn_check, hahn_positive
from dops.errors import BadParameter
from dops.fixtures import (d_charlier, exponential, fixture, humbert, humbert_rho, pochhammer, q_appell,
                           q_binomial)
from helpers import exponential_sequence, forward_difference, humbert_sequence, q_derivative, to_sympy


def test_pochhammer_and_q_binomial():
    assert pochhammer(3, 4) == 3 * 4 * 5 * 6
    assert pochhammer(Fraction(1, 2), 2) == Fraction(3, 4)
    assert q_binomial(5, 2, 1) == 10
    q = Fraction(1, 3)
    assert q_binomial(4, 2, q) == (1 + q * q) * (1 + q + q * q)


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("alpha", [Fraction(1), Fraction(3, 2), Fraction(5), Fraction(7, 3)])
def test_humbert_matches_generating_function(d, alpha):
    N = 8
    B = [to_sympy(p) for p in dsym_generate(humbert(d, alpha, 30), N)]
    assert B == humbert_sequence(d, alpha, N)


def test_humbert_degenerate_parameters():
    with pytest.raises(BadParameter):
        humbert_rho(2, -1, 1)
    # the last factor vanishes at alpha = 1 - (n+d+1)/(d+1)
    with pytest.raises(BadParameter):
        humbert(2, Fraction(-1, 3), 10)


@pytest.mark.parametrize("d,a,b", [(2, Fraction(-1, 2), [-1]), (3, Fraction(1, 3), [1, -2]),
                                   (3, Fraction(2), [0, 1])])
def test_exponential_matches_generating_function(d, a, b):
    N = 9
    P = [to_sympy(p) for p in generate(exponential(d, a, b, 20), N)]
    assert P == exponential_sequence(a, b, N)


def test_exponential_degenerate_parameters():
    with pytest.raises(BadParameter):
        exponential(2, 0, [1])
    with pytest.raises(BadParameter):
        exponential(2, 1, [1, 2])
    with pytest.raises(BadParameter):
        exponential(1, 1, [])


@pytest.mark.parametrize("d", [1, 2, 3])
def test_q_appell_property(d):
    q = Fraction(1, 2)
    P = [to_sympy(p) for p in generate(q_appell(d, q, 1, [Fraction(k + 1, 3) for k in range(d)]), 8)]
    for n in range(1, 9):
        qn = sum(sp.Rational(1, 2) ** k for k in range(n))
        assert q_derivative(P[n], q) == sp.expand(qn * P[n - 1])


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("w", [Fraction(1), Fraction(1, 2)])
def test_d_charlier_appell_for_forward_difference(d, w):
    P = [to_sympy(p) for p in generate(d_charlier(d, w, [-2, -3, -1][:d], 20), 8)]
    for n in range(1, 9):
        assert forward_difference(P[n], w) == sp.expand(n * P[n - 1])


def test_humbert_is_hahn_classical():
    assert hahn_positive(hahn_check(humbert(2, Fraction(3, 2), 60), 2))


def test_laguerre_type_is_unavailable():
    with pytest.raises(BadParameter):
        fixture("laguerre_type", d=2, alpha=1)
    with pytest.raises(BadParameter):
        fixture("nope")
