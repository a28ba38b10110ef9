import random
from fractions import Fraction
from math import factorial

import pytest
import sympy as sp

from dops import casorati as cas
from dops.checks import random_perturbation
from dops.core import RecCoeffs
from dops.errors import BadParameter, BadSelector, UnsupportedD
from helpers import instance, naive_sequence


def _assoc_table(c, N, R):
    return {r: naive_sequence(c, N, r) for r in range(R + 1)}


@pytest.mark.parametrize("d", [1, 2, 3])
def test_delta_against_sympy_determinant(d):
    c = instance(d, 40 + d, 30)
    tab = _assoc_table(c, 12, 3 + d)
    for r in range(3):
        for n in range(d, 7):
            M = sp.Matrix([[tab[r + j][n - j + t] for j in range(d + 1)] for t in range(d + 1)])
            assert sp.expand(M.det()) == sp.Rational(str(cas.delta_closed(c, n, r)))


def test_hermite_casoratian_is_factorial():
    # d = 1 with gamma_n = n/2: the Casoratian is prod gamma = n!/2^n
    c = RecCoeffs(1, [0] * 12, [[Fraction(n, 2) for n in range(1, 13)]])
    for n in range(1, 8):
        assert cas.delta_direct(c, n, 0) == Fraction(factorial(n), 2 ** n)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_determinant_identities(d):
    c = instance(d, 7 * d, 40)
    rng = random.Random(d)
    for n in range(d + 1, 8):
        for r in range(1, 3):
            assert not cas.verify_B_recurrence(c, n, r)
            assert not cas.verify_F(c, n, r, [n + i for i in range(1, d + 1)])
            for i in range(r):
                assert not cas.verify_D(c, n, r, i)
        assert not cas.transfer_Tp(c, n, 2)[1]
        assert not cas.verify_nabla(c, None, n, 0, "G")
    p = random_perturbation(d, rng, k=1)
    for which in ("nabla", "nabla_tilde", "nabla_check"):
        assert not cas.verify_nabla(c, p, d + 4, 2, which)


def test_linear_dependence_start_index():
    c = instance(2, 1, 30)
    shifts = [0, 1, 2, 3]
    assert not cas.linear_dependence_det(c, 2, shifts)
    with pytest.raises(BadParameter):
        cas.linear_dependence_det(c, 0, shifts)


def test_christoffel_darboux_family():
    c = instance(2, 9, 40)
    for n in range(1, 5):
        assert not cas.verify_cd(c, "product", n, m=n + 1, k=n + 3)
        assert not cas.verify_cd(c, "sum", n, m=n + 1, k=n + 3)
        for kind in ("multipoint", "confluent", "confluent_assoc"):
            assert not cas.verify_cd(c, kind, n, r=1)
    with pytest.raises(UnsupportedD):
        cas.verify_cd(instance(3, 0, 30), "product", 2, m=3, k=4)


def test_selector_errors():
    c = instance(1, 0, 20)
    with pytest.raises(BadSelector):
        cas.verify_nabla(c, None, 3, 1, "nope")
    with pytest.raises(BadParameter):
        cas.verify_D(c, 3, 0, 0)
