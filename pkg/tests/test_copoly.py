import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dops.checks import random_perturbation
from dops.copoly import (Perturbation, all_zero, co_dilated, co_dilated_closed_form, co_modified, co_recursive,
                         co_recursive_A, co_recursive_closed_form)
from dops.core import Family, generate
from dops.errors import BadParameter, ZeroLambda
from dops.poly import Poly
from helpers import instance, naive_sequence, to_sympy

seeds = st.integers(0, 10_000)


@given(st.integers(1, 3), seeds)
@settings(max_examples=20, deadline=None)
def test_closed_forms_vanish(d, seed):
    rng = random.Random(seed)
    c = instance(d, seed, 30)
    p = random_perturbation(d, rng)
    assert all_zero(co_recursive_closed_form(c, p, 10)[1])
    assert all_zero(co_dilated_closed_form(c, p.k + 1, p.lam, 10))
    assert all_zero(co_modified(c, p, 10)[1])


@given(st.integers(1, 3), seeds)
@settings(max_examples=15, deadline=None)
def test_perturbed_descriptor_generates_direct_recurrence(d, seed):
    c = instance(d, seed, 20)
    p = random_perturbation(d, random.Random(seed))
    pc = co_recursive(c, p)
    assert [to_sympy(q) for q in generate(pc, 8)] == naive_sequence(pc, 8)
    # below the window nothing changes
    assert list(generate(pc, p.k)) == list(generate(c, p.k))


def test_neutral_perturbations_are_identity():
    c = instance(2, 5, 20)
    assert co_recursive(c, Perturbation(1, [0, 0], [[0, 0]])) == c
    assert co_dilated(c, 3, 1) == c


def test_first_order_corecursive_shift():
    # d = 1, k = 0: P^c_n = P_n - mu P^{(1)}_{n-1}
    c = instance(1, 2, 20)
    mu = Fraction(3, 2)
    p = Perturbation(0, [mu])
    assert co_recursive_A(c, p) == [Poly([mu])]
    fam = Family(c)
    pc = generate(co_recursive(c, p), 6)
    assert all(pc[n] == fam(n) - fam(n - 1, 1) * mu for n in range(7))


def test_parameter_errors():
    c = instance(2, 0, 20)
    with pytest.raises(ZeroLambda):
        co_dilated(c, 1, 0)
    with pytest.raises(BadParameter):
        co_dilated(c, 0, 2)
    with pytest.raises(BadParameter):
        co_recursive(c, Perturbation(0, [1, 1], [[1, 0]]))
    with pytest.raises(BadParameter):
        co_recursive(c, Perturbation(0, [1]))


def test_perturbation_json_round_trip():
    p = Perturbation(2, ["1/2", -3], [["1", "0"]], "5/7")
    assert Perturbation.from_json(p.to_json()) == p
