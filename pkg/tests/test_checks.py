import random

import pytest
from hypothesis import given, settings, strategies as st

from dops.checks import CHECKS, is_zero, residual_terms, run_check
from dops.errors import BadSelector
from dops.forms import Series
from dops.poly import Poly
from helpers import instance


@given(st.sampled_from(sorted(set(CHECKS) - {"cd_product", "cd_sum"})), st.integers(1, 3), st.integers(0, 10_000),
       st.integers(0, 6))
@settings(max_examples=60, deadline=None)
def test_every_registered_identity_vanishes(name, d, seed, n):
    c = instance(d, seed, 60)
    for rec in run_check(name, c, n, random.Random(seed)):
        assert rec["residual_is_zero"], rec


def test_residual_helpers():
    assert is_zero([Poly([]), 0, Series.constant(0)])
    assert not is_zero(Poly([0, 1]))
    assert residual_terms([Poly([1, 2]), 0]) == ["[0]1", "[0]2"]
    with pytest.raises(TypeError):
        is_zero("x")


def test_unknown_identity():
    with pytest.raises(BadSelector):
        run_check("nope", instance(1, 0), 2, random.Random(0))
