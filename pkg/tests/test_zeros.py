import math
import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from dops.core import RecCoeffs, generate
from dops.darboux import from_positive_factors, jacobi_matrix
from dops.errors import NonRealRoots
from dops.zeros import (Root, ZeroSet, interlacing_check, oscillation_check, refine, spectra_for_interlacing,
                        sturm_real_count, tn_check, zero_structure, zeros_of)
from helpers import all_minors_nonnegative, banded_matrix, instance, naive_sequence, x


def test_chebyshev_second_kind_zeros():
    # beta = 0, gamma = 1/4: P_n is U_n(x)/2^n with zeros cos(k pi/(n+1))
    c = RecCoeffs.constant(1, 0, [Fraction(1, 4)], 20)
    zs = zeros_of(c, 9)
    ref = sorted(math.cos(k * math.pi / 10) for k in range(1, 10))
    assert zs.all_real() and all(r.refined for r in zs.roots)
    assert max(abs(a - b) for a, b in zip(zs.reals(), ref)) < 1e-12


@pytest.mark.parametrize("d", [1, 2, 3])
def test_zeros_match_sympy_roots(d):
    c = instance(d, 2 + d, 30)
    zs = zeros_of(c, 7)
    ref = [complex(r) for r in sp.Poly(naive_sequence(c, 7)[7], x).nroots(n=30)]
    got = [complex(r.re, r.im) for r in zs.roots]
    for z in got:
        assert min(abs(z - w) for w in ref) < 1e-8 * max(1, abs(z))


def test_refine_polishes_perturbed_root():
    p = generate(RecCoeffs.constant(1, 0, [Fraction(1, 4)], 10), 3)[3]
    w, ok = refine(p, complex(0.7, 0.0))
    assert ok and abs(w.real - math.sqrt(2) / 2) < 1e-14


def test_reals_refuses_complex_spectrum():
    zs = ZeroSet([Root(0.0, 1.0, True), Root(0.0, -1.0, True)])
    assert not zs.all_real()
    with pytest.raises(NonRealRoots):
        zs.reals()


def test_interlacing_examples():
    a = ZeroSet([Root(v, 0.0, True) for v in (1.0, 3.0, 5.0)])
    b = ZeroSet([Root(v, 0.0, True) for v in (2.0, 4.0)])
    bad = ZeroSet([Root(v, 0.0, True) for v in (2.0, 6.0)])
    assert interlacing_check(a, b) and interlacing_check(b, a)
    assert not interlacing_check(a, bad)
    with pytest.raises(ValueError):
        interlacing_check(a, a)


def test_tn_examples():
    assert tn_check([[1, 1], [1, 1]])
    assert not tn_check([[0, 1], [1, 0]])
    assert tn_check([[2, 1, 0], [1, 2, 1], [0, 1, 2]])
    assert not tn_check([[1, 2], [3, 4]])
    assert not oscillation_check([[1, 0], [0, 1]])
    assert not oscillation_check([[1, 1], [1, 1]])
    assert oscillation_check([[2, 1], [1, 2]])


@given(st.integers(0, 10_000))
@settings(max_examples=15, deadline=None)
def test_tn_modes_agree_with_sympy_minors(seed):
    rng = random.Random(seed)
    M = banded_matrix(rng, 4)
    if not sp.Matrix(M).det():
        return
    ref = all_minors_nonnegative(M)
    assert bool(tn_check(M, "constructive")) == ref
    assert bool(tn_check(M, "oracle")) == ref


@pytest.mark.parametrize("d", [1, 2, 3])
def test_positive_instance_certificates(d):
    c = from_positive_factors(d, 14, random.Random(d))
    J = jacobi_matrix(c, 8)
    assert oscillation_check(J)
    assert sturm_real_count(c, 8) == 8
    for kind in ("prev", "assoc1"):
        a, b = spectra_for_interlacing(c, 8, kind)
        assert interlacing_check(a, b)


def test_double_root_allowed_up_to_d():
    # d = 2 with beta_0 = beta_1 = 0 and gamma_1^1 = 0 gives P_2 = x^2
    c = RecCoeffs(2, [0, 0, 1, 1, 1], [[1, 1, 1], [0, 1, 1, 1]])
    st2 = zero_structure(c, 2)
    assert st2.max_multiplicity == 2 and st2.ok(2)


@given(st.integers(1, 3), st.integers(0, 10_000), st.integers(1, 9))
@settings(max_examples=30, deadline=None)
def test_multiplicity_bound(d, seed, n):
    s = zero_structure(instance(d, seed, 20), n)
    assert s.ok(d)


@given(st.integers(0, 10_000), st.integers(1, 9))
@settings(max_examples=20, deadline=None)
def test_nodal_bound_first_order(seed, n):
    rng = random.Random(seed)
    c = RecCoeffs(1, [Fraction(rng.randint(-9, 9), 2) for _ in range(12)],
                  [[Fraction(rng.randint(1, 9), 2) for _ in range(12)]])
    s = zero_structure(c, n)
    assert s.nodal_bound == n and s.nodal_ok
