from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from thetablocks import order
from thetablocks.blocks import ThetaQuotient

quotients = st.builds(
    lambda th, e: ThetaQuotient(th, e),
    st.dictionaries(st.integers(1, 9), st.integers(-3, 4), min_size=1, max_size=4),
    st.integers(-12, 12))
points = st.fractions(min_value=0, max_value=3, max_denominator=60)
vectors = st.lists(st.integers(1, 12), min_size=1, max_size=6)


def test_bernoulli_B():
    assert order.bernoulli_B(0) == F(1, 8)
    assert order.bernoulli_B(F(1, 2)) == 0
    assert order.bernoulli_B(F(1, 3)) == order.bernoulli_B(F(-1, 3)) == order.bernoulli_B(F(4, 3))


@given(quotients, quotients)
def test_profile_additivity(a, b):
    assert (a * b).profile() == a.profile() + b.profile()


@given(quotients, st.integers(1, 6), points)
def test_u_scale_law(a, l, x):
    assert order.order_at(a.u_scale(l), x) == order.order_at(a, l * x)


@given(quotients)
def test_profile_is_continuous(a):
    assert a.profile().is_continuous()


@given(vectors)
def test_minimizer_routes_agree(a):
    th = {}
    for v in a:
        th[v] = th.get(v, 0) + 1
    res = order.minimize_block(th)
    s, k = order.s_and_k(a)
    assert 24 * res.min_value == s
    assert k == (len(a) - s) / 2
    if res.witness_n is not None:
        assert F(3 * order.pair_form_S(sorted(a), res.witness_n), sum(v * v for v in a)) == s


@given(vectors, st.lists(st.integers(-9, 9), min_size=6, max_size=6))
def test_lagrange_identity(a, n):
    assert order.pair_form_S(a, n[:len(a)]) >= 0


def test_single_theta():
    assert order.s_and_k([1]) == (0, F(1, 2))


def test_s_and_k_rejects_zero():
    with pytest.raises(ValueError):
        order.s_and_k([1, 0])


def test_classify_value():
    assert order.classify_value(F(1, 24)) == "cusp"
    assert order.classify_value(F(0)) == "holomorphic"
    assert order.classify_value(F(-1, 24)) == "neither"
