from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from thetablocks import series
from thetablocks.series import PrecisionError, Series, pack, unpack

PREC = 6

monomials = st.tuples(st.integers(0, 4 * 24 - 1).map(lambda n: F(n, 24)),
                      st.integers(-6, 6).map(lambda z: (F(z, 2),)),
                      st.integers(-5, 5))
polys = st.lists(monomials, max_size=6).map(lambda items: Series.from_items(items, 1, PREC))


@given(st.lists(st.integers(-(1 << 30), 1 << 30), min_size=1, max_size=4))
def test_pack_roundtrip(vec):
    assert unpack(pack(vec), len(vec)) == tuple(vec)


@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b).agrees(b * a)
    assert (a * (b + c)).agrees(a * b + a * c)
    assert (a - a).is_zero()


@given(polys)
def test_division_inverts_multiplication(a):
    b = series.theta(1, PREC)
    assert (a * b).divide(b, PREC - 1).agrees(a, PREC - 1)


@given(polys)
def test_json_roundtrip(a):
    assert Series.from_json(a.to_json()) == a


def test_theta_leading_terms():
    th = series.theta(1, 2)
    assert th.coeff(F(1, 8), (F(1, 2),)) == 1
    assert th.coeff(F(1, 8), (F(-1, 2),)) == -1
    assert th.coeff(F(9, 8), (F(3, 2),)) == -1


@pytest.mark.parametrize("prec", [1, 10, 30])
def test_kernel_identities(prec):
    assert series.eta(prec).agrees(series.eta_product(prec))
    assert series.theta(1, prec).agrees(series.theta_product(1, prec))
    assert series.quintuple(1, prec).agrees(series.quintuple_product(1, prec))


def test_quintuple_quotient():
    assert series.quintuple(1, 12).agrees(series.quintuple_quotient(1, 12))


def test_theta_periodicity():
    assert series.check_periodicity(series.theta(1, 10), F(1, 2))
    assert series.check_periodicity(series.theta(3, 10), F(9, 2))


def test_u_scale_and_scale_q():
    th = series.theta(1, 4)
    assert th.u_scale(2).coeff(F(1, 8), (1,)) == 1
    assert th.scale_q(2).coeff(F(1, 4), (F(1, 2),)) == 1
    assert th.scale_q(F(1, 2)).coeff(F(1, 16), (F(1, 2),)) == 1


def test_precision_is_enforced():
    th = series.theta(1, 2)
    with pytest.raises(PrecisionError):
        th.coeff(3, (F(1, 2),))


def test_zeta_exponent_validation():
    with pytest.raises(ValueError):
        Series.monomial(0, (F(1, 3),))


def test_constant_term_and_specialize():
    two = Series.from_items([(0, (1, -1), 2), (1, (1, 0), 3), (1, (0, 0), 5)], 2, 3)
    assert two.constant_term_in(1).coeff(0, (1,)) == 0
    assert two.constant_term_in(1).coeff(1, (1,)) == 3
    assert two.specialize((1, 1)).coeff(0, (0,)) == 2
