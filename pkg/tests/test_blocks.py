from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from thetablocks import blocks
from thetablocks.blocks import ThetaQuotient, expand, format_block, parse_block

PHI_2_37 = "eta:-6 1:3 2:3 3:2 4:1 5:1"


def test_block_notations_agree():
    a = parse_block(PHI_2_37)
    assert parse_block("theta[-6; 1^3,2^3,3^2,4,5]") == a
    assert parse_block("1,1,1,2,2,2,3,3,4,5/eta:6") == a
    assert parse_block(format_block(a)) == a


def test_meta_of_weight_two_block():
    b = parse_block(PHI_2_37)
    assert b.meta() == (2, 37, 0)
    assert b.classify() == "cusp"


def test_parse_error():
    with pytest.raises(ValueError):
        parse_block("1,x")


@given(st.dictionaries(st.integers(1, 12), st.integers(-3, 3), max_size=5))
def test_divisor_roundtrip(th):
    tq = ThetaQuotient(th)
    assert blocks.from_divisor(blocks.divisor(tq)) == ThetaQuotient(tq.theta)


def test_cusp_support():
    b = parse_block(PHI_2_37)
    m = b.index()
    s = expand(b, 6)
    assert not s.is_zero()
    for q, (r,), c in s.items():
        assert 4 * q * m - r * r > 0


def test_holomorphic_support():
    b = parse_block("eta:-6 1:4 2:3 3:2 4:1")
    assert b.classify() == "holomorphic"
    m = b.index()
    assert all(4 * q * m - r * r >= 0 for q, (r,), _ in expand(b, 5).items())


def test_quotient_expansion_matches_product():
    num, den = parse_block("2:1"), parse_block("1:1")
    lhs = expand(num / den, 6) * expand(den, 6)
    assert lhs.agrees(expand(num, 6), 5)


def test_expand_needs_eta_denominator_dividing_24():
    with pytest.raises(ValueError):
        expand(ThetaQuotient({1: 1}, F(1, 5)), 3)


def test_gtb_counts_match_enumeration():
    for twice in range(1, 21):
        m = F(twice, 2)
        gtb = blocks.enumerate_gtb(m)
        assert len(gtb) == blocks.count_gtb(m)
        assert all(g.min_order() == 0 for g in gtb)
        assert all(g.index() == m for g in gtb)


def test_enumerate_theta_blocks_index_37():
    found = blocks.enumerate_theta_blocks(2, 37, 0, lengths=[10])
    assert [c for _, c in found] == ["cusp"]
    assert found[0][0] == parse_block(PHI_2_37)


def test_block_polynomial_roundtrip():
    tq = parse_block("eta:-2 2:1 3:-1")
    assert blocks.BlockPolynomial.from_quotient(tq).to_quotient() == tq
