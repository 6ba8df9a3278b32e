import pytest
from hypothesis import given, strategies as st

from thetablocks import span
from thetablocks.blocks import parse_block

quads = st.lists(st.integers(-7, 7), min_size=4, max_size=4).filter(lambda q: sum(q) % 2 == 0)


@given(quads)
def test_three_term_identity(q):
    assert span.weierstrass_holds(*q, 6)


def test_three_term_needs_even_sum():
    with pytest.raises(ValueError):
        span.weierstrass_triple(1, 2, 3, 5)


def test_nullspace_exact():
    from fractions import Fraction as F
    basis = span.nullspace([[F(1), F(2), F(3)], [F(2), F(4), F(6)]], 3)
    assert len(basis) == 2 and span.rank([[F(1), F(2), F(3)]], 3) == 1


def test_j291_relation():
    A, B, C = (parse_block(span.J291_BLOCKS[k]) for k in "ABC")
    assert span.kernel([A, B, C]) == [[1, 1, -1]]
    assert set(span.cusp_blocks(91)) == {A, B, C}


def test_independent_blocks_have_no_relation():
    bl = [parse_block("eta:-6 1:3 2:3 3:2 4:1 5:1")]
    assert span.kernel(bl) == []


def test_kernel_requires_common_meta():
    with pytest.raises(ValueError):
        span.kernel([parse_block("1:8"), parse_block("1:6 2:2")])


def test_census_small():
    assert span.census([37, 49]) == {37: (0, 1), 49: (3, 0)}
