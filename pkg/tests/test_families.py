from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from thetablocks import families
from thetablocks.blocks import expand
from thetablocks.families import AnSpec, QuarkSpec

pairs = st.tuples(st.integers(1, 6), st.integers(1, 6))


@given(pairs)
def test_quark_expansion(ab):
    q = QuarkSpec(*ab)
    P = F(1, 3) + 4
    direct = expand(q.block(), P)
    assert families.quark_expansion(q, P).agrees(direct)
    assert families.quark_expansion_symmetric(q, P).agrees(direct)


@given(pairs)
def test_quark_meta_and_rule(ab):
    q = QuarkSpec(*ab)
    b = q.block()
    assert b.weight() == 1 and b.index() == q.index
    assert q.is_cusp == (b.classify() == "cusp")


def test_quark_rejects_nonpositive():
    with pytest.raises(ValueError):
        QuarkSpec(0, 1)


@pytest.mark.parametrize("a", [(0, 1, 3), (2, -1, 5), (0, 1, 2, 4)])
def test_an_expansion_and_determinant(a):
    s = AnSpec(a)
    assert families.an_expansion(s, 5).agrees(expand(s.block(), 5))
    assert families.an_determinant(s, 3).agrees(families.an_expansion(s, 3))


@given(st.lists(st.integers(-8, 8), min_size=3, max_size=5, unique=True))
def test_cusp_supplement(a):
    s = AnSpec(a)
    cls = s.block().classify()
    assert cls != "neither"
    assert families.cusp_supplement(s) == (cls == "cusp")
    assert s.block().index() == s.index


def test_an_requires_distinct_entries():
    with pytest.raises(ValueError):
        AnSpec((0, 0, 1)).block()
    with pytest.raises(ValueError):
        AnSpec((0, 1))


@given(pairs)
def test_b2_g2_holomorphic(ab):
    a, b = ab
    assert families.b2_block(a, b).classify() != "neither"
    assert families.g2_block(a, b).classify() != "neither"
    assert families.family_dual_bound("B2", a, b) == F(2, 3)
    assert families.family_dual_bound("G2", a, b) == F(4, 3)


def test_g2_dual_matrix_symmetric():
    M = families.g2_dual_matrix()
    assert all(M[i][j] == M[j][i] for i in range(4) for j in range(4))


def test_named_blocks():
    assert families.named_block("phi_3_13").meta() == (3, 13, 0)
    assert families.named_block("theta8").classify() == "holomorphic"
    with pytest.raises(KeyError):
        families.named_block("nope")


@given(pairs)
def test_rank_two_spectrum_is_a_quark(ab):
    a, b = ab
    assert AnSpec((a + b, b, 0)).block() == QuarkSpec(a, b).block()
