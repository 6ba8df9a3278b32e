from fractions import Fraction as F

import pytest
from hypothesis import assume, given, strategies as st

from thetablocks import lattice, rootsys, series
from thetablocks.lattice import IntegralLattice

matrices = st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=3, max_size=3)


def _mul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


@given(matrices)
def test_smith_normal_form(M):
    d, P, Q = lattice.smith_normal_form(M)
    D = _mul(_mul(P, M), Q)
    assert all(D[i][j] == (d[i] if i == j else 0) for i in range(3) for j in range(3))
    nz = [v for v in d if v]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


def test_degenerate_gram_rejected():
    with pytest.raises(ValueError):
        IntegralLattice([[1, 1], [1, 1]])


def test_discriminant_orders():
    A2 = IntegralLattice([[2, -1], [-1, 2]])
    assert A2.is_even() and A2.shadow().dual_order() == 3
    Z = IntegralLattice([[1]])
    assert not Z.is_even()
    assert Z.shadow().order() == 2


def test_root_star_is_eutactic():
    for label in ("A2", "B2", "G2", "A3"):
        R = rootsys.root_system(label)
        assert lattice.is_eutactic(R.lattice(), R.star())


def test_rank_one_picture_is_triple_product():
    Z = IntegralLattice([[1]])
    ok, gamma, w0 = lattice.verify_picture(Z, [(F(1),)], [((1,),), ((-1,),)], 8)
    assert ok and gamma == 1 and w0 == (F(1, 2),)
    rhs = lattice.coset_theta(Z, w0, [(((1,),), 1), (((-1,),), -1)], 10)
    assert rhs.agrees(series.theta(1, 10))


def test_extremality_of_rank_one_star():
    Z = IntegralLattice([[1]])
    info = lattice.extremality(Z, [(F(1),)], [((-1,),)])
    assert info["extremal"]


def test_star_sign_is_determinant_on_weyl_groups():
    for label in ("A2", "B2", "G2"):
        assert rootsys.sn_matches_det(label)


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_coset_vectors_lie_in_shadow(x):
    L = IntegralLattice([[1, 0], [0, 3]])
    sh = L.shadow()
    r = [a + b for a, b in zip(x, sh.r0)]
    assert sh.is_shadow(r)
    for y in ([1, 0], [0, 1], [1, 1]):
        assert (L.norm(y) - L.beta(r, y)).denominator == 1
