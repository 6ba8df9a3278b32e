from fractions import Fraction as F

import pytest

from thetablocks import rootsys

WEYL = {"A1": 2, "A2": 6, "A3": 24, "B2": 8, "B3": 48, "C3": 48, "G2": 12, "D4": 192}
POSITIVE = {"A4": 10, "B4": 16, "C4": 16, "D5": 20, "E6": 36, "E7": 63, "F4": 24, "G2": 6}


@pytest.mark.parametrize("label,order", sorted(WEYL.items()))
def test_weyl_orders(label, order):
    assert rootsys.root_system(label).weyl_order() == order


@pytest.mark.parametrize("label,count", sorted(POSITIVE.items()))
def test_positive_roots(label, count):
    R = rootsys.root_system(label)
    assert R.num_positive == count
    assert R.root_embedding_holds()


def test_parameters_consistent():
    for label in ("A3", "B3", "D4", "G2", "F4"):
        R = rootsys.root_system(label)
        p = R.parameters()
        assert p["nu"] == p["pos_roots"] - R.rank
        assert p["k"] == F(R.rank, 2)


def test_theta_R_block_weight():
    for label in ("A2", "B2", "G2", "A1+B3"):
        rank = sum(R.rank for R in rootsys.components(label))
        b = rootsys.theta_R_block(label, list(range(1, rank + 1)))
        assert b.weight() == F(rank, 2)
        assert b.classify() != "neither"


def test_quadratic_form_is_index():
    R = rootsys.root_system("G2")
    assert R.quadratic_form([1, 2]) == R.theta_R_block([1, 2]).index()


@pytest.mark.parametrize("label", ["A1", "A2", "B2", "G2"])
def test_macdonald_full(label):
    assert rootsys.macdonald_verify(label, 4)


def test_macdonald_specialized():
    assert rootsys.macdonald_verify("A3", 3, "specialized", samples=3)


def test_weyl_cap():
    with pytest.raises(OverflowError):
        rootsys.root_system("B3").weyl_group(cap=10)


def test_bad_parameters():
    with pytest.raises(ValueError):
        rootsys.root_system("A2").theta_indices([1])
    with pytest.raises(ValueError):
        rootsys.theta_R_block("A2", [1, 2, 3])
