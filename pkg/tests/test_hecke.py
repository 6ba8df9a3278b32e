from fractions import Fraction as F

import pytest

from thetablocks import families, hecke
from thetablocks.blocks import expand, parse_block
from thetablocks.series import PrecisionError

PHI_0_13 = "1:-3 2:1 3:1 4:1"


@pytest.fixture(scope="module")
def phi313():
    return families.named_block("phi_3_13")


def test_v2_closed_form(phi313):
    f = expand(phi313, 8)
    assert hecke.v2_closed_form(f, 3).agrees(hecke.v_m(f, 3, 13, 2))


def test_v1_is_identity(phi313):
    f = expand(phi313, 5)
    assert hecke.v_m(f, 3, 13, 1).agrees(f)


def test_v_m_rejects_half_integral_weight():
    with pytest.raises(ValueError):
        hecke.v_m(expand(parse_block("1:1"), 3), F(1, 2), F(1, 2), 2)


def test_eisenstein():
    assert hecke.eisenstein_constant(4) == F(1, 240)
    g = hecke.eisenstein_G(4, 3)
    assert g.coeff(2, (0,)) == 9
    assert hecke.eisenstein_G(3, 3).is_zero()


def test_v2_quotient_singular_part(phi313):
    psi = hecke.v2_quotient(phi313, 5)
    assert hecke.q0_part(psi) == hecke.q0_part(expand(parse_block(PHI_0_13), 4))
    th, C = hecke.borcherds_theta(psi, 13)
    assert th == phi313 and C == 7


def test_val1(phi313):
    psi = expand(parse_block(PHI_0_13), 6)
    assert hecke.val1_check(psi, 13)
    assert not hecke.val1_check(-psi, 13)
    with pytest.raises(PrecisionError):
        hecke.val1_check(psi.truncate(2), 13)


def test_lift_precision_guard(phi313):
    with pytest.raises(PrecisionError):
        hecke.additive_lift(expand(phi313, 3), 3, 13, 3, 3)


def test_lift_equals_borcherds(phi313):
    psi = expand(parse_block(PHI_0_13), 40)
    assert hecke.lift_equals_borcherds(phi313, 3, 3, psi=psi)


def test_lift_differs_from_wrong_product(phi313):
    psi = expand(parse_block(PHI_0_13), 40)
    f = expand(phi313, 6)
    bor = hecke.borcherds_product(psi, 13, 3, 3)
    assert hecke.additive_lift(f, 3, 13, 3, 3).agrees(bor, 3)
    wrong = hecke.additive_lift(f.scalar(2), 3, 13, 3, 3)
    assert not wrong.agrees(bor, 3)


def test_v2_quotient_needs_positive_integral_order():
    with pytest.raises(ValueError):
        hecke.v2_quotient(parse_block("1:4"), 3)


def test_psi_of_index_122_is_weak():
    psi = hecke.v2_quotient(families.named_block("phi_3_122"), 0)
    assert psi.order() == -1
