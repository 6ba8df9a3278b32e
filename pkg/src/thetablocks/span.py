"""Exact linear algebra over block expansions: relations, census counts, the three-term identity."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .blocks import ThetaQuotient, enumerate_theta_blocks, expand
from .series import Series, as_fraction


def weierstrass_triple(a: int, b: int, c: int, d: int) -> tuple[ThetaQuotient | None, ...]:
    """``(T1, T2, T3)`` with ``T1 + T2 = T3``; ``None`` marks a product containing ``theta_0``.

    ``T1 = th_a th_b th_c th_d``, ``T2`` uses the half sums ``(a+b+c-d)/2, (a+b-c+d)/2,
    (a-b+c+d)/2, (a-b-c-d)/2`` and ``T3`` uses ``(a+b+c+d)/2, (a+b-c-d)/2, (a-b+c-d)/2,
    (a-b-c+d)/2``.  Negative indices are folded into the sign.
    """
    if (a + b + c + d) % 2:
        raise ValueError("a + b + c + d must be even")
    t2 = [(a + b + c - d) // 2, (a + b - c + d) // 2, (a - b + c + d) // 2, (a - b - c - d) // 2]
    t3 = [(a + b + c + d) // 2, (a + b - c - d) // 2, (a - b + c - d) // 2, (a - b - c + d) // 2]

    def mk(v):
        return None if 0 in v else ThetaQuotient.from_vector(v)

    return mk([a, b, c, d]), mk(t2), mk(t3)


def weierstrass_holds(a: int, b: int, c: int, d: int, prec) -> bool:
    P = as_fraction(prec)
    parts = []
    for tq in weierstrass_triple(a, b, c, d):
        parts.append(Series.zero(P, nvars=1) if tq is None else expand(tq, P))
    return (parts[0] + parts[1] - parts[2]).truncate(P).is_zero()


def _common_meta(blocks: Sequence[ThetaQuotient]):
    metas = {b.meta() for b in blocks}
    if len(metas) != 1:
        raise ValueError("blocks must share weight, index and character")
    return metas.pop()


def coefficient_matrix(series: Sequence[Series]) -> tuple[list[tuple], list[list[Fraction]]]:
    """Rows indexed by monomials (sorted), columns by the series."""
    monos = sorted({(q, zv) for s in series for q, zv, _ in s.num_items()})
    index = {m: i for i, m in enumerate(monos)}
    rows = [[Fraction(0)] * len(series) for _ in monos]
    for j, s in enumerate(series):
        for q, zv, c in s.num_items():
            rows[index[(q, zv)]][j] = Fraction(c)
    return monos, rows


def nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    M = DomainMatrix([[QQ(x.numerator, x.denominator) for x in r] for r in rows], (len(rows), ncols), QQ)
    basis = M.nullspace().to_Matrix().tolist()
    return [[Fraction(int(x.p), int(x.q)) for x in vec] for vec in basis]


def rank(rows: list[list[Fraction]], ncols: int) -> int:
    return ncols - len(nullspace(rows, ncols))


def default_precision(m) -> Fraction:
    """At least ``m/3 + 5`` strata."""
    return as_fraction(m) / 3 + 5


def _expand_all(blocks, prec):
    out = []
    for b in blocks:
        s = expand(b, prec)
        out.append(s.rescale(24) if s.q_scale < 24 else s)
    scale = 1
    for s in out:
        scale = max(scale, s.q_scale)
    return [s.rescale(scale) if s.q_scale != scale else s for s in out]


def combine(blocks: Sequence[ThetaQuotient], vec: Sequence, prec) -> Series:
    total = Series.zero(prec, nvars=1)
    for b, c in zip(blocks, vec):
        if c:
            total = total + expand(b, prec).scalar(c)
    return total.truncate(prec)


def kernel(blocks: Sequence[ThetaQuotient], prec=None, verify_factor: int = 2) -> list[list[Fraction]]:
    """Exact relations among blocks, each re-verified by re-expansion at ``verify_factor * prec``.

    The rank is required to be unchanged when five more strata are added.
    """
    if not blocks:
        return []
    _, m, _ = _common_meta(blocks)
    P = as_fraction(prec) if prec is not None else default_precision(m)
    _, rows = coefficient_matrix(_expand_all(blocks, P))
    _, rows2 = coefficient_matrix(_expand_all(blocks, P + 5))
    basis = nullspace(rows, len(blocks))
    if len(basis) != len(nullspace(rows2, len(blocks))):
        raise ArithmeticError("rank not stable under five extra strata; increase prec")
    basis = _reduce_basis(basis)
    for vec in basis:
        if not combine(blocks, vec, verify_factor * P).is_zero():
            raise ArithmeticError("kernel vector fails re-verification")
    return basis


def _reduce_basis(basis):
    """Scale each vector to coprime integers with positive leading entry."""
    from math import gcd, lcm
    out = []
    for v in basis:
        den = 1
        for x in v:
            den = lcm(den, x.denominator)
        ints = [int(x * den) for x in v]
        g = 0
        for x in ints:
            g = gcd(g, x)
        ints = [x // g for x in ints]
        lead = next(x for x in ints if x)
        if lead < 0:
            ints = [-x for x in ints]
        out.append([Fraction(x) for x in ints])
    return out


def census(m_values, k=2, h=0, lengths=(10,)) -> dict:
    """``{m: (te, tc)}``: non-cusp and cusp holomorphic blocks of the given lengths."""
    out = {}
    for m in m_values:
        found = enumerate_theta_blocks(k, m, h, lengths=list(lengths))
        te = sum(1 for _, c in found if c == "holomorphic")
        tc = sum(1 for _, c in found if c == "cusp")
        out[m] = (te, tc)
    return out


def cusp_blocks(m, k=2, h=0, lengths=(10,)) -> list[ThetaQuotient]:
    return [b for b, c in enumerate_theta_blocks(k, m, h, lengths=list(lengths)) if c == "cusp"]


J291_BLOCKS = {
    "A": "eta:-6 1:2 2:1 3:1 4:2 5:2 6:1 7:1",
    "B": "eta:-6 1:2 2:2 3:2 4:1 5:1 7:1 8:1",
    "C": "eta:-6 1:1 2:2 3:2 4:2 5:1 7:2",
}
