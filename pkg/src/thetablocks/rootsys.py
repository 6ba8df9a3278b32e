"""Root systems, their Weyl groups, and the theta products attached to positive roots.

Simple roots follow the Bourbaki numbering.  The lattice attached to a
root system uses the basis ``h * omega_f^vee`` (scaled fundamental
coweights), in which ``z_f = (f, z)/h`` are the coordinates, the Gram
matrix is ``h * G_F^{-1}`` and a positive root pairs to its row of
``gamma``.
"""
from __future__ import annotations

import random
import re
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .blocks import ThetaQuotient, expand
from .lattice import IntegralLattice, coset_theta, star_sign, verify_picture
from .quadform import rational_inverse

Vec = tuple[Fraction, ...]

WEYL_CAP = 60000


def _f(*xs) -> Vec:
    return tuple(Fraction(x) for x in xs)


def _unit(n: int, i: int, c=1) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[i] = Fraction(c)
    return v


def _simple_roots(kind: str, n: int) -> list[Vec]:
    if kind == "A":
        if n < 1:
            raise ValueError("A_n needs n >= 1")
        out = []
        for i in range(n):
            v = _unit(n + 1, i)
            v[i + 1] = Fraction(-1)
            out.append(tuple(v))
        return out
    if kind in "BCD":
        if (kind == "D" and n < 3) or n < 2:
            raise ValueError(f"{kind}_n needs larger n")
        out = []
        for i in range(n - 1):
            v = _unit(n, i)
            v[i + 1] = Fraction(-1)
            out.append(tuple(v))
        if kind == "B":
            out.append(tuple(_unit(n, n - 1)))
        elif kind == "C":
            out.append(tuple(_unit(n, n - 1, 2)))
        else:
            v = _unit(n, n - 2)
            v[n - 1] = Fraction(1)
            out.append(tuple(v))
        return out
    if kind == "G" and n == 2:
        return [_f(1, -1, 0), _f(-2, 1, 1)]
    if kind == "F" and n == 4:
        h = Fraction(1, 2)
        return [_f(0, 1, -1, 0), _f(0, 0, 1, -1), _f(0, 0, 0, 1), (h, -h, -h, -h)]
    if kind == "E" and n in (6, 7, 8):
        h = Fraction(1, 2)
        e8 = [(h, -h, -h, -h, -h, -h, -h, h), _f(1, 1, 0, 0, 0, 0, 0, 0)]
        for i in range(6):
            v = _unit(8, i + 1)
            v[i] = Fraction(-1)
            e8.append(tuple(v))
        return e8[:n]
    raise ValueError(f"invalid root system type {kind}{n}")


def _ip(u, v) -> Fraction:
    return sum(a * b for a, b in zip(u, v))


class RootSystem:
    """An irreducible root system with positive roots and the derived data."""

    def __init__(self, label: str):
        m = re.fullmatch(r"([A-G])(\d+)", label.strip())
        if not m:
            raise ValueError(f"invalid root system type {label!r}")
        self.kind, self.rank = m.group(1), int(m.group(2))
        self.label = f"{self.kind}{self.rank}"
        self.simple = _simple_roots(self.kind, self.rank)
        n = self.rank
        self.gram_F = [[_ip(f, g) for g in self.simple] for f in self.simple]
        self.gram_F_inv = rational_inverse(self.gram_F)
        self.cartan = [[int(2 * self.gram_F[i][j] / self.gram_F[i][i]) for j in range(n)] for i in range(n)]
        roots = self._closure()
        pos = []
        for r in roots:
            g = self.coefficients(r)
            if all(c >= 0 for c in g):
                pos.append((g, r))
        pos.sort(key=lambda t: (sum(t[0]), [-c for c in t[0]]))
        self.positive = [r for _, r in pos]
        self.gamma = [tuple(int(c) for c in g) for g, _ in pos]
        self.h = sum(_ip(r, r) for r in self.positive) / n
        self.weyl_vector = tuple(sum(r[i] for r in self.positive) / 2 for i in range(len(self.simple[0])))

    def _closure(self) -> list[Vec]:
        seen = set(self.simple)
        frontier = list(self.simple)
        while frontier:
            nxt = []
            for v in frontier:
                for f in self.simple:
                    c = 2 * _ip(v, f) / _ip(f, f)
                    w = tuple(a - c * b for a, b in zip(v, f))
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return sorted(seen)

    def coefficients(self, v) -> tuple[Fraction, ...]:
        """Coordinates of an ambient vector in the simple-root basis."""
        pairs = [_ip(v, f) for f in self.simple]
        return tuple(sum(a * b for a, b in zip(row, pairs)) for row in self.gram_F_inv)

    @property
    def num_positive(self) -> int:
        return len(self.positive)

    def highest_root(self) -> Vec:
        return self.positive[-1]

    def h_from_highest_root(self) -> Fraction:
        a, w = self.highest_root(), self.weyl_vector
        aw = tuple(x + y for x, y in zip(a, w))
        return (_ip(aw, aw) - _ip(w, w)) / 2

    def root_embedding_holds(self) -> bool:
        """``sum_r (r, x)(r, y) = h (x, y)`` on the span of the roots."""
        for f in self.simple:
            for g in self.simple:
                if sum(_ip(r, f) * _ip(r, g) for r in self.positive) != self.h * _ip(f, g):
                    return False
        return True

    # ---------------------------------------------------------------- lattice
    def lattice_gram(self) -> list[list[int]]:
        G = [[self.h * v for v in row] for row in self.gram_F_inv]
        for row in G:
            for v in row:
                if v.denominator != 1:
                    raise ArithmeticError("lattice Gram matrix is not integral")
        return [[int(v) for v in row] for row in G]

    def lattice(self) -> IntegralLattice:
        return IntegralLattice(self.lattice_gram())

    def to_lattice_coords(self, v) -> Vec:
        return tuple(_ip(v, f) / self.h for f in self.simple)

    def star(self) -> list[Vec]:
        """Positive roots as vectors of the lattice's dual."""
        return [self.to_lattice_coords(r) for r in self.positive]

    def reflections(self) -> list[tuple[tuple[int, ...], ...]]:
        n = self.rank
        out = []
        for f in range(n):
            M = [[int(i == j) for j in range(n)] for i in range(n)]
            for k in range(n):
                M[k][f] -= self.cartan[f][k]
            out.append(tuple(tuple(r) for r in M))
        return out

    def weyl_group(self, cap: int = WEYL_CAP) -> list[tuple[tuple[int, ...], ...]]:
        return _weyl_group(self.label, cap)

    def weyl_order(self) -> int:
        return len(self.weyl_group())

    def weyl_vector_coords(self) -> Vec:
        return self.to_lattice_coords(self.weyl_vector)

    # ------------------------------------------------------------ theta data
    def theta_indices(self, a: Sequence[int]) -> list[int]:
        if len(a) != self.rank:
            raise ValueError("a must have one entry per simple root")
        if any(v <= 0 for v in a):
            raise ValueError("entries of a must be positive")
        return [sum(g * x for g, x in zip(row, a)) for row in self.gamma]

    def theta_R_block(self, a: Sequence[int]) -> ThetaQuotient:
        """``eta^{n - |R+|} prod_r theta_{(gamma_r . a)}``."""
        return ThetaQuotient.from_vector(self.theta_indices(a), self.rank - self.num_positive)

    def parameters(self) -> dict:
        N = self.num_positive
        return {"pos_roots": N, "nu": N - self.rank, "k": Fraction(self.rank, 2), "l": self.rank + 2 * N}

    def quadratic_form(self, a: Sequence[int]) -> Fraction:
        """``Q(a) = (1/2) sum_r (gamma_r . a)^2``."""
        return Fraction(sum(v * v for v in self.theta_indices(a)), 2)


@lru_cache(maxsize=None)
def root_system(label: str) -> RootSystem:
    return RootSystem(label)


def _matmul(A, B):
    n = len(A)
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)) for i in range(n))


@lru_cache(maxsize=8)
def _weyl_group(label: str, cap: int):
    R = root_system(label)
    gens = R.reflections()
    n = R.rank
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = _matmul(s, g)
                if h not in seen:
                    seen.add(h)
                    if len(seen) > cap:
                        raise OverflowError(f"Weyl group of {label} exceeds the cap {cap}")
                    nxt.append(h)
        frontier = nxt
    return sorted(seen)


def det_int(M) -> int:
    from .quadform import rational_det
    return int(rational_det(M))


def components(label: str) -> list[RootSystem]:
    """``"G2+B2"`` style direct sums."""
    return [root_system(p.strip()) for p in label.split("+") if p.strip()]


def theta_R_block(label: str, a: Sequence[int]) -> ThetaQuotient:
    """Block of a (possibly reducible) root system; ``a`` concatenates the parts."""
    out = ThetaQuotient({})
    pos = 0
    for R in components(label):
        out = out * R.theta_R_block(a[pos:pos + R.rank])
        pos += R.rank
    if pos != len(a):
        raise ValueError("a must have one entry per simple root")
    return out


def family_forms(label: str) -> list[tuple[int, ...]]:
    """Linear forms of the theta indices, as coefficient vectors in the concatenated variables."""
    out = []
    pos = 0
    comps = components(label)
    total = sum(R.rank for R in comps)
    for R in comps:
        for row in R.gamma:
            v = [0] * total
            v[pos:pos + R.rank] = row
            out.append(tuple(v))
        pos += R.rank
    return out


def macdonald_verify(label: str, prec=5, mode: str = "full_weyl", samples: int = 20, seed: int = 0,
                     cap: int = WEYL_CAP) -> bool:
    """Product side against the Weyl-signed theta series of the root lattice.

    ``prec`` counts q-strata above the leading exponent.  ``full_weyl``
    compares multivariable series; ``specialized`` compares one-variable
    pullbacks along random positive vectors.
    """
    R = root_system(label)
    L = R.lattice()
    star = R.star()
    W = R.weyl_group(cap)
    ones = (1,) * R.rank
    expected = Fraction(1, weyl_stabilizer_order(label))
    if mode == "full_weyl":
        ok, gamma, w0 = verify_picture(L, star, W, prec, x=ones)
        return ok and gamma == expected and w0 == R.weyl_vector_coords()
    if mode != "specialized":
        raise ValueError("mode must be full_weyl or specialized")
    N = R.num_positive
    lead = Fraction(R.rank + 2 * N, 24)
    P = lead + Fraction(prec)
    signed = [(g, det_int(g)) for g in W]
    rhs = coset_theta(L, R.weyl_vector_coords(), signed, P)
    rng = random.Random(seed)
    for _ in range(samples):
        a = [rng.randint(1, 4) for _ in range(R.rank)]
        lhs = expand(R.theta_R_block(a), P)
        if not lhs.agrees(rhs.specialize(a).scalar(expected)):
            return False
    return True


def weyl_stabilizer_order(label: str) -> int:
    """Order of the Weyl-group stabilizer of the class of the Weyl vector modulo the even lattice.

    Each monomial of the signed coset sum is counted once per stabilizer
    element, so the product side equals the sum divided by this order.
    """
    R = root_system(label)
    sh = R.lattice().shadow()
    w = R.weyl_vector_coords()
    k = sh.key(w)
    from .lattice import _matvec
    return sum(1 for g in R.weyl_group() if sh.key(_matvec(g, w)) == k)


def sn_matches_det(label: str) -> bool:
    R = root_system(label)
    star = R.star()
    return all(star_sign(g, star) == det_int(g) for g in R.weyl_group())
