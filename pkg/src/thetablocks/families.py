"""Closed-form expansions for theta quarks and the A_n families, plus named low-weight families."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import gcd, isqrt
from typing import Sequence

from .blocks import ThetaQuotient, parse_block
from .order import dual_lower_bound
from .quadform import rational_inverse
from .series import Series, as_fraction

DET_BUDGET = 5040


def legendre3(s: int) -> int:
    return (0, 1, -1)[s % 3]


def _perm_sign(p: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# ------------------------------------------------------------------ quarks
@dataclass(frozen=True)
class QuarkSpec:
    a: int
    b: int

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ValueError("quark parameters must be positive")

    @property
    def g(self) -> int:
        return gcd(self.a, self.b)

    @property
    def index(self) -> int:
        return self.a * self.a + self.a * self.b + self.b * self.b

    @property
    def is_cusp(self) -> bool:
        a, b = self.a // self.g, self.b // self.g
        return a * b * (a + b) % 3 == 0

    def block(self) -> ThetaQuotient:
        return ThetaQuotient.from_vector([self.a, self.b, self.a + self.b], -1)


def quark_expansion(spec: QuarkSpec, prec) -> Series:
    """``-sum_{r,s} (s/3) q^{r^2 + rs + s^2/3} zeta^{(a-b) r + a s}``.

    The exponent reads ``r^2 + rs + s^2/3``: under ``(u,v,w) = (-3r-2s, 3r+s, s)``
    this is ``(u^2+v^2+w^2)/18``, the exponent of the symmetric form.
    """
    P = as_fraction(prec)
    if P <= 0:
        raise ValueError("prec must be positive")
    a, b = spec.a, spec.b
    items = []
    # 3(r^2+rs+s^2/3) = 3(r + s/2)^2 + s^2/4, so s^2 < 12 P and (r + s/2)^2 < P
    smax = isqrt(int(12 * P) + 1) + 1
    w = isqrt(int(P) + 1) + 2
    for s in range(-smax, smax + 1):
        chi = legendre3(s)
        if not chi:
            continue
        for r in range(-s // 2 - w, -s // 2 + w + 1):
            e = r * r + r * s + Fraction(s * s, 3)
            if e < P:
                items.append((e, ((a - b) * r + a * s,), -chi))
    return Series.from_items(items, 1, P, 24)


def quark_expansion_symmetric(spec: QuarkSpec, prec) -> Series:
    """``-sum (u/3) q^{(u^2+v^2+w^2)/18} zeta^{-(au+bv+cw)/3}`` over ``u+v+w=0``, ``u = v = w mod 3``.

    The substitution ``u = -3r - 2s`` gives ``(u/3) = (s/3)``, so the sign in
    front is the same as in :func:`quark_expansion`.
    """
    P = as_fraction(prec)
    a, b = spec.a, spec.b
    c = -a - b
    items = []
    bound = 18 * P
    umax = isqrt(int(bound)) + 1
    for u in range(-umax, umax + 1):
        chi = legendre3(u)
        if not chi:
            continue
        for v in range(-umax, umax + 1):
            if (v - u) % 3:
                continue
            w = -u - v
            n2 = u * u + v * v + w * w
            if n2 < bound:
                items.append((Fraction(n2, 18), (Fraction(-(a * u + b * v + c * w), 3),), -chi))
    return Series.from_items(items, 1, P, 24)


# ------------------------------------------------------------------- A_n
@dataclass(frozen=True)
class AnSpec:
    a: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        if len(self.a) < 3:
            raise ValueError("A_n needs n >= 2, i.e. at least three entries")

    @property
    def n(self) -> int:
        return len(self.a) - 1

    @property
    def distinct(self) -> bool:
        return len(set(self.a)) == len(self.a)

    @property
    def index(self) -> Fraction:
        s = sum(self.a)
        return Fraction((self.n + 1) * sum(v * v for v in self.a) - s * s, 2)

    @property
    def g(self) -> int:
        out = 0
        for i in range(len(self.a)):
            for j in range(i + 1, len(self.a)):
                out = gcd(out, self.a[i] - self.a[j])
        return out

    def block(self) -> ThetaQuotient:
        self._require_distinct()
        n, a = self.n, self.a
        diffs = [a[i] - a[j] for i in range(n + 1) for j in range(i + 1, n + 1)]
        return ThetaQuotient.from_vector(diffs, -Fraction(n * (n - 1), 2))

    def _require_distinct(self):
        if not self.distinct:
            raise ValueError("entries of a must be pairwise distinct (the block vanishes identically)")


def _sum_zero_vectors(n1: int, offset: Fraction, bound: Fraction):
    """Vectors ``x in (offset + Z)^n1`` with ``sum x = 0`` and ``x^2 < bound``."""
    x: list[Fraction] = []

    def rec(rem_norm: Fraction, partial: Fraction):
        k = len(x)
        if k == n1 - 1:
            last = -partial
            if (last - offset).denominator == 1 and last * last < rem_norm:
                yield tuple(x) + (last,)
            return
        r = isqrt(int(rem_norm) + 1) + 1
        start = offset + (-r - int(offset) - 1)
        v = start
        while v <= r + 1:
            if v * v < rem_norm:
                x.append(v)
                yield from rec(rem_norm - v * v, partial + v)
                x.pop()
            v += 1

    yield from rec(bound, Fraction(0))


def an_sign(x: Sequence[Fraction]) -> int:
    """Sign of the permutation ``pi`` with ``x = -(n/2) 1 + pi mod (n+1)``, or 0."""
    n1 = len(x)
    half = Fraction(n1 - 1, 2)
    pi = [int(v + half) % n1 for v in x]
    if len(set(pi)) != n1:
        return 0
    return _perm_sign(pi)


def an_expansion(spec: AnSpec, prec) -> Series:
    """``sum sigma(x) q^{x^2 / 2(n+1)} zeta^{-a.x}`` over ``x in (n/2 + Z)^{n+1}``, ``x.1 = 0``.

    With ``zeta^{+a.x}`` the sum is ``Theta_a(tau, -z)``, which differs from
    the block by ``(-1)^{n(n+1)/2}`` (the number of theta factors).
    """
    spec._require_distinct()
    P = as_fraction(prec)
    n1 = spec.n + 1
    items = []
    for x in _sum_zero_vectors(n1, Fraction(spec.n, 2), 2 * n1 * P):
        sg = an_sign(x)
        if sg:
            e = sum(v * v for v in x) / (2 * n1)
            items.append((e, (-sum(ai * xi for ai, xi in zip(spec.a, x)),), sg))
    return Series.from_items(items, 1, P)


def theta_star(j: int, n: int, prec, a_i: int) -> Series:
    """``theta*_j(tau, a_i z + w)`` in the variables ``(zeta, zeta_w)``."""
    P = as_fraction(prec)
    n1 = n + 1
    items = []
    base = Fraction(2 * j - n, 2)
    top = isqrt(int(2 * n1 * P) + 1) + n1 + 1
    k = -(top // n1) - 1
    while True:
        s = base + n1 * k
        if s > top:
            break
        if s * s < 2 * n1 * P:
            items.append((s * s / (2 * n1), (s * a_i, s), 1))
        k += 1
    return Series.from_items(items, 2, P)


def an_determinant(spec: AnSpec, prec, budget: int = DET_BUDGET) -> Series:
    """Constant term in ``zeta_w`` of ``det[theta*_j(tau, a_i z + w)]``, read at ``-z``.

    As for the closed form, the determinant taken literally is ``Theta_a(tau, -z)``.
    """
    spec._require_distinct()
    n = spec.n
    perms = list(permutations(range(n + 1)))
    if len(perms) > budget:
        raise ValueError(f"n={n} exceeds the determinant budget ({budget} permutations)")
    P = as_fraction(prec)
    cols: dict[tuple[int, int], Series] = {}
    total = None
    for p in perms:
        term = None
        for i, j in enumerate(p):
            key = (j, i)
            if key not in cols:
                cols[key] = theta_star(j, n, P, spec.a[i])
            term = cols[key] if term is None else (term * cols[key]).truncate(P)
        if _perm_sign(p) < 0:
            term = -term
        total = term if total is None else total + term
    return total.constant_term_in(1).truncate(P).u_scale(-1).reduced()


def cusp_supplement(spec: AnSpec) -> bool:
    """Cusp iff some difference ``(a_i - a_j)/g`` is divisible by ``n + 1``."""
    spec._require_distinct()
    g, n1, a = spec.g, spec.n + 1, spec.a
    return any(((a[i] - a[j]) // g) % n1 == 0 for i in range(n1) for j in range(i + 1, n1))


# ------------------------------------------------------- B2 and G2 families
def b2_block(a: int, b: int) -> ThetaQuotient:
    return ThetaQuotient.from_vector([a, a + b, a + 2 * b, b], -2)


def g2_block(a: int, b: int) -> ThetaQuotient:
    return ThetaQuotient.from_vector([a, 3 * a + b, 3 * a + 2 * b, 2 * a + b, a + b, b], -4)


B2_DUAL = [(0, 1, -1, 1), (1, -1, 0, 1)]
G2_DUAL = [(1, -1, 0, 1, 0, 0), (1, 0, 0, 0, -1, 1), (0, 1, -1, 0, 0, 1), (1, 0, 0, -1, 1, 0)]


def b2_cusp_rule(a: int, b: int) -> bool:
    """For coprime ``a, b``: cusp iff ``a`` is odd or ``3`` does not divide ``b(a+b)``."""
    return a % 2 == 1 or (b * (a + b)) % 3 != 0


def g2_dual_matrix() -> list[list[Fraction]]:
    """``4 G^{-1}`` for the Gram matrix of the vectors orthogonal to the G2 family."""
    G = [[sum(x * y for x, y in zip(u, v)) for v in G2_DUAL] for u in G2_DUAL]
    return [[4 * x for x in row] for row in rational_inverse(G)]


def family_dual_bound(kind: str, a: int, b: int) -> Fraction:
    if kind == "B2":
        return dual_lower_bound([a, a + b, a + 2 * b, b], B2_DUAL)
    if kind == "G2":
        return dual_lower_bound([a, 3 * a + b, 3 * a + 2 * b, 2 * a + b, a + b, b], G2_DUAL)
    raise ValueError("kind must be B2 or G2")


# --------------------------------------------------------------- named blocks
NAMED_BLOCKS: dict[str, str] = {
    "phi_2_37": "eta:-6 1:3 2:3 3:2 4:1 5:1",
    "phi_3_13": "eta:-3 1:5 2:3 3:1",
    "E_2_25": "eta:-6 1:4 2:3 3:2 4:1",
    "E_3_9_1": "eta:-3 1:6 2:3",
    "theta8": "1:8",
    "theta6_theta2_2": "1:6 2:2",
    "phi_3_122": "theta[-15; 1^5,2^5,3^4,4^3,5^2,6,7]",
    "phi_3_167": "theta[-15; 1^4,2^5,3^3,4^3,5^2,6^2,7,8]",
    "phi_3_173": "theta[-15; 1^4,2^4,3^3,4^4,5^2,6^2,7,8]",
    "phi_2_587": "theta[-18; (1,2,3,4,5,6,8)^2,2,7,9,10,11,12,13,14]",
    "phi_2_713": "theta[-18; (1,2,4,5,6,8)^2,2,3,7,8,9,10,11,12,13,15]",
    "phi_2_893": "theta[-18; 1,(2,3,4,5,6,8)^2,7,9,10,11,12,13,14,16,19]",
    "phi_2_2p": "theta[-30; (1,2,3,4,5)^2," + ",".join(str(i) for i in range(6, 29)) + ",30]",
}


def named_block(name: str) -> ThetaQuotient:
    try:
        return parse_block(NAMED_BLOCKS[name])
    except KeyError:
        raise KeyError(f"unknown named block {name!r}; known: {', '.join(NAMED_BLOCKS)}") from None
