"""Theta quotients ``eta^e * prod theta_a^{c_a}``: metadata, divisors, enumeration, expansion."""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping

from sympy import divisors, factorint

from . import order as _order
from .series import Series, as_fraction, eta_power, theta, with_nvars


class ThetaQuotient:
    """An element ``sign * eta^eta * prod_a theta_a^{c_a}`` of the group of theta quotients."""

    __slots__ = ("_exps", "eta", "sign")

    def __init__(self, theta: Mapping[int, int] | None = None, eta=0, sign: int = 1):
        exps: dict[int, int] = {}
        for a, c in (theta or {}).items():
            a, c = int(a), int(c)
            if a == 0:
                if c > 0:
                    raise ValueError("theta_0 vanishes identically")
                if c < 0:
                    raise ZeroDivisionError("division by theta_0")
                continue
            if a < 0:
                a = -a
                if c % 2:
                    sign = -sign
            exps[a] = exps.get(a, 0) + c
        self._exps = tuple(sorted((a, c) for a, c in exps.items() if c))
        self.eta = as_fraction(eta)
        self.sign = -1 if sign < 0 else 1

    @classmethod
    def from_vector(cls, a, eta=0) -> "ThetaQuotient":
        exps: dict[int, int] = {}
        sign = 1
        for v in a:
            if v < 0:
                sign = -sign
            exps[abs(v)] = exps.get(abs(v), 0) + 1
        return cls(exps, eta, sign)

    @property
    def theta(self) -> dict[int, int]:
        return dict(self._exps)

    def vector(self) -> list[int]:
        out = []
        for a, c in self._exps:
            if c < 0:
                raise ValueError("not a pure block")
            out.extend([a] * c)
        return out

    def is_pure(self) -> bool:
        return all(c > 0 for _, c in self._exps)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ThetaQuotient) and self._exps == other._exps
                and self.eta == other.eta and self.sign == other.sign)

    def __hash__(self):
        return hash((self._exps, self.eta, self.sign))

    def __mul__(self, other: "ThetaQuotient") -> "ThetaQuotient":
        t = self.theta
        for a, c in other._exps:
            t[a] = t.get(a, 0) + c
        return ThetaQuotient(t, self.eta + other.eta, self.sign * other.sign)

    def __truediv__(self, other: "ThetaQuotient") -> "ThetaQuotient":
        return self * other ** -1

    def __pow__(self, n: int) -> "ThetaQuotient":
        return ThetaQuotient({a: c * n for a, c in self._exps}, self.eta * n, self.sign ** (n % 2))

    def __repr__(self) -> str:
        return f"ThetaQuotient({format_block(self)!r})"

    # -------------------------------------------------------------- metadata
    def weight(self) -> Fraction:
        return (sum(c for _, c in self._exps) + self.eta) / 2

    def index(self) -> Fraction:
        return Fraction(sum(c * a * a for a, c in self._exps), 2)

    def character(self) -> Fraction:
        return (3 * sum(c for _, c in self._exps) + self.eta) % 24

    def meta(self) -> tuple[Fraction, Fraction, Fraction]:
        """``(weight, index, character exponent mod 24)``."""
        return self.weight(), self.index(), self.character()

    def q_order(self) -> Fraction:
        """Order at ``x = 0``, the smallest q-exponent of the expansion."""
        return Fraction(sum(c for _, c in self._exps), 8) + self.eta / 24

    def profile(self) -> _order.OrderProfile:
        return _order.order_profile(self)

    def min_order(self) -> Fraction:
        if self.is_pure() and self._exps:
            return _order.minimize_block(self.theta, self.eta).min_value
        return _order.minimize(self.profile()).min_value

    def classify(self) -> str:
        """``cusp``, ``holomorphic`` (non-cusp) or ``neither``.

        Quotients with poles in the upper half plane are ``neither``.
        """
        if not is_weakly_holomorphic(self):
            return "neither"
        return _order.classify_value(self.min_order())

    def u_scale(self, l: int) -> "ThetaQuotient":
        return ThetaQuotient({a * l: c for a, c in self._exps}, self.eta, self.sign)


# ------------------------------------------------------------------ parsing
def parse_block(text: str) -> ThetaQuotient:
    """Parse a block in one of three notations.

    * ``theta[-N; 1^5, 2^3, (1,2,3)^2, 7]`` meaning ``eta^-N theta_1^5 ...``
    * ``eta:-6 1:3 2:3`` with ``a:c`` exponents of ``theta_a``
    * ``1,1,2/eta:1`` a numerator list of indices over an optional
      denominator list (indices or ``eta:d``)
    """
    s = text.strip()
    m = re.fullmatch(r"(?:theta|ϑ|vartheta)\s*\[\s*(-?\d+(?:/\d+)?)\s*;(.*)\]", s)
    if m:
        eta = Fraction(m.group(1))
        exps: dict[int, int] = {}
        body = m.group(2)
        for grp, single, power in re.findall(r"\s*(?:\(([^)]*)\)|(-?\d+))\s*(?:\^\s*(-?\d+))?\s*(?:,|$)", body):
            e = int(power) if power else 1
            items = [int(x) for x in grp.split(",")] if grp else [int(single)]
            for a in items:
                exps[a] = exps.get(a, 0) + e
        return ThetaQuotient(exps, eta)
    if re.fullmatch(r"(\s*(eta|-?\d+)\s*:\s*-?\d+(/\d+)?\s*)+", s):
        exps = {}
        eta = Fraction(0)
        for key, val in re.findall(r"(eta|-?\d+)\s*:\s*(-?\d+(?:/\d+)?)", s):
            if key == "eta":
                eta += Fraction(val)
            else:
                a = int(key)
                exps[a] = exps.get(a, 0) + int(val)
        return ThetaQuotient(exps, eta)
    num, _, den = s.partition("/")
    exps = {}
    eta = Fraction(0)

    def feed(part: str, sgn: int):
        nonlocal eta
        for tok in filter(None, (t.strip() for t in part.split(","))):
            if tok.startswith("eta"):
                _, _, v = tok.partition(":")
                eta += sgn * Fraction(v or 1)
            else:
                a = int(tok)
                exps[a] = exps.get(a, 0) + sgn
    try:
        feed(num, 1)
        feed(den, -1)
    except ValueError as exc:
        raise ValueError(f"cannot parse block {text!r}") from exc
    return ThetaQuotient(exps, eta)


def format_block(tq: ThetaQuotient) -> str:
    parts = [f"{a}^{c}" if c != 1 else str(a) for a, c in tq.theta.items()]
    head = "-" if tq.sign < 0 else ""
    return f"{head}theta[{tq.eta}; {','.join(parts)}]"


# ------------------------------------------------------------ divisor map
def divisor(tq: ThetaQuotient) -> dict[int, int]:
    """``n_a = sum_{a | b} c_b``: zero multiplicities at primitive a-division points."""
    theta = tq.theta
    cand = set()
    for b in theta:
        cand.update(divisors(b))
    out = {}
    for a in sorted(cand):
        n = sum(c for b, c in theta.items() if b % a == 0)
        if n:
            out[a] = n
    return out


def mobius(n: int) -> int:
    f = factorint(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


@lru_cache(maxsize=None)
def S(a: int) -> ThetaQuotient:
    """``S_a = prod_{d | a} theta_d^{mu(a/d)}``."""
    return ThetaQuotient({d: int(mobius(a // d)) for d in divisors(a)})


def from_divisor(div: Mapping[int, int], eta=0) -> ThetaQuotient:
    out = ThetaQuotient({}, eta)
    for a, n in div.items():
        out = out * S(a) ** n
    return out


def is_weakly_holomorphic(tq: ThetaQuotient) -> bool:
    """Holomorphic on the upper half plane: all divisor multiplicities nonnegative."""
    return all(n >= 0 for n in divisor(tq).values())


# -------------------------------------------------------------- polynomials
class BlockPolynomial:
    """``p(t) = c0 + sum_l c_l t^l`` standing for ``eta^{2 c0} prod (theta_l/eta)^{c_l}``."""

    __slots__ = ("c0", "coeffs")

    def __init__(self, c0, coeffs: Mapping[int, int]):
        self.c0 = as_fraction(c0)
        if (2 * self.c0).denominator != 1:
            raise ValueError("c0 must be a half-integer")
        self.coeffs = {int(l): int(c) for l, c in coeffs.items() if c}
        if any(l < 1 for l in self.coeffs):
            raise ValueError("exponents must be positive")

    def __eq__(self, other):
        return isinstance(other, BlockPolynomial) and self.c0 == other.c0 and self.coeffs == other.coeffs

    def __call__(self, t):
        return self.c0 + sum(c * t ** l for l, c in self.coeffs.items())

    def weight(self) -> Fraction:
        return self(0)

    def index(self) -> Fraction:
        d1 = sum(c * l for l, c in self.coeffs.items())
        d2 = sum(c * l * (l - 1) for l, c in self.coeffs.items())
        return Fraction(d1 + d2, 2)

    def character(self) -> Fraction:
        return (2 * self(1)) % 24

    def root_average(self, N: int) -> Fraction:
        """``(1/N) sum_{w^N = 1} p(w)``, by orthogonality of characters."""
        return self.c0 + sum(c for l, c in self.coeffs.items() if l % N == 0)

    def weakly_holomorphic(self) -> bool:
        top = max(self.coeffs, default=0)
        return all(self.root_average(N) >= self.c0 for N in range(1, top + 1))

    def to_quotient(self) -> ThetaQuotient:
        return ThetaQuotient(self.coeffs, 2 * self.c0 - sum(self.coeffs.values()))

    @classmethod
    def from_quotient(cls, tq: ThetaQuotient) -> "BlockPolynomial":
        if tq.sign < 0:
            raise ValueError("sign is not represented by the polynomial")
        th = tq.theta
        return cls((tq.eta + sum(th.values())) / 2, th)


# --------------------------------------------------------------- counting
def dedekind_psi(a: int) -> int:
    """``sum of d | a with a/d squarefree``."""
    return sum(d for d in divisors(a) if all(e == 1 for e in factorint(a // d).values()))


def euler_phi(a: int) -> int:
    out = a
    for p in factorint(a):
        out = out // p * (p - 1)
    return out


def phi_psi(a: int) -> int:
    """``a^2 prod_{p | a} (1 - 1/p^2)``, twice the index of ``S_a``."""
    out = a * a
    for p in factorint(a):
        out = out // (p * p) * (p * p - 1)
    return out


def _parts_upto(n: int) -> list[tuple[int, int]]:
    out = []
    a = 1
    while phi_psi(a) <= n or a < 3:
        if phi_psi(a) <= n:
            out.append((a, phi_psi(a)))
        a += 1
        if a * a > 4 * n + 4:
            break
    return out


def divisor_vectors(m) -> Iterator[dict[int, int]]:
    """All ``n_a >= 0`` with ``sum n_a phi(a) psi(a) = 2 m``."""
    two_m = as_fraction(2 * as_fraction(m))
    if two_m.denominator != 1 or two_m < 0:
        raise ValueError("m must be a nonnegative half-integer")
    target = int(two_m)
    parts = _parts_upto(target)

    def rec(i: int, rem: int, cur: dict):
        if rem == 0:
            yield dict(cur)
            return
        if i == len(parts):
            return
        a, w = parts[i]
        for n in range(rem // w, -1, -1):
            if n:
                cur[a] = n
            yield from rec(i + 1, rem - n * w, cur)
            cur.pop(a, None)
    yield from rec(0, target, {})


def count_gtb(m) -> int:
    """Number of generalized theta blocks of index m up to eta powers, checked two ways."""
    target = int(2 * as_fraction(m))
    gf = [1] + [0] * target
    for _, w in _parts_upto(target):
        for n in range(w, target + 1):
            gf[n] += gf[n - w]
    enum = sum(1 for _ in divisor_vectors(m))
    if enum != gf[target]:
        raise AssertionError("partition enumeration and generating function disagree")
    return enum


def enumerate_gtb(m, bound=40) -> list[ThetaQuotient]:
    """Generalized theta blocks of index m normalized to minimal order exactly 0."""
    if 2 * as_fraction(m) > bound:
        raise ValueError("index exceeds the configured enumeration bound")
    out = []
    for div in divisor_vectors(m):
        tq = from_divisor(div)
        v = _order.minimize(tq.profile()).min_value
        out.append(ThetaQuotient(tq.theta, -24 * v))
    return out


def _multisets(N: int, target: int, lo: int = 1) -> Iterator[list[int]]:
    if N == 0:
        if target == 0:
            yield []
        return
    a = lo
    while N * a * a <= target:
        for rest in _multisets(N - 1, target - a * a, a):
            yield [a] + rest
        a += 1


def pure_vectors(N: int, m) -> Iterator[list[int]]:
    """Nondecreasing positive vectors of length N with ``sum a^2 = 2 m``."""
    t = 2 * as_fraction(m)
    if t.denominator != 1:
        return iter(())
    return _multisets(N, int(t))


def classify_vector(a, deficit: int) -> str:
    """Class of ``theta_a / eta^deficit`` by the candidate-point minimum."""
    D, _, M = _order.candidate_min(a)
    lhs, rhs = 3 * D, deficit * M * M
    if lhs > rhs:
        return "cusp"
    return "holomorphic" if lhs == rhs else "neither"


def admissible_lengths(k, h, m, cap: int | None = None) -> list[int]:
    k = as_fraction(k)
    top = int(2 * as_fraction(m))
    if cap is not None:
        top = min(top, cap)
    return [N for N in range(1, top + 1) if (2 * N + 2 * k - h) % 24 == 0]


def enumerate_theta_blocks(k, m, h, lengths=None, cap: int | None = None) -> list[tuple[ThetaQuotient, str]]:
    """Holomorphic pure blocks ``eta^{-(N-2k)} prod theta_{a_i}`` of weight k, index m, character h."""
    k = as_fraction(k)
    if lengths is None:
        lengths = admissible_lengths(k, h, m, cap)
    out = []
    for N in lengths:
        d = N - 2 * k
        if d.denominator != 1:
            continue
        for a in pure_vectors(N, m):
            c = classify_vector(a, int(d))
            if c != "neither":
                out.append((ThetaQuotient.from_vector(a, -d), c))
    return out


# ---------------------------------------------------------------- expansion
def expand(tq: ThetaQuotient, prec) -> Series:
    """Exact one-variable expansion to q-precision ``prec``."""
    if 24 % tq.eta.denominator:
        raise ValueError("expansion needs an eta exponent with denominator dividing 24")
    P = as_fraction(prec)
    num = [(a, c) for a, c in tq.theta.items() if c > 0]
    den = [(a, -c) for a, c in tq.theta.items() if c < 0]
    o_num = Fraction(sum(c for _, c in num), 8) + tq.eta / 24
    o_den = Fraction(sum(c for _, c in den), 8)
    if den:
        P_num = P + o_den
        P_den = max(P + 2 * o_den - o_num, o_den + Fraction(1, 24))
    else:
        P_num = P
    top = _product(num, tq.eta, P_num, o_num)
    if tq.sign < 0:
        top = -top
    if not den:
        return top
    bottom = _product(den, Fraction(0), P_den, o_den)
    return top.divide(bottom).truncate(P)


def _product(factors, eta_exp: Fraction, P: Fraction, total_order: Fraction) -> Series:
    T = P - total_order
    if T <= 0:
        return Series.zero(P)
    acc = Series.one()
    for a, c in factors:
        base = theta(a, T + Fraction(1, 8))
        for _ in range(c):
            acc = acc * base
    if eta_exp:
        acc = acc * with_nvars(eta_power(eta_exp, T + eta_exp / 24), 1)
    if not factors and not eta_exp:
        return acc.truncate(P) if P > 0 else Series.zero(P)
    return acc
