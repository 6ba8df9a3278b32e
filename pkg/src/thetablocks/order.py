"""Order at infinity of theta quotients.

For a quotient ``eta^e * prod theta_a^{c_a}`` the order function is
``x -> sum_a c_a B(a x) + e/24`` with ``B(x) = min_k (x - 1/2 + k)^2 / 2``.
It is continuous, 1-periodic and quadratic between the points ``j/a``.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Mapping, Sequence

import numpy as np

from .quadform import min_over_coset, rational_inverse
from .series import Series, as_fraction

Piece = tuple[Fraction, Fraction, Fraction]


def bernoulli_B(x) -> Fraction:
    """``B(x) = min_k (x - 1/2 + k)^2 / 2``; even and 1-periodic."""
    x = as_fraction(x)
    t = x - floor(x) - Fraction(1, 2)
    return t * t / 2


def _parts(tq) -> tuple[dict[int, int], Fraction]:
    if isinstance(tq, tuple):
        theta, eta = tq
    else:
        theta, eta = tq.theta, tq.eta
    return {int(a): int(c) for a, c in dict(theta).items() if c}, as_fraction(eta)


@dataclass(frozen=True)
class OrderProfile:
    """Piecewise quadratic 1-periodic function ``A x^2 + B x + C`` per interval.

    Piece ``i`` is valid on ``[breakpoints[i], breakpoints[i+1]]`` (the last
    one up to 1).  Adjacent identical pieces are merged on construction.
    """

    breakpoints: tuple[Fraction, ...]
    pieces: tuple[Piece, ...]

    def __post_init__(self):
        bps, pcs = [self.breakpoints[0]], [self.pieces[0]]
        for b, p in zip(self.breakpoints[1:], self.pieces[1:]):
            if p != pcs[-1]:
                bps.append(b)
                pcs.append(p)
        object.__setattr__(self, "breakpoints", tuple(bps))
        object.__setattr__(self, "pieces", tuple(pcs))

    def piece_at(self, x) -> Piece:
        x = as_fraction(x) % 1
        return self.pieces[bisect_right(self.breakpoints, x) - 1]

    def __call__(self, x) -> Fraction:
        x = as_fraction(x) % 1
        A, B, C = self.piece_at(x)
        return A * x * x + B * x + C

    def intervals(self):
        ends = self.breakpoints[1:] + (Fraction(1),)
        return zip(self.breakpoints, ends, self.pieces)

    def __add__(self, other: "OrderProfile") -> "OrderProfile":
        bps = sorted(set(self.breakpoints) | set(other.breakpoints))
        ends = bps[1:] + [Fraction(1)]
        pcs = []
        for l, r in zip(bps, ends):
            mid = (l + r) / 2
            p, q = self.piece_at(mid), other.piece_at(mid)
            pcs.append((p[0] + q[0], p[1] + q[1], p[2] + q[2]))
        return OrderProfile(tuple(bps), tuple(pcs))

    def is_continuous(self) -> bool:
        for l, r, (A, B, C) in self.intervals():
            right = A * r * r + B * r + C
            if right != self(r % 1):
                return False
        return True


def order_profile(tq) -> OrderProfile:
    """Exact profile of ``x -> ord(tq, x)`` assembled from the B-sum."""
    theta, eta = _parts(tq)
    bps = {Fraction(0)}
    for a in theta:
        bps.update(Fraction(j, a) for j in range(a))
    bps = sorted(bps)
    ends = bps[1:] + [Fraction(1)]
    pcs = []
    for l, r in zip(bps, ends):
        mid = (l + r) / 2
        A = B = Fraction(0)
        C = eta / 24
        for a, c in theta.items():
            h = floor(a * mid) + Fraction(1, 2)
            A += c * Fraction(a * a, 2)
            B -= c * a * h
            C += c * h * h / 2
        pcs.append((A, B, C))
    return OrderProfile(tuple(bps), tuple(pcs))


def order_at(tq, x) -> Fraction:
    theta, eta = _parts(tq)
    return sum((c * bernoulli_B(a * as_fraction(x)) for a, c in theta.items()), eta / 24)


@dataclass
class MinResult:
    min_value: Fraction
    argmin: Fraction
    argmins: list[Fraction] = field(default_factory=list)
    witness_n: tuple[int, ...] | None = None


def _piece_minima(profile: OrderProfile) -> list[tuple[Fraction, Fraction]]:
    out = []
    for l, r, (A, B, C) in profile.intervals():
        cands = [l, r]
        if A > 0:
            v = -B / (2 * A)
            if l < v < r:
                cands.append(v)
        for x in cands:
            out.append((A * x * x + B * x + C, x % 1))
    return out


def minimize(profile: OrderProfile) -> MinResult:
    """Exact global minimum by per-piece vertex and endpoint inspection."""
    vals = _piece_minima(profile)
    m = min(v for v, _ in vals)
    args = sorted({x for v, x in vals if v == m})
    return MinResult(m, args[0], args)


def _expand_vector(theta: Mapping[int, int]) -> list[int]:
    out = []
    for a in sorted(theta):
        if theta[a] < 0:
            raise ValueError("candidate method needs nonnegative exponents")
        out.extend([a] * theta[a])
    return out


def candidate_min(a: Sequence[int]) -> tuple[int, int, int]:
    """Minimize ``sum_j B(a_j x)`` over the candidate points ``x = (s + 2k)/(2M)``.

    Returns ``(D, k, M)`` with the minimum equal to ``D / (8 M^2)`` attained
    at the smallest such ``k``; here ``s = sum a`` and ``M = sum a^2``.
    """
    a = [abs(int(v)) for v in a if v]
    if not a:
        return 0, 0, 0
    s, M = sum(a), sum(v * v for v in a)
    twoM = 2 * M
    if M < 64:
        best, bk = None, 0
        for k in range(M):
            t = s + 2 * k
            D = sum((abs((v * t) % twoM - M)) ** 2 for v in a)
            if best is None or D < best:
                best, bk = D, k
        return best, bk, M
    ks = np.arange(M, dtype=np.int64)
    t = s + 2 * ks
    D = np.zeros(M, dtype=np.int64)
    for v in a:
        d = (v * t) % twoM - M
        D += d * d
    bk = int(np.argmin(D))
    return int(D[bk]), bk, M


def pair_form_S(a: Sequence[int], n: Sequence[int]) -> int:
    """``S_a(n) = n^2 a^2 - (n.a)^2``, checked against the pairwise-minor sum."""
    if len(a) != len(n):
        raise ValueError("length mismatch")
    gram = sum(x * x for x in n) * sum(x * x for x in a) - sum(x * y for x, y in zip(a, n)) ** 2
    N = len(a)
    pairs = sum((a[i] * n[j] - a[j] * n[i]) ** 2 for i in range(N) for j in range(i + 1, N))
    if gram != pairs:
        raise AssertionError("Lagrange identity failed")
    return gram


def _nearest_odd(y: Fraction) -> int:
    o = 2 * floor((y - 1) / 2 + Fraction(1, 2)) + 1
    return o


def witness(a: Sequence[int], x) -> tuple[int, ...]:
    """Odd vector ``n`` with ``n_j`` nearest to ``2 a_j x``."""
    x = as_fraction(x)
    n = tuple(_nearest_odd(2 * v * x) for v in a)
    return n


def _box_witness(a: Sequence[int], x: Fraction, target: Fraction) -> tuple[int, ...] | None:
    from itertools import product
    base = witness(a, x)
    if len(a) > 8:
        return None
    for delta in product((-2, 0, 2), repeat=len(a)):
        n = tuple(b + d for b, d in zip(base, delta))
        if Fraction(3 * pair_form_S(a, n), sum(v * v for v in a)) == target:
            return n
    return None


def minimize_block(theta: Mapping[int, int], eta=0) -> MinResult:
    """Minimum of the order of a pure block, cross-checking two methods."""
    theta = {a: c for a, c in theta.items() if c}
    prof = order_profile((theta, eta))
    res = minimize(prof)
    avec = _expand_vector(theta)
    if not avec:
        return res
    D, k, M = candidate_min(avec)
    s = sum(avec)
    cand_val = Fraction(D, 8 * M * M) + as_fraction(eta) / 24
    if cand_val != res.min_value:
        raise AssertionError("candidate-point and per-piece minima disagree")
    x = Fraction(s + 2 * k, 2 * M) % 1
    n = witness(avec, x)
    s_a = 24 * (res.min_value - as_fraction(eta) / 24)
    if Fraction(3 * pair_form_S(avec, n), M) != s_a:
        n = _box_witness(avec, x, s_a)
    res.witness_n = n
    return res


def s_and_k(a: Sequence[int]) -> tuple[Fraction, Fraction]:
    """``s_a = 24 min_x sum B(a_j x)`` and ``k_a = (N - s_a)/2``."""
    a = [abs(int(v)) for v in a]
    if not a or 0 in a:
        raise ValueError("a must be a nonempty vector of nonzero integers")
    D, _, M = candidate_min(a)
    s = Fraction(3 * D, M * M)
    return s, (len(a) - s) / 2


def classify_value(v: Fraction) -> str:
    if v > 0:
        return "cusp"
    if v == 0:
        return "holomorphic"
    return "neither"


def hyperbolic_classify(a: Sequence[int], d) -> dict:
    """Classify ``theta_a / eta^d`` by ``min S_a(n) >= (d/3) a^2``.

    The result includes the order-based classification, which must agree.
    """
    d = as_fraction(d)
    a = [abs(int(v)) for v in a]
    s, _ = s_and_k(a)
    M = sum(v * v for v in a)
    min_S = s * M / 3
    bound = d * M / 3
    hyp = "cusp" if min_S > bound else ("holomorphic" if min_S == bound else "neither")
    theta: dict[int, int] = {}
    for v in a:
        theta[v] = theta.get(v, 0) + 1
    res = minimize_block(theta, -d)
    by_order = classify_value(res.min_value)
    if by_order != hyp:
        raise AssertionError("hyperbolic and order classifications disagree")
    return {"class": hyp, "s": s, "min_S": min_S, "witness_n": res.witness_n,
            "argmin": res.argmin, "min_order": res.min_value}


def dual_lower_bound(a: Sequence[int], U: Sequence[Sequence[int]]) -> Fraction:
    """Lower bound for ``S_a(n)/a^2`` over odd ``n`` from vectors orthogonal to ``a``.

    Minimizes ``x G^{-1} x^t`` with ``G`` the Gram matrix of ``U`` over the
    coset ``x_j = u_j^2 mod 2``, which contains every ``(n.u_j)_j``.
    """
    for u in U:
        if len(u) != len(a) or sum(x * y for x, y in zip(u, a)):
            raise ValueError("U must be orthogonal to a")
    G = [[sum(x * y for x, y in zip(u, v)) for v in U] for u in U]
    Ginv = rational_inverse(G)
    c = [Fraction(G[j][j] % 2, 2) for j in range(len(U))]
    gram4 = [[4 * v for v in row] for row in Ginv]
    val, _ = min_over_coset(gram4, c)
    return val


def series_order_at(f: Series, x, m) -> Fraction | None:
    """``min (n + r x + m x^2)`` over the stored terms of a one-variable series."""
    if f.nvars != 1:
        raise ValueError("one zeta variable expected")
    x, m = as_fraction(x), as_fraction(m)
    best = None
    for q, d in f.terms.items():
        n = Fraction(q, f.q_scale)
        for k in d:
            v = n + Fraction(k, 2) * x + m * x * x
            if best is None or v < best:
                best = v
    return best
