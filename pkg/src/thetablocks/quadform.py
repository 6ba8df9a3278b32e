"""Ellipsoid enumeration for positive definite rational quadratic forms."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Sequence


def qf_value(gram: Sequence[Sequence], x: Sequence) -> Fraction:
    n = len(x)
    total = Fraction(0)
    for i in range(n):
        if x[i]:
            row = gram[i]
            s = 0
            for j in range(n):
                if x[j]:
                    s += row[j] * x[j]
            total += x[i] * s
    return Fraction(total)


def _cholesky(gram) -> tuple[list[float], list[list[float]]]:
    """Return (d, mu) with Q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2."""
    n = len(gram)
    a = [[float(gram[i][j]) for j in range(n)] for i in range(n)]
    d = [0.0] * n
    mu = [[0.0] * n for _ in range(n)]
    for i in range(n):
        s = a[i][i] - sum(d[k] * mu[k][i] ** 2 for k in range(i))
        if s <= 0:
            raise ValueError("form is not positive definite")
        d[i] = s
        for j in range(i + 1, n):
            t = a[i][j] - sum(d[k] * mu[k][i] * mu[k][j] for k in range(i))
            mu[i][j] = t / s
    return d, mu


def enumerate_ellipsoid(gram: Sequence[Sequence], bound, shift: Sequence | None = None) -> Iterator[tuple[int, ...]]:
    """Yield integer vectors y with Q(y + shift) <= bound, checked exactly.

    Float Cholesky bounds are widened by one unit per coordinate, so no
    solution is lost to rounding; every yielded vector passes an exact test.
    """
    n = len(gram)
    shift = [Fraction(0)] * n if shift is None else [Fraction(s) for s in shift]
    bound = Fraction(bound)
    if bound < 0:
        return
    d, mu = _cholesky(gram)
    fs = [float(s) for s in shift]
    fb = float(bound)
    tol = 1e-9 * max(1.0, fb)
    y = [0] * n

    def rec(i: int, rem: float):
        if i < 0:
            x = [y[k] + shift[k] for k in range(n)]
            if qf_value(gram, x) <= bound:
                yield tuple(y)
            return
        c = -fs[i] - sum(mu[i][j] * (y[j] + fs[j]) for j in range(i + 1, n))
        r = math.sqrt(max(rem, 0.0) / d[i])
        lo = math.ceil(c - r) - 1
        hi = math.floor(c + r) + 1
        for v in range(lo, hi + 1):
            t = v - c
            nrem = rem - d[i] * t * t
            if nrem < -tol:
                continue
            y[i] = v
            yield from rec(i - 1, nrem)
        y[i] = 0

    yield from rec(n - 1, fb)


def min_over_coset(gram: Sequence[Sequence], shift: Sequence) -> tuple[Fraction, tuple]:
    """Exact minimum of Q(y + shift) over integer y, with a minimizer y."""
    n = len(gram)
    start = [-round(float(s)) for s in shift]
    best = qf_value(gram, [start[k] + Fraction(shift[k]) for k in range(n)])
    arg = tuple(start)
    for y in enumerate_ellipsoid(gram, best, shift):
        v = qf_value(gram, [y[k] + Fraction(shift[k]) for k in range(n)])
        if v < best or (v == best and y < arg):
            best, arg = v, y
    return best, arg


def rational_inverse(mat: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact inverse by Gauss-Jordan elimination."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [row[n:] for row in a]


def rational_det(mat: Sequence[Sequence]) -> Fraction:
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] / p
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return det
