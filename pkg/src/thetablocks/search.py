"""Search for long theta blocks of low weight, and the theoretical weight bounds."""
from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .order import s_and_k


@dataclass(frozen=True)
class Candidate:
    a: tuple[int, ...]
    s: Fraction
    k: Fraction
    source: str = "pattern"

    @property
    def norm(self) -> int:
        return sum(v * v for v in self.a)

    def key(self):
        return (self.k, self.a)


def normalize(a: Sequence[int]) -> tuple[int, ...]:
    """gcd-reduced, sign-free, sorted representative."""
    v = [abs(int(x)) for x in a]
    if not v or 0 in v:
        raise ValueError("entries must be nonzero")
    g = reduce(math.gcd, v)
    return tuple(sorted(x // g for x in v))


def evaluate(a: Sequence[int], source: str = "pattern") -> Candidate:
    rep = normalize(a)
    s, k = s_and_k(rep)
    return Candidate(rep, s, k, source)


_TOKEN = re.compile(r"^(\d+)(_?)$")


def pattern(spec: str) -> tuple[int, ...]:
    """``"5_.2.7"`` stands for ``(1,2,3,4,5,2,7)``: ``n_`` is the run ``1..n`` and ``.`` concatenates.

    The underlined digit may also be written with a combining low line.
    """
    text = spec.replace("̲", "_").replace("·", ".").replace(" ", "")
    if not text:
        raise ValueError("empty pattern")
    out: list[int] = []
    for tok in text.split("."):
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"cannot parse pattern token {tok!r}")
        n = int(m.group(1))
        if n <= 0:
            raise ValueError("pattern entries must be positive")
        out.extend(range(1, n + 1) if m.group(2) else [n])
    return tuple(out)


def verify_table(rows: Iterable[dict]) -> list[dict]:
    """Recompute ``k_a`` and ``a^2`` for every row; one report dict per row."""
    report = []
    for row in rows:
        a = pattern(row["pattern"])
        s, k = s_and_k(a)
        norm = sum(v * v for v in a)
        want_k = Fraction(row["k"])
        report.append({"N": row["N"], "pattern": row["pattern"], "k": k, "a2": norm,
                       "ok": len(a) == row["N"] and k == want_k and norm == row["a2"],
                       "true_best": row["N"] <= 3})
    return report


def exhaustive(N: int, max_entry: int) -> Candidate:
    """Smallest ``k_a`` over multisets of ``N`` entries in ``1..max_entry``; ties by smallest vector."""
    best = None
    for a in combinations_with_replacement(range(1, max_entry + 1), N):
        if reduce(math.gcd, a) != 1:
            continue
        c = evaluate(a, "exhaustive")
        if best is None or c.key() < best.key():
            best = c
    return best


def _neighbours(a: tuple[int, ...], max_entry: int):
    n = len(a)
    for i in range(n):
        for d in (-1, 1):
            v = a[i] + d
            if 1 <= v <= max_entry:
                yield a[:i] + (v,) + a[i + 1:]
    for i in range(n):
        for v in range(1, max_entry + 1):
            if v != a[i]:
                yield a[:i] + (v,) + a[i + 1:]


def random_search(N: int, budget: int, strategy: str = "pattern", seed: int = 0,
                  start: Sequence[int] | None = None, max_entry: int | None = None) -> Candidate:
    """Best candidate of length ``N`` found within ``budget`` evaluations.

    ``exhaustive`` scans a box; ``pattern`` does hill climbing from ``start``
    (default ``1..N``) with single-entry moves; ``random`` restarts from
    random vectors.  Never worse than ``start``.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    if max_entry is None:
        max_entry = max(2 * N, 8)
    if strategy == "exhaustive":
        return exhaustive(N, max_entry)
    rng = random.Random(seed)
    init = tuple(start) if start is not None else tuple(range(1, N + 1))
    if len(init) != N:
        raise ValueError("start vector has the wrong length")
    best = evaluate(init, "seed")
    seen = {best.a}
    used = 1

    def climb(cur: Candidate) -> Candidate:
        nonlocal used
        improved = True
        while improved and used < budget:
            improved = False
            for nb in _neighbours(tuple(cur.a), max(max_entry, max(cur.a) + 1)):
                rep = normalize(nb)
                if rep in seen:
                    continue
                seen.add(rep)
                used += 1
                c = evaluate(rep, strategy)
                if c.key() < cur.key():
                    cur, improved = c, True
                    break
                if used >= budget:
                    break
        return cur

    if strategy == "pattern":
        best = min(best, climb(best), key=Candidate.key)
    elif strategy == "random":
        while used < budget:
            a = tuple(rng.randint(1, max_entry) for _ in range(N))
            if reduce(math.gcd, a) != 1:
                continue
            c = climb(evaluate(a, "random"))
            used += 1
            best = min(best, c, key=Candidate.key)
    else:
        raise ValueError("strategy must be exhaustive, pattern or random")
    return best


def harmonic(n: int) -> float:
    return math.fsum(1.0 / i for i in range(1, n + 1))


def lower_constant() -> float:
    """``(6/pi^2 - 1/2)/60``; its reciprocal is about 555.93."""
    return (6 / math.pi ** 2 - 0.5) / 60


def weight_bounds(N: int) -> tuple[float, float]:
    if N < 1:
        raise ValueError("N must be positive")
    return harmonic(2 * N) * lower_constant(), 45000 * (1 + math.log(N) ** 3)


def pair_s_closed_form(a: int, b: int) -> Fraction:
    """``s_{(a,b)} = 3/(a^2+b^2)`` for coprime-reduced ``a + b`` odd, else 0."""
    g = math.gcd(a, b)
    a, b = a // g, b // g
    return Fraction(3, a * a + b * b) if (a + b) % 2 else Fraction(0)
