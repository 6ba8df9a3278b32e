"""Integral lattices with eutactic stars, shadows, and the theta product identity.

Vectors are rational coordinate vectors in a fixed basis of the lattice;
``beta(x, y) = x^t G y`` and ``beta(x) = beta(x, x) / 2``.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import lcm
from typing import Sequence

from .quadform import enumerate_ellipsoid, rational_det, rational_inverse
from .series import Series, ZSCALE, as_fraction, eta_power, pack, theta, with_nvars

Vec = tuple[Fraction, ...]


def smith_normal_form(M: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Return ``(d, P, Q)`` with ``P M Q = diag(d)`` and P, Q unimodular."""
    A = [list(map(int, row)) for row in M]
    n, m = len(A), len(A[0])
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    Q = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in Q:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):
        A[dst] = [a - f * b for a, b in zip(A[dst], A[src])]
        P[dst] = [a - f * b for a, b in zip(P[dst], P[src])]

    def add_col(src, dst, f):
        for row in A:
            row[dst] -= f * row[src]
        for row in Q:
            row[dst] -= f * row[src]

    for t in range(min(n, m)):
        while True:
            piv = None
            for i in range(t, n):
                for j in range(t, m):
                    if A[i][j] and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                return [A[i][i] for i in range(min(n, m))], P, Q
            swap_rows(t, piv[0])
            swap_cols(t, piv[1])
            dirty = False
            for i in range(t + 1, n):
                if A[i][t]:
                    add_row(t, i, A[i][t] // A[t][t])
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, m):
                if A[t][j]:
                    add_col(t, j, A[t][j] // A[t][t])
                    dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, m) if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, -1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            P[t] = [-a for a in P[t]]
    return [A[i][i] for i in range(min(n, m))], P, Q


def _matvec(M, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in M)


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


class IntegralLattice:
    """``(Z^n, beta)`` with integral symmetric nondegenerate Gram matrix."""

    def __init__(self, gram: Sequence[Sequence[int]]):
        g = [[int(x) for x in row] for row in gram]
        n = len(g)
        if any(len(r) != n for r in g) or any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise ValueError("Gram matrix must be square and symmetric")
        self.gram = g
        self.n = n
        self.det = rational_det(g)
        if self.det == 0:
            raise ValueError("degenerate Gram matrix")
        self.gram_inv = rational_inverse(g)
        self._shadow = None

    def beta(self, x, y) -> Fraction:
        return Fraction(_dot(x, _matvec(self.gram, y)))

    def norm(self, x) -> Fraction:
        """``beta(x) = beta(x, x) / 2``."""
        return self.beta(x, x) / 2

    def pairing_vector(self, x) -> tuple:
        """``(beta(x, e_i))_i``, the exponent vector of ``e(beta(x, z))``."""
        return _matvec(self.gram, x)

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.n))

    def even_basis(self) -> list[list[int]]:
        """Columns spanning ``L_ev = {x : beta(x, x) even}``."""
        n = self.n
        odd = [i for i in range(n) if self.gram[i][i] % 2]
        cols = []
        for i in range(n):
            v = [0] * n
            v[i] = 1
            if odd and i in odd:
                if i == odd[0]:
                    v[i] = 2
                else:
                    v[odd[0]] = -1
            cols.append(v)
        return cols

    def shadow(self) -> "ShadowData":
        if self._shadow is None:
            self._shadow = ShadowData(self)
        return self._shadow

    def is_positive_definite(self) -> bool:
        return all(rational_det([row[:k] for row in self.gram[:k]]) > 0 for k in range(1, self.n + 1))


class ShadowData:
    """Even sublattice, shadow coset and the finite quotient ``L^# / L_ev`` indexing shadow classes."""

    def __init__(self, L: IntegralLattice):
        self.L = L
        n = L.n
        self.even_cols = L.even_basis()
        B = [[self.even_cols[j][i] for j in range(n)] for i in range(n)]
        self.even_matrix = B
        self.even_gram = [[L.beta(self.even_cols[i], self.even_cols[j]) for j in range(n)] for i in range(n)]
        # shadow vector r0 = G^{-1} diag(G) / 2
        self.r0 = tuple(Fraction(v) / 2 for v in _matvec(L.gram_inv, [L.gram[i][i] for i in range(n)]))
        # L_ev in dual coordinates y = G x, an integer matrix; L^#/L_ev = Z^n / (G B) Z^n
        GB = [[sum(L.gram[i][k] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        d, P, _ = smith_normal_form(GB)
        self.invariants = d
        self.P = P
        self.P_inv = [[int(v) for v in row] for row in rational_inverse(P)]
        self.B_inv = rational_inverse(B)

    def order(self) -> int:
        out = 1
        for v in self.invariants:
            out *= abs(v)
        return out

    def dual_order(self) -> int:
        """``|L^#/L|`` from the invariant factors of G itself."""
        d, _, _ = smith_normal_form(self.L.gram)
        out = 1
        for v in d:
            out *= abs(v)
        return out

    def key(self, x) -> tuple[int, ...]:
        """Class of a shadow vector ``x`` modulo ``L_ev``."""
        y = _matvec(self.L.gram, [Fraction(a) - b for a, b in zip(x, self.r0)])
        if any(Fraction(v).denominator != 1 for v in y):
            raise ValueError("vector is not in the shadow")
        k = _matvec(self.P, [int(v) for v in y])
        return tuple(int(v) % d for v, d in zip(k, self.invariants))

    def representatives(self):
        """One shadow vector per class of ``L^bullet / L_ev``."""
        ranges = [range(d) for d in self.invariants]
        for k in product(*ranges):
            y = _matvec(self.P_inv, k)
            x = _matvec(self.L.gram_inv, y)
            yield tuple(a + b for a, b in zip(x, self.r0))

    def is_shadow(self, r) -> bool:
        L = self.L
        for i in range(L.n):
            e = [0] * L.n
            e[i] = 1
            if (L.norm(e) - L.beta(r, e)).denominator != 1:
                return False
        return True

    def coset_minima(self, x) -> tuple[Fraction, list[Vec]]:
        """Minimal ``beta`` on ``x + L_ev`` and all vectors attaining it."""
        shift = _matvec(self.B_inv, x)
        gram = self.even_gram
        start = [-round(float(s)) for s in shift]
        v0 = [sum(self.even_matrix[i][j] * (start[j] + shift[j]) for j in range(len(x))) for i in range(len(x))]
        best = self.L.beta(v0, v0)
        found = []
        for y in enumerate_ellipsoid(gram, best, shift):
            v = tuple(Fraction(sum(self.even_matrix[i][j] * (y[j] + shift[j]) for j in range(len(x))))
                      for i in range(len(x)))
            val = self.L.beta(v, v)
            if val < best:
                best, found = val, [v]
            elif val == best:
                found.append(v)
        return best / 2, sorted(found)


def is_eutactic(L: IntegralLattice, star: Sequence[Sequence]) -> bool:
    """``sum_j beta(s_j, x) s_j = x`` on a basis, and every ``s_j`` in the dual."""
    n = L.n
    for s in star:
        if any(Fraction(v).denominator != 1 for v in L.pairing_vector(s)):
            return False
    for i in range(n):
        e = [0] * n
        e[i] = 1
        acc = [Fraction(0)] * n
        for s in star:
            b = L.beta(s, e)
            acc = [a + b * v for a, v in zip(acc, s)]
        if acc != e:
            return False
    return True


def star_sign(g: Sequence[Sequence[int]], star: Sequence[Sequence]) -> int:
    """``sn(g) = prod eps_j`` where ``g s_j = eps_j s_sigma(j)``."""
    svecs = [tuple(Fraction(v) for v in s) for s in star]
    idx = {s: j for j, s in enumerate(svecs)}
    sign = 1
    used = set()
    for s in svecs:
        t = tuple(Fraction(v) for v in _matvec(g, s))
        if t in idx:
            j = idx[t]
        else:
            neg = tuple(-v for v in t)
            if neg not in idx:
                raise ValueError("group element does not preserve the star up to signs")
            j = idx[neg]
            sign = -sign
        if j in used:
            raise ValueError("group element does not permute the star")
        used.add(j)
    return sign


def preserves_form(L: IntegralLattice, g) -> bool:
    n = L.n
    gt = [[g[j][i] for j in range(n)] for i in range(n)]
    prod_ = [[sum(gt[i][k] * sum(L.gram[k][l] * g[l][j] for l in range(n)) for k in range(n))
              for j in range(n)] for i in range(n)]
    return prod_ == L.gram


def extremality(L: IntegralLattice, star, G: Sequence[Sequence[Sequence[int]]], min_reps: bool = False) -> dict:
    """G-orbits on ``L^bullet / L_ev`` and whether exactly one has stabilizer in ker(sn).

    ``G`` may be a generating set or the full group.  An orbit's stabilizer
    meets the odd part exactly when the sign-labelled Schreier graph of the
    generators has an inconsistent cycle, which is detected by a 2-colouring.
    """
    sh = L.shadow()
    signs = []
    for g in G:
        if not preserves_form(L, g):
            raise ValueError("group element does not preserve beta")
        signs.append(star_sign(g, star))
    reps = {sh.key(x): x for x in sh.representatives()}
    seen: dict = {}
    orbits = []
    for k0, x0 in reps.items():
        if k0 in seen:
            continue
        seen[k0] = 1
        members = [k0]
        stack = [(k0, x0)]
        odd_stab = False
        while stack:
            k, x = stack.pop()
            pot = seen[k]
            for g, sg in zip(G, signs):
                y = _matvec(g, x)
                ky = sh.key(y)
                want = pot * sg
                if ky not in seen:
                    seen[ky] = want
                    members.append(ky)
                    stack.append((ky, reps[ky]))
                elif seen[ky] != want:
                    odd_stab = True
        orb = {"size": len(members), "representative": x0, "stabilizer_in_kernel": not odd_stab}
        if min_reps:
            orb["minimal_norm"], orb["minimal_vectors"] = sh.coset_minima(x0)
        orbits.append(orb)
    good = [o for o in orbits if o["stabilizer_in_kernel"]]
    return {"extremal": len(good) == 1, "orbits": orbits, "signs": signs, "classes": len(reps)}


def coset_theta(L: IntegralLattice, w, G_signed, prec) -> Series:
    """``sum_{x in w + L_ev, beta(x) < prec} q^{beta(x)} sum_g sn(g) e(beta(g x, z))`` in n variables."""
    sh = L.shadow()
    n = L.n
    w = [Fraction(v) for v in w]
    shift = _matvec(sh.B_inv, w)
    P = as_fraction(prec)
    G_signed = list(G_signed) if G_signed else [([[int(i == j) for j in range(n)] for i in range(n)], 1)]
    gmats = [(tuple(tuple(r) for r in g), s) for g, s in G_signed]
    # beta(w + v) lies in beta(w) + Z for v in L_ev, since w is a shadow vector
    qs = lcm(24, L.norm(w).denominator, P.denominator)
    items: dict = {}
    B = sh.even_matrix
    for y in enumerate_ellipsoid(sh.even_gram, 2 * P, shift):
        x = tuple(Fraction(sum(B[i][j] * (y[j] + shift[j]) for j in range(n))) for i in range(n))
        qv = L.norm(x)
        if qv >= P:
            continue
        d = items.setdefault(int(qv * qs), {})
        for g, s in gmats:
            e = L.pairing_vector(_matvec(g, x))
            k = pack([int(v * ZSCALE) for v in e])
            d[k] = d.get(k, 0) + s
    return Series(items, int(P * qs), qs, n)


def generic_vector(L: IntegralLattice, star) -> tuple[int, ...]:
    """A small integer vector with ``beta(s_j, x) != 0`` for all j."""
    n = L.n
    for size in range(1, 8):
        vals = sorted(range(-size, size + 1), key=lambda v: (v <= 0, abs(v)))
        for x in product(vals, repeat=n):
            if all(L.beta(s, x) != 0 for s in star):
                return x
    raise ValueError("no generic vector found")


def star_product(L: IntegralLattice, star, prec) -> Series:
    """``eta^{n-N} prod_j theta(tau, beta(s_j, z))`` to q-precision ``prec``."""
    n, N = L.n, len(star)
    P = as_fraction(prec)
    T = P - Fraction(n + 2 * N, 24)
    if T <= 0:
        return Series.zero(P, nvars=n)
    acc = Series.one(nvars=n)
    for s in star:
        u = [int(v) for v in L.pairing_vector(s)]
        acc = acc * theta(1, T + Fraction(1, 8), direction=u)
    if n != N:
        acc = acc * with_nvars(eta_power(n - N, T + Fraction(n - N, 24)), n)
    return acc


def verify_picture(L: IntegralLattice, star, G_elements, prec, x=None) -> tuple[bool, Fraction, Vec]:
    """Check the eta-divided star product against the signed coset theta series.

    ``G_elements`` must list the whole group.  ``prec`` counts q-strata above
    the leading exponent ``beta(w0)``.  Returns ``(ok, gamma, w0)``.
    """
    n, N = L.n, len(star)
    if x is None:
        x = generic_vector(L, star)
    eps = [1 if L.beta(s, x) > 0 else -1 for s in star]
    if any(L.beta(s, x) == 0 for s in star):
        raise ValueError("x is not generic for the star")
    w0 = tuple(sum(e * Fraction(s[i]) for e, s in zip(eps, star)) / 2 for i in range(n))
    lead = L.norm(w0)
    if lead != Fraction(n + 2 * N, 24):
        return False, Fraction(0), w0
    P = lead + as_fraction(prec)
    lhs = star_product(L, star, P)
    G_signed = [(g, star_sign(g, star)) for g in G_elements]
    rhs = coset_theta(L, w0, G_signed, P)
    lhs, rhs = lhs._promote(rhs)
    o = rhs.order_num()
    if o is None or lhs.order_num() != o:
        return False, Fraction(0), w0
    key = pack([int(v * ZSCALE) for v in L.pairing_vector(w0)])
    r_lead = rhs.terms[o].get(key, 0)
    l_lead = lhs.terms[o].get(key, 0)
    if not r_lead:
        return False, Fraction(0), w0
    gamma = Fraction(l_lead) / r_lead
    ok = lhs.agrees(rhs.scalar(gamma))
    return ok, gamma, w0
