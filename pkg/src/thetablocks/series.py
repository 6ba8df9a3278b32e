"""Exact truncated Fourier expansions.

A :class:`Series` is a finite expansion in ``q`` whose coefficients are
Laurent polynomials in one or more ``zeta`` variables.  Exponents of ``q``
are stored as integer numerators over a per-series ``q_scale`` (default 24),
exponents of ``zeta`` as numerators over the fixed scale 2.  Coefficients are
Python ints or :class:`fractions.Fraction`.

Internally a zeta exponent vector is packed into a single integer with
balanced base-2**32 digits, so that adding packed keys adds the vectors.
"""
from __future__ import annotations

import json
from fractions import Fraction
from math import ceil, gcd, isqrt, lcm
from typing import Iterable, Iterator, Sequence

ZSCALE = 2
DEFAULT_QSCALE = 24

_SHIFT = 32
_BASE = 1 << _SHIFT
_HALF = _BASE >> 1
_MASK = _BASE - 1


class DivisionError(ArithmeticError):
    """Raised when a series quotient is not a finite Laurent series per q-stratum."""


class PrecisionError(ValueError):
    """Raised when an operation needs more q-precision than its input carries."""


def pack(vec: Sequence[int]) -> int:
    key = 0
    for v in reversed(vec):
        if not -_HALF <= v < _HALF:
            raise OverflowError("zeta exponent out of packable range")
        key = key * _BASE + v
    return key


def unpack(key: int, nvars: int) -> tuple[int, ...]:
    out = []
    for _ in range(nvars):
        d = key & _MASK
        if d >= _HALF:
            d -= _BASE
        out.append(d)
        key = (key - d) >> _SHIFT
    if key:
        raise OverflowError("packed key has more digits than variables")
    return tuple(out)


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def _prec_num(prec, scale: int) -> int | None:
    """Numerator bound at ``scale`` for an exclusive q-precision."""
    if prec is None:
        return None
    p = as_fraction(prec) * scale
    return ceil(p)


class Series:
    """Immutable truncated expansion ``sum c(n, r) q^n zeta^r``.

    ``prec`` is the exclusive q-precision numerator (at ``q_scale``) or None
    for an exact (finite) expansion.
    """

    __slots__ = ("nvars", "q_scale", "terms", "prec")

    def __init__(self, terms: dict, prec: int | None = None, q_scale: int = DEFAULT_QSCALE,
                 nvars: int = 1, _clean: bool = False):
        self.nvars = nvars
        self.q_scale = q_scale
        self.prec = prec
        if _clean:
            self.terms = terms
            return
        out = {}
        for q, stratum in terms.items():
            if prec is not None and q >= prec:
                continue
            s = {}
            for k, c in stratum.items():
                if c:
                    s[k] = _norm(c)
            if s:
                out[q] = s
        self.terms = out

    # ------------------------------------------------------------------ basics
    @classmethod
    def zero(cls, prec=None, q_scale: int = DEFAULT_QSCALE, nvars: int = 1) -> "Series":
        return cls({}, _prec_num(prec, q_scale), q_scale, nvars, _clean=True)

    @classmethod
    def one(cls, q_scale: int = DEFAULT_QSCALE, nvars: int = 1) -> "Series":
        return cls({0: {0: 1}}, None, q_scale, nvars, _clean=True)

    @classmethod
    def monomial(cls, q, zeta: Sequence = (), coeff=1, q_scale: int | None = None,
                 nvars: int | None = None) -> "Series":
        """``coeff * q^q * zeta^zeta`` with exponents given as rationals."""
        q = as_fraction(q)
        zeta = tuple(as_fraction(z) for z in zeta)
        if nvars is None:
            nvars = len(zeta)
        if len(zeta) != nvars:
            raise ValueError("zeta arity mismatch")
        if q_scale is None:
            q_scale = lcm(DEFAULT_QSCALE, q.denominator)
        qn = q * q_scale
        if qn.denominator != 1:
            raise ValueError("q exponent not representable at this scale")
        zn = []
        for z in zeta:
            v = z * ZSCALE
            if v.denominator != 1:
                raise ValueError("zeta exponent must lie in (1/2)Z")
            zn.append(v.numerator)
        return cls({qn.numerator: {pack(zn): coeff}}, None, q_scale, nvars)

    @classmethod
    def from_items(cls, items: Iterable, nvars: int = 1, prec=None,
                   q_scale: int | None = None) -> "Series":
        """Build from ``(q_exponent, zeta_vector, coeff)`` with rational exponents.

        The q-scale defaults to the lcm of 24 and all exponent denominators.
        Coefficients of repeated monomials are summed.
        """
        items = [(as_fraction(q), tuple(as_fraction(z) for z in zv), c) for q, zv, c in items]
        if q_scale is None:
            q_scale = DEFAULT_QSCALE
            for q, _, _ in items:
                q_scale = lcm(q_scale, q.denominator)
            if prec is not None:
                q_scale = lcm(q_scale, as_fraction(prec).denominator)
        pn = _prec_num(prec, q_scale)
        terms: dict = {}
        for q, zv, c in items:
            if len(zv) != nvars:
                raise ValueError("zeta arity mismatch")
            qn = q * q_scale
            if qn.denominator != 1:
                raise ValueError("q exponent not representable at this scale")
            zn = []
            for z in zv:
                v = z * ZSCALE
                if v.denominator != 1:
                    raise ValueError("zeta exponent must lie in (1/2)Z")
                zn.append(v.numerator)
            s = terms.setdefault(qn.numerator, {})
            k = pack(zn)
            s[k] = s.get(k, 0) + c
        return cls(terms, pn, q_scale, nvars)

    # ------------------------------------------------------------- inspection
    def is_zero(self) -> bool:
        return not self.terms

    def order_num(self) -> int | None:
        return min(self.terms) if self.terms else None

    def order(self) -> Fraction | None:
        """Smallest stored q-exponent (None for the zero series)."""
        o = self.order_num()
        return None if o is None else Fraction(o, self.q_scale)

    def precision(self) -> Fraction | None:
        return None if self.prec is None else Fraction(self.prec, self.q_scale)

    def items(self) -> Iterator[tuple[Fraction, tuple[Fraction, ...], object]]:
        """Yield ``(q, zeta_vector, coeff)`` in deterministic order."""
        for q in sorted(self.terms):
            s = self.terms[q]
            rows = sorted((unpack(k, self.nvars), c) for k, c in s.items())
            for zv, c in rows:
                yield (Fraction(q, self.q_scale), tuple(Fraction(z, ZSCALE) for z in zv), c)

    def num_items(self) -> Iterator[tuple[int, tuple[int, ...], object]]:
        """Yield ``(q_numerator, zeta_numerators, coeff)``."""
        for q in sorted(self.terms):
            for k, c in self.terms[q].items():
                yield q, unpack(k, self.nvars), c

    def coeff(self, q, zeta: Sequence = ()) -> object:
        qn = as_fraction(q) * self.q_scale
        if qn.denominator != 1:
            return 0
        zn = []
        for z in zeta:
            v = as_fraction(z) * ZSCALE
            if v.denominator != 1:
                return 0
            zn.append(v.numerator)
        if len(zn) != self.nvars:
            raise ValueError("zeta arity mismatch")
        if self.prec is not None and qn.numerator >= self.prec:
            raise PrecisionError("coefficient beyond precision")
        return self.terms.get(qn.numerator, {}).get(pack(zn), 0)

    def stratum(self, q) -> dict[tuple[Fraction, ...], object]:
        """The zeta-Laurent polynomial at ``q``, keyed by rational exponent vectors."""
        qn = as_fraction(q) * self.q_scale
        if qn.denominator != 1:
            return {}
        s = self.terms.get(qn.numerator, {})
        return {tuple(Fraction(z, ZSCALE) for z in unpack(k, self.nvars)): c for k, c in s.items()}

    def __len__(self) -> int:
        return sum(len(s) for s in self.terms.values())

    def __repr__(self) -> str:
        head = []
        for n, (q, zv, c) in enumerate(self.items()):
            if n >= 6:
                head.append("...")
                break
            head.append(f"{c}*q^{q}*z^{list(map(str, zv))}")
        return f"Series(nvars={self.nvars}, prec={self.precision()}, [{', '.join(head)}])"

    # ----------------------------------------------------------------- scales
    def rescale(self, new_scale: int) -> "Series":
        if new_scale == self.q_scale:
            return self
        if new_scale % self.q_scale:
            raise ValueError("new q-scale must be a multiple of the old one")
        f = new_scale // self.q_scale
        terms = {q * f: s for q, s in self.terms.items()}
        prec = None if self.prec is None else self.prec * f
        return Series(terms, prec, new_scale, self.nvars, _clean=True)

    def reduced(self) -> "Series":
        """Same series at the smallest q-scale dividing the current one that is a multiple of 24
        when possible, otherwise the smallest representing all exponents."""
        g = self.q_scale
        for q in self.terms:
            g = gcd(g, q)
        if self.prec is not None:
            g = gcd(g, self.prec)
        if g <= 1:
            return self
        new = self.q_scale // g
        target = lcm(new, DEFAULT_QSCALE)
        if self.q_scale % target == 0 and target < self.q_scale:
            new = target
        elif target != new:
            return self
        f = self.q_scale // new
        return Series({q // f: s for q, s in self.terms.items()},
                      None if self.prec is None else self.prec // f, new, self.nvars, _clean=True)

    def _promote(self, other: "Series") -> tuple["Series", "Series"]:
        if self.nvars != other.nvars:
            if self.nvars == 0:
                self = with_nvars(self, other.nvars)
            elif other.nvars == 0:
                other = with_nvars(other, self.nvars)
            else:
                raise ValueError("zeta-arity mismatch")
        if self.q_scale == other.q_scale:
            return self, other
        s = lcm(self.q_scale, other.q_scale)
        return self.rescale(s), other.rescale(s)

    # -------------------------------------------------------------- arithmetic
    def truncate(self, prec) -> "Series":
        """Drop terms with q-exponent >= prec (rational); precision becomes min(old, prec)."""
        p = as_fraction(prec)
        s = self
        if (p * s.q_scale).denominator != 1:
            s = s.rescale(lcm(s.q_scale, p.denominator))
        pn = (p * s.q_scale).numerator
        if s.prec is not None:
            pn = min(pn, s.prec)
        terms = {q: d for q, d in s.terms.items() if q < pn}
        return Series(terms, pn, s.q_scale, s.nvars, _clean=True)

    def __neg__(self) -> "Series":
        return Series({q: {k: -c for k, c in s.items()} for q, s in self.terms.items()},
                      self.prec, self.q_scale, self.nvars, _clean=True)

    def __add__(self, other) -> "Series":
        if not isinstance(other, Series):
            other = Series.one(self.q_scale, self.nvars).scalar(other)
        a, b = self._promote(other)
        prec = _min_prec(a.prec, b.prec)
        terms = {q: dict(s) for q, s in a.terms.items() if prec is None or q < prec}
        for q, s in b.terms.items():
            if prec is not None and q >= prec:
                continue
            t = terms.setdefault(q, {})
            for k, c in s.items():
                v = t.get(k, 0) + c
                if v:
                    t[k] = _norm(v)
                else:
                    t.pop(k, None)
            if not t:
                del terms[q]
        return Series(terms, prec, a.q_scale, a.nvars, _clean=True)

    __radd__ = __add__

    def __sub__(self, other) -> "Series":
        return self + (-other if isinstance(other, Series) else -other)

    def __rsub__(self, other) -> "Series":
        return (-self) + other

    def scalar(self, c) -> "Series":
        if c == 0:
            return Series({}, self.prec, self.q_scale, self.nvars, _clean=True)
        return Series({q: {k: _norm(v * c) for k, v in s.items()} for q, s in self.terms.items()},
                      self.prec, self.q_scale, self.nvars, _clean=True)

    def __mul__(self, other) -> "Series":
        if not isinstance(other, Series):
            return self.scalar(other)
        a, b = self._promote(other)
        oa, ob = a.order_num(), b.order_num()
        prec = _mul_prec(a.prec, oa, b.prec, ob)
        out: dict = {}
        if oa is not None and ob is not None:
            bq = sorted(b.terms)
            for qa in sorted(a.terms):
                da = a.terms[qa]
                for qb in bq:
                    n = qa + qb
                    if prec is not None and n >= prec:
                        break
                    db = b.terms[qb]
                    acc = out.get(n)
                    if acc is None:
                        acc = out[n] = {}
                    get = acc.get
                    big, small = (da, db) if len(da) >= len(db) else (db, da)
                    for ks, cs in small.items():
                        for kb, cb in big.items():
                            k = kb + ks
                            acc[k] = get(k, 0) + cb * cs
        return Series(out, prec, a.q_scale, a.nvars)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Series":
        if not isinstance(n, int) or n < 0:
            raise ValueError("pow exponent must be a nonnegative integer (use invert)")
        result = Series.one(self.q_scale, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, q=0, zeta: Sequence | None = None) -> "Series":
        """Multiply by the monomial ``q^q zeta^zeta``."""
        s = self
        qf = as_fraction(q)
        if (qf * s.q_scale).denominator != 1:
            s = s.rescale(lcm(s.q_scale, qf.denominator))
        qn = (qf * s.q_scale).numerator
        zk = 0
        if zeta is not None:
            zn = []
            for z in zeta:
                v = as_fraction(z) * ZSCALE
                if v.denominator != 1:
                    raise ValueError("zeta exponent must lie in (1/2)Z")
                zn.append(v.numerator)
            zk = pack(zn)
        terms = {qq + qn: ({k + zk: c for k, c in d.items()} if zk else d) for qq, d in s.terms.items()}
        return Series(terms, None if s.prec is None else s.prec + qn, s.q_scale, s.nvars, _clean=True)

    def divide(self, other: "Series", prec=None) -> "Series":
        """Exact quotient ``self / other``.

        The leading q-stratum of ``other`` may be any Laurent polynomial; each
        q-stratum of the quotient is obtained by exact Laurent-polynomial
        division and :class:`DivisionError` is raised when that fails.  The
        result precision is the tightest one implied by both operands and by
        the optional cap ``prec``.
        """
        a, b = self._promote(other)
        ob = b.order_num()
        if ob is None:
            raise ZeroDivisionError("division by a zero series")
        oa = a.order_num()
        cands = []
        if a.prec is not None:
            cands.append(a.prec - ob)
        if b.prec is not None and oa is not None:
            cands.append(b.prec - 2 * ob + oa)
        if prec is not None:
            pf = as_fraction(prec)
            if (pf * a.q_scale).denominator != 1:
                s = lcm(a.q_scale, pf.denominator)
                return self.rescale(lcm(s, self.q_scale)).divide(other.rescale(lcm(s, other.q_scale)), prec)
            cands.append((pf * a.q_scale).numerator)
        hp = min(cands) if cands else None
        lead = b.terms[ob]
        rest = sorted((q, d) for q, d in b.terms.items() if q != ob)
        rem = {q: dict(d) for q, d in a.terms.items()}
        quot: dict = {}
        steps = 0
        while rem:
            e = min(rem)
            qe = e - ob
            if hp is not None and qe >= hp:
                break
            steps += 1
            if hp is None and steps > 100000:
                raise DivisionError("quotient does not terminate; supply a precision")
            qpoly = _laurent_div(rem.pop(e), lead)
            quot[qe] = qpoly
            for qb, db in rest:
                n = qb + qe
                if hp is not None and n - ob >= hp:
                    break
                t = rem.get(n)
                if t is None:
                    t = rem[n] = {}
                get = t.get
                for kb, cb in db.items():
                    for kq, cq in qpoly.items():
                        k = kb + kq
                        t[k] = get(k, 0) - cb * cq
                for k in [k for k, v in t.items() if not v]:
                    del t[k]
                if not t:
                    del rem[n]
        return Series(quot, hp, a.q_scale, a.nvars)

    def __truediv__(self, other) -> "Series":
        if isinstance(other, Series):
            return self.divide(other)
        return self.scalar(Fraction(1) / as_fraction(other))

    def invert(self) -> "Series":
        """Multiplicative inverse; the leading term must be a single monomial."""
        o = self.order_num()
        if o is None:
            raise ZeroDivisionError("cannot invert the zero series")
        if len(self.terms[o]) != 1:
            raise ValueError("ambiguous leading term: lowest q-stratum is not a monomial")
        return Series.one(self.q_scale, self.nvars).divide(self)

    # ----------------------------------------------------------- comparisons
    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        a, b = self._promote(other)
        return a.prec == b.prec and a.terms == b.terms

    def __hash__(self):
        return hash((self.nvars, len(self.terms)))

    def agrees(self, other: "Series", prec=None) -> bool:
        """Equality of all terms below the common precision (and ``prec`` if given)."""
        a, b = self._promote(other)
        p = _min_prec(a.prec, b.prec)
        if prec is not None:
            pn = _prec_num(prec, a.q_scale)
            p = pn if p is None else min(p, pn)
        ta = {q: d for q, d in a.terms.items() if p is None or q < p}
        tb = {q: d for q, d in b.terms.items() if p is None or q < p}
        return ta == tb

    # ------------------------------------------------------ substitutions
    def specialize(self, vec: Sequence[int]) -> "Series":
        """Pull back along ``z -> vec * z``: monomial exponent v becomes ``vec . v``."""
        if len(vec) != self.nvars:
            raise ValueError("length mismatch")
        out: dict = {}
        for q, d in self.terms.items():
            t = out.setdefault(q, {})
            for k, c in d.items():
                v = unpack(k, self.nvars)
                kk = sum(x * y for x, y in zip(vec, v))
                t[kk] = t.get(kk, 0) + c
        return Series(out, self.prec, self.q_scale, 1)

    def linear_zeta(self, matrix: Sequence[Sequence[int]]) -> "Series":
        """Apply ``v -> matrix * v`` to zeta exponent vectors (matrix rows give new variables)."""
        rows = [tuple(r) for r in matrix]
        for r in rows:
            if len(r) != self.nvars:
                raise ValueError("matrix column count must equal the number of zeta variables")
        out: dict = {}
        for q, d in self.terms.items():
            t = out.setdefault(q, {})
            for k, c in d.items():
                v = unpack(k, self.nvars)
                kk = pack([sum(x * y for x, y in zip(r, v)) for r in rows])
                t[kk] = t.get(kk, 0) + c
        return Series(out, self.prec, self.q_scale, len(rows))

    def u_scale(self, l: int) -> "Series":
        """``f(tau, l z)`` for a one-variable series."""
        if self.nvars != 1:
            raise ValueError("u_scale needs one zeta variable")
        return Series({q: {k * l: c for k, c in d.items()} for q, d in self.terms.items()},
                      self.prec, self.q_scale, 1, _clean=(l != 0))

    def scale_q(self, factor) -> "Series":
        """Substitute ``q -> q^factor`` (factor a positive rational)."""
        f = as_fraction(factor)
        if f <= 0:
            raise ValueError("factor must be positive")
        # q^{e} -> q^{e f}: numerators scale by f.numerator, the scale by f.denominator
        n = f.numerator
        terms = {q * n: d for q, d in self.terms.items()}
        return Series(terms, None if self.prec is None else self.prec * n,
                      self.q_scale * f.denominator, self.nvars, _clean=True).reduced()

    def map_coeffs(self, fn) -> "Series":
        """Apply ``fn(q_exponent, zeta_numerators, coeff)`` to every coefficient."""
        out = {}
        for q, d in self.terms.items():
            qf = Fraction(q, self.q_scale)
            out[q] = {k: fn(qf, unpack(k, self.nvars), c) for k, c in d.items()}
        return Series(out, self.prec, self.q_scale, self.nvars)

    def constant_term_in(self, var: int) -> "Series":
        """Coefficient of ``zeta_var^0`` as a series in the remaining variables."""
        out: dict = {}
        for q, d in self.terms.items():
            t = {}
            for k, c in d.items():
                v = unpack(k, self.nvars)
                if v[var] == 0:
                    t[pack(v[:var] + v[var + 1:])] = c
            if t:
                out[q] = t
        return Series(out, self.prec, self.q_scale, self.nvars - 1, _clean=True)

    # ----------------------------------------------------------------- JSON
    def to_json_obj(self) -> dict:
        terms = []
        for q in sorted(self.terms):
            rows = sorted((list(unpack(k, self.nvars)), c) for k, c in self.terms[q].items())
            terms.append([q, [[zv, f"{Fraction(c).numerator}/{Fraction(c).denominator}"] for zv, c in rows]])
        return {"q_scale": self.q_scale, "zeta_vars": self.nvars, "terms": terms, "q_prec": self.prec}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Series":
        nv = obj["zeta_vars"]
        terms = {}
        for q, rows in obj["terms"]:
            terms[int(q)] = {pack(zv): Fraction(c) for zv, c in rows}
        return cls(terms, obj.get("q_prec"), obj["q_scale"], nv)

    @classmethod
    def from_json(cls, text: str) -> "Series":
        return cls.from_json_obj(json.loads(text))


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _mul_prec(pa, oa, pb, ob):
    cands = []
    if oa is None and ob is None:
        return _sum_none(pa, pb)
    if oa is None:
        return None if pa is None else pa + ob
    if ob is None:
        return None if pb is None else pb + oa
    if pa is not None:
        cands.append(pa + ob)
    if pb is not None:
        cands.append(pb + oa)
    return min(cands) if cands else None


def _sum_none(a, b):
    if a is None or b is None:
        return None if (a is None and b is None) else (a if b is None else b)
    return a + b


def _laurent_div(num: dict, den: dict) -> dict:
    """Exact quotient of packed-key Laurent polynomials (lex order on packed keys)."""
    if len(den) == 1:
        (kd, cd), = den.items()
        return {k - kd: _norm(Fraction(c) / cd) if (isinstance(c, Fraction) or c % cd) else c // cd
                for k, c in num.items()}
    dmax = max(den)
    dmin = min(den)
    cmax = den[dmax]
    floor_key = min(num) - dmin
    rem = dict(num)
    quot = {}
    others = [(k, c) for k, c in den.items() if k != dmax]
    while rem:
        top = max(rem)
        kq = top - dmax
        if kq < floor_key:
            raise DivisionError("zeta-Laurent division is not exact")
        c = rem.pop(top)
        cq = Fraction(c) / cmax if isinstance(c, Fraction) or c % cmax else c // cmax
        cq = _norm(cq)
        quot[kq] = cq
        for kd, cd in others:
            k = kd + kq
            v = rem.get(k, 0) - cd * cq
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return quot


# ---------------------------------------------------------------- kernels
def kron_m4(r: int) -> int:
    """Kronecker symbol (-4/r)."""
    if r % 2 == 0:
        return 0
    return 1 if r % 4 == 1 else -1


def kron_12(r: int) -> int:
    """Kronecker symbol (12/r)."""
    m = r % 12
    if m in (1, 11):
        return 1
    if m in (5, 7):
        return -1
    return 0


def _qscale_prec(prec, q_scale):
    pn = _prec_num(prec, q_scale)
    if pn is None or pn <= 0:
        raise ValueError("prec must be positive")
    return pn


def eta(prec, q_scale: int = DEFAULT_QSCALE) -> Series:
    """Dedekind eta as ``sum_{r>=1} (12/r) q^{r^2/24}``."""
    pn = _qscale_prec(prec, q_scale)
    f = q_scale // DEFAULT_QSCALE if q_scale % DEFAULT_QSCALE == 0 else None
    if f is None:
        raise ValueError("q_scale must be a multiple of 24")
    terms = {}
    r = 1
    while r * r * f < pn:
        c = kron_12(r)
        if c:
            terms[r * r * f] = {0: c}
        r += 1
    return Series(terms, pn, q_scale, 0, _clean=True)


def eta_product(prec) -> Series:
    """Dedekind eta as ``q^{1/24} prod (1 - q^n)``."""
    P = as_fraction(prec)
    body = euler_power(1, P - Fraction(1, 24))
    return body.shift(Fraction(1, 24))


def euler_power(r, prec) -> Series:
    """``prod_{n>=1} (1 - q^n)^r`` for rational r, to q-precision ``prec`` (q-scale 24).

    Uses ``g_n = -(r/n) sum_{k=1}^n sigma(k) g_{n-k}``, the logarithmic
    derivative of the Euler product.
    """
    r = as_fraction(r)
    P = as_fraction(prec)
    N = ceil(P)
    if N <= 0:
        return Series.zero(P, DEFAULT_QSCALE, 0)
    sig = [0] * (N + 1)
    for d in range(1, N + 1):
        for m in range(d, N + 1, d):
            sig[m] += d
    g = [Fraction(1)] + [Fraction(0)] * N
    for n in range(1, N):
        s = 0
        for k in range(1, n + 1):
            if g[n - k]:
                s += sig[k] * g[n - k]
        g[n] = -r * s / n
    terms = {n * DEFAULT_QSCALE: {0: g[n]} for n in range(N) if g[n] and n < P}
    return Series(terms, _prec_num(P, DEFAULT_QSCALE), DEFAULT_QSCALE, 0)


def eta_power(e, prec, nvars: int = 0) -> Series:
    """``eta^e`` for rational e to q-precision ``prec``."""
    e = as_fraction(e)
    lead = e / 24
    P = as_fraction(prec)
    body = euler_power(e, P - lead) if P - lead > 0 else Series.zero(Fraction(0), DEFAULT_QSCALE, 0)
    out = body.shift(lead)
    if nvars:
        out = Series(out.terms, out.prec, out.q_scale, nvars, _clean=True)
    return out


def with_nvars(f: Series, nvars: int) -> Series:
    """Reinterpret a zeta-free series as one in ``nvars`` zeta variables."""
    if f.nvars == nvars:
        return f
    if f.nvars != 0:
        for d in f.terms.values():
            if any(k != 0 for k in d):
                raise ValueError("series depends on zeta")
    return Series(f.terms, f.prec, f.q_scale, nvars, _clean=True)


def theta(a: int, prec, direction: Sequence[int] | None = None, q_scale: int = DEFAULT_QSCALE) -> Series:
    """``theta(tau, a z) = sum_{r odd} (-4/r) q^{r^2/8} zeta^{a r/2}``.

    With ``direction`` u (length k) the series is in k variables with
    ``zeta^{(r/2) a u}``, i.e. ``theta(tau, a (u . z))``.
    """
    if a == 0:
        raise ValueError("theta_0 is identically zero")
    if q_scale % 8:
        raise ValueError("q_scale must be a multiple of 8")
    pn = _qscale_prec(prec, q_scale)
    f = q_scale // 8
    if direction is None:
        nv, unit = 1, a
    else:
        nv, unit = len(direction), pack([a * u for u in direction])
    terms = {}
    r = 1
    while r * r * f < pn:
        c = kron_m4(r)
        terms[r * r * f] = {r * unit: c, -r * unit: -c}
        r += 2
    return Series(terms, pn, q_scale, nv, _clean=True)


def theta_product(a: int, prec) -> Series:
    """``q^{1/8} zeta^{a/2} prod (1-q^n)(1-q^n zeta^a)(1-q^{n-1} zeta^{-a})``."""
    if a == 0:
        raise ValueError("theta_0 is identically zero")
    P = as_fraction(prec) - Fraction(1, 8)
    acc = Series.one()
    n = 1
    while n - 1 < P:
        for qe, ze, in ((n, 0), (n, 2 * a), (n - 1, -2 * a)):
            if qe < P:
                acc = (acc * _binom(qe, ze)).truncate(P)
        n += 1
    acc = acc.truncate(P)
    return acc.shift(Fraction(1, 8), (Fraction(a, 2),))


def _binom(qe: int, zkey: int, sign: int = -1, nvars: int = 1) -> Series:
    """``1 + sign * q^qe * zeta^(zkey/2)`` (q-scale 24)."""
    t = {0: {0: 1}}
    qn = qe * DEFAULT_QSCALE
    t.setdefault(qn, {})
    t[qn][zkey] = t[qn].get(zkey, 0) + sign
    return Series(t, None, DEFAULT_QSCALE, nvars)


def quintuple(a: int, prec, q_scale: int = DEFAULT_QSCALE) -> Series:
    """``sum_{r in Z} (12/r) q^{r^2/24} zeta^{a r/2}``."""
    if a == 0:
        raise ValueError("a must be nonzero")
    if q_scale % 24:
        raise ValueError("q_scale must be a multiple of 24")
    pn = _qscale_prec(prec, q_scale)
    f = q_scale // 24
    terms: dict = {}
    r = 1
    while r * r * f < pn:
        c = kron_12(r)
        if c:
            terms[r * r * f] = {r * a: c, -r * a: c}
        r += 1
    return Series(terms, pn, q_scale, 1, _clean=True)


def quintuple_product(a: int, prec) -> Series:
    """Watson's quintuple product form of the series :func:`quintuple`."""
    if a == 0:
        raise ValueError("a must be nonzero")
    P = as_fraction(prec) - Fraction(1, 24)
    acc = Series.one()
    n = 1
    while n - 1 < P:
        for qe, ze, sg in ((n, 0, -1), (n, 2 * a, 1), (n - 1, -2 * a, 1),
                           (2 * n - 1, 4 * a, -1), (2 * n - 1, -4 * a, -1)):
            if qe < P:
                acc = (acc * _binom(qe, ze, sg)).truncate(P)
        n += 1
    acc = acc.truncate(P)
    return acc.shift(Fraction(1, 24), (Fraction(a, 2),))


def quintuple_quotient(a: int, prec) -> Series:
    """``eta * theta_{2a} / theta_a`` by exact series division."""
    P = as_fraction(prec)
    lead = Fraction(1, 8)
    num = with_nvars(eta(P + lead), 1) * theta(2 * a, P + lead)
    return num.divide(theta(a, P + 2 * lead)).truncate(P)


def check_periodicity(f: Series, m) -> bool:
    """Check ``c(n + l r + l^2 m, r + 2 l m) = (-1)^{2 m l} c(n, r)`` for l = +-1.

    Only pairs where both sides lie inside the truncation window are compared.
    """
    if f.nvars != 1:
        raise ValueError("periodicity check needs one zeta variable")
    m = as_fraction(m)
    if (2 * m).denominator != 1 or m < 0:
        raise ValueError("m must be a nonnegative half-integer")
    S = f.q_scale
    # exponents: n = q/S, r = k/2; shift n' = n + l r + l^2 m, r' = r + 2 l m
    mS = m * S
    if mS.denominator != 1 or (Fraction(S, 2)).denominator != 1:
        f = f.rescale(lcm(S, 2 * m.denominator))
        S = f.q_scale
    twom = int(2 * m)
    half_s = S // 2
    msc = int(m * S)
    for q, d in f.terms.items():
        for k, c in d.items():
            for l in (1, -1):
                q2 = q + l * k * half_s + msc
                if f.prec is not None and q2 >= f.prec:
                    continue
                k2 = k + 2 * l * twom
                sign = -1 if (twom * l) % 2 else 1
                if f.terms.get(q2, {}).get(k2, 0) != sign * c:
                    return False
    return True
