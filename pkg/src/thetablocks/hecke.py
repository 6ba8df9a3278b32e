"""Index-raising operators, weight-zero quotients, additive lifts and Borcherds products."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from sympy import bernoulli, divisor_sigma, divisors

from .blocks import ThetaQuotient, expand
from .series import Series, PrecisionError, as_fraction, pack, with_nvars, ZSCALE


@dataclass
class FourierJacobiExpansion:
    """Coefficients of ``p^{t m}`` (``p = e(omega)``), keyed by ``m``; ``p_precision`` is exclusive in ``m``."""

    t: Fraction
    k: Fraction
    coefficients: dict = field(default_factory=dict)
    p_precision: int = 0

    def agrees(self, other: "FourierJacobiExpansion", q_prec=None) -> bool:
        top = min(self.p_precision, other.p_precision)
        for m in range(top):
            a, b = self.coefficients.get(m), other.coefficients.get(m)
            if a is None and b is None:
                continue
            a = a if a is not None else Series.zero(q_prec, nvars=1)
            b = b if b is not None else Series.zero(q_prec, nvars=1)
            if not a.agrees(b, q_prec):
                return False
        return True

    def to_json_obj(self) -> dict:
        return {"t": str(self.t), "k": str(self.k), "p_precision": self.p_precision,
                "coefficients": {str(m): s.to_json_obj() for m, s in sorted(self.coefficients.items())}}


def _require_integral_q(phi: Series):
    for q in phi.terms:
        if (q % phi.q_scale) != 0:
            raise ValueError("V_m needs integral q-exponents (trivial character)")


def _int_prec(phi: Series) -> int:
    p = phi.precision()
    if p is None:
        raise PrecisionError("V_m needs a series with known q-precision")
    return -((-p.numerator) // p.denominator)


def v_m(phi: Series, k, t, m: int) -> Series:
    """``c(n, r) = sum_{d | (n, r, m)} d^{k-1} c_phi(n m / d^2, r / d)``.

    Output precision is ``ceil(prec / m)``; ``d | 0`` holds for every ``d``.
    """
    k = as_fraction(k)
    if k.denominator != 1:
        raise ValueError("V_m needs integral weight")
    if m < 1:
        raise ValueError("m must be positive")
    if phi.nvars != 1:
        raise ValueError("one zeta variable expected")
    _require_integral_q(phi)
    P_in = _int_prec(phi)
    P_out = -((-P_in) // m)
    k1 = int(k) - 1
    out: dict[tuple[int, int], object] = {}
    for qn, zn, c in phi.num_items():
        N = qn // phi.q_scale
        if zn[0] % ZSCALE:
            raise ValueError("V_m needs integral zeta exponents")
        R = zn[0] // ZSCALE
        for d in divisors(m):
            num = N * d * d
            if num % m:
                continue
            n = num // m
            if n % d or n >= P_out:
                continue
            key = (n, d * R)
            out[key] = out.get(key, 0) + Fraction(d) ** k1 * c
    items = [(n, (r,), c) for (n, r), c in out.items() if c]
    return Series.from_items(items, 1, P_out, 24)


def v2_closed_form(phi: Series, k) -> Series:
    """``2^{k-1} phi(2 tau, 2 z) + (phi(tau/2, z) + phi((tau+1)/2, z)) / 2``."""
    k = as_fraction(k)
    _require_integral_q(phi)
    doubled = phi.scale_q(2).u_scale(2).scalar(Fraction(2) ** (int(k) - 1))
    half = phi.scale_q(Fraction(1, 2))
    # phase e(n/2) on the q^{n/2} stratum is (-1)^n
    shifted = half.map_coeffs(lambda q, zv, c: c if (2 * q).numerator % 2 == 0 else -c)
    avg = (half + shifted).scalar(Fraction(1, 2))
    return (doubled + avg).reduced()


def eisenstein_constant(k: int) -> Fraction:
    """``zeta(1-k)/2 = -B_k/(2k)`` for even ``k >= 2``, else 0."""
    if k < 2 or k % 2:
        return Fraction(0)
    b = bernoulli(k)
    return -Fraction(int(b.p), int(b.q)) / (2 * k)


def eisenstein_G(k: int, prec) -> Series:
    """``G_k = zeta(1-k)/2 + sum sigma_{k-1}(n) q^n``; zero unless ``k`` is even and at least 2."""
    P = as_fraction(prec)
    if k < 2 or k % 2:
        return Series.zero(P, nvars=1)
    items = [(0, (0,), eisenstein_constant(k))]
    n = 1
    while n < P:
        items.append((n, (0,), int(divisor_sigma(n, k - 1))))
        n += 1
    return Series.from_items(items, 1, P, 24)


def _check_v2_quotient(theta: ThetaQuotient):
    if theta.character() != 0:
        raise ValueError("V_2 quotient needs trivial character")
    if theta.index().denominator != 1:
        raise ValueError("V_2 quotient needs integral index")
    v = theta.q_order()
    if v.denominator != 1 or v <= 0:
        raise ValueError("V_2 quotient needs integral positive q-order")
    return int(v)


def v2_quotient(theta: ThetaQuotient, prec) -> Series:
    """``(-1)^v (Theta | V_2) / Theta`` to q-precision ``prec``."""
    v = _check_v2_quotient(theta)
    if v % 2 and theta.classify() == "neither":
        raise ValueError("odd q-order needs a block holomorphic at infinity")
    P = as_fraction(prec)
    k = theta.weight()
    f = expand(theta, 2 * (P + v) + 1)
    num = v_m(f, k, theta.index(), 2)
    psi = num.divide(f)
    if v % 2:
        psi = -psi
    return psi.truncate(P)


def q0_part(psi: Series) -> dict[int, object]:
    """``{l: c(0, l)}`` from the ``q^0`` stratum."""
    out = {}
    for zv, c in psi.stratum(0).items():
        if zv[0].denominator != 1:
            raise ValueError("half-integral zeta exponent in a q^0 coefficient")
        out[int(zv[0])] = c
    return out


def borcherds_theta(psi: Series, t) -> tuple[ThetaQuotient, Fraction]:
    """``Th(psi) = eta^{c(0,0)} prod_{l>0} (theta_l/eta)^{c(0,l)}`` and ``C = (1/2) sum_{l>0} l c(0,l)``."""
    c0 = q0_part(psi)
    for c in c0.values():
        if Fraction(c).denominator != 1:
            raise ValueError("singular coefficients must be integral")
    positive = {l: int(c) for l, c in c0.items() if l > 0 and c}
    eta = int(c0.get(0, 0)) - sum(positive.values())
    C = Fraction(sum(l * c for l, c in positive.items()), 2)
    return ThetaQuotient(positive, eta), C


def _coeff_lookup(psi: Series, t: int):
    """``c(n, l)`` via the reduction ``l -> l mod 2t`` at fixed discriminant."""
    prec = psi.precision()

    def c(n: int, l: int):
        lr = ((l + t) % (2 * t)) - t
        shift = l * l - lr * lr
        nr = n - shift // (4 * t)
        if prec is not None and nr >= prec:
            raise PrecisionError(f"coefficient c({nr},{lr}) is beyond the expansion")
        return psi.coeff(nr, (lr,))

    return c


def val1_check(psi: Series, t) -> bool:
    """Non-negativity of ``sum_d c(d^2 n, d l)`` over all singular ``(n, l)``."""
    t = as_fraction(t)
    if t.denominator != 1:
        raise ValueError("integral index expected")
    t = int(t)
    prec = psi.precision()
    if prec is None or prec * 4 <= t:
        raise PrecisionError("expansion must reach q^{t/4} to see every singular class")
    lowest = psi.order()
    if lowest is None:
        return True
    n_min = int(lowest) - (1 if lowest < 0 and lowest.denominator != 1 else 0)
    D_min = min(4 * t * n_min - t * t, -1)
    c = _coeff_lookup(psi, t)
    for l in range(-t + 1, t + 1):
        n = n_min
        while 4 * n * t - l * l < 0:
            D = 4 * n * t - l * l
            total, d = 0, 1
            while d * d * D >= D_min:
                val = c(d * d * n, d * l)
                if Fraction(val).denominator != 1:
                    raise ValueError("non-integral singular coefficient")
                total += val
                d += 1
            if total < 0:
                return False
            n += 1
    return True


def additive_lift(phi: Series, k, t, p_prec: int, q_prec) -> FourierJacobiExpansion:
    """``c(0,0) G_k + sum_{m >= 1} (phi | V_m) p^{t m}`` for ``m < p_prec``."""
    Q = as_fraction(q_prec)
    need = Q * max(p_prec - 1, 1)
    if phi.precision() is not None and phi.precision() < need:
        raise PrecisionError(f"phi needs q-precision {need} for V_m up to m={p_prec - 1}")
    k = as_fraction(k)
    out = FourierJacobiExpansion(as_fraction(t), k, {}, p_prec)
    c00 = phi.coeff(0, (0,))
    if c00 and k.denominator == 1:
        out.coefficients[0] = eisenstein_G(int(k), Q).scalar(c00)
    for m in range(1, p_prec):
        out.coefficients[m] = v_m(phi, k, t, m).truncate(Q)
    return out


def _poly_mul(A: dict, B: dict, top: int, W: Fraction) -> dict:
    out: dict = {}
    for i, a in A.items():
        for j, b in B.items():
            if i + j > top:
                continue
            prod = (a * b).truncate(W)
            out[i + j] = prod if i + j not in out else out[i + j] + prod
    return out


def _binomial(c: int, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out = out * (c - i) / (i + 1)
    return out


def borcherds_product(psi: Series, t, p_prec: int, q_prec) -> FourierJacobiExpansion:
    """``Th(psi) p^{s} prod_{m >= 1} prod_{n, l} (1 - q^n zeta^l p^{t m})^{c(nm, l)}``.

    The shift ``s`` is the index of ``Th(psi)``, so the first coefficient sits
    at ``p^{index(Th)}``; coefficients are keyed by ``p``-exponent over ``t``.
    """
    t = as_fraction(t)
    if t.denominator != 1:
        raise ValueError("integral index expected")
    ti = int(t)
    if not val1_check(psi, ti):
        raise ValueError("the singular divisor sums are not all non-negative")
    Q = as_fraction(q_prec)
    th, _ = borcherds_theta(psi, ti)
    shift = th.index() / t
    if shift.denominator != 1:
        raise ValueError("index of Th(psi) is not a multiple of t")
    shift = int(shift)
    J = p_prec - 1 - shift
    out = FourierJacobiExpansion(t, th.weight(), {}, p_prec)
    if J < 0:
        return out
    w = max(0, -int(psi.order() or 0))
    W = Q + 2 * w * J
    psi_prec = psi.precision()
    if J and psi_prec is not None and psi_prec < W * J:
        raise PrecisionError(f"psi needs q-precision {W * J} for this product")
    by_q: dict[int, list[tuple[int, object]]] = {}
    for qn, zn, c in psi.num_items():
        if qn % psi.q_scale or zn[0] % ZSCALE:
            raise ValueError("integral exponents expected")
        by_q.setdefault(qn // psi.q_scale, []).append((zn[0] // ZSCALE, c))
    poly: dict[int, Series] = {0: Series.one(24, 1)}
    for m in range(1, J + 1):
        for nm in sorted(by_q):
            if nm % m:
                continue
            n = nm // m
            if n >= W:
                continue
            for l, c in by_q[nm]:
                if Fraction(c).denominator != 1:
                    raise ValueError("non-integral exponent in the product")
                c = int(c)
                fac: dict[int, Series] = {}
                for kk in range(0, J // m + 1):
                    b = _binomial(c, kk) * (-1) ** kk
                    if b:
                        fac[m * kk] = Series.monomial(n * kk, (l * kk,), b, 24)
                poly = _poly_mul(poly, fac, J, W)
    th_series = expand(th, Q)
    for j in range(J + 1):
        coeff = poly.get(j)
        if coeff is None:
            continue
        val = (th_series * coeff).truncate(Q)
        if val.precision() is not None and val.precision() < Q:
            raise PrecisionError("q-precision lost in the product expansion")
        if not val.is_zero():
            out.coefficients[shift + j] = val
    return out


def lift_equals_borcherds(theta: ThetaQuotient, p_prec: int, q_prec, psi: Series | None = None) -> bool:
    """``Lift(Theta) = B(psi)`` through ``p^{t (p_prec - 1)}``; default ``psi = (-1)^v Theta|V_2/Theta``."""
    t = theta.index()
    k = theta.weight()
    Q = as_fraction(q_prec)
    J = max(p_prec - 1, 1)
    if psi is None:
        psi = v2_quotient(theta, max(Q * J * (1 + 2 * J), t / 4 + 1))
    phi = expand(theta, Q * J)
    lift = additive_lift(phi, k, t, p_prec, Q)
    bor = borcherds_product(psi, t, p_prec, Q)
    return lift.agrees(bor, Q)
