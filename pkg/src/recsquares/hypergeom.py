"""Hypergeometric Pade approximants to the fourth root and their bounds.

Polynomial coefficients are exact rationals; anything involving
``exp(1.68)``, fourth roots or Gauss ``2F1`` is evaluated with mpmath at a
caller-chosen binary precision.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import DomainError
from .intkit import core, isqrt_exact
from .quadratic import QuadInt
from .representation import direct_inputs, g_quantities
from .sequence import SeqParams, element

DEFAULT_PRECISION = int(os.environ.get("RECSQUARES_PRECISION", "256"))
LOG_D4 = Fraction(168, 100)  # exponent of the denominator growth constant
K0 = Fraction(89, 100)
ELL0_FACTOR = Fraction(1, 5)
C41 = Fraction(83, 100)
C42 = Fraction(1, 5)


def _nu(m: int) -> Fraction:
    if m not in (1, 3):
        raise DomainError("m must be 1 or 3")
    return Fraction(m, 4)


@lru_cache(maxsize=None)
def xpoly(r: int, m: int) -> tuple[Fraction, ...]:
    """Coefficients (lowest degree first) of ``2F1(-r-nu, -r; 1-nu; z)``, ``nu = m/4``.

    >>> xpoly(1, 1), xpoly(1, 3)
    ((Fraction(1, 1), Fraction(5, 3)), (Fraction(1, 1), Fraction(7, 1)))
    """
    if r < 0:
        raise DomainError("r must be nonnegative")
    nu = _nu(m)
    coeffs = [Fraction(1)]
    for j in range(r):
        nxt = coeffs[-1] * (-r - nu + j) * (-r + j) / ((1 - nu + j) * (j + 1))
        coeffs.append(nxt)
    return tuple(coeffs)


def ypoly(r: int, m: int) -> tuple[Fraction, ...]:
    """``z**r * X(1/z)``: the reversed coefficient list."""
    return xpoly(r, m)[::-1]


@lru_cache(maxsize=None)
def common_denominator(r: int, ms: tuple[int, ...] = (1, 3)) -> int:
    out = 1
    for m in ms:
        for c in xpoly(r, m):
            out = math.lcm(out, c.denominator)
    return out


@lru_cache(maxsize=None)
def _shifted_sums(r: int, m: int) -> tuple[Fraction, ...]:
    """``e_i = sum_j c_j * C(j, i)``: coefficients of ``X(1 + w)`` in ``w``."""
    c = xpoly(r, m)
    return tuple(sum(c[j] * math.comb(j, i) for j in range(i, r + 1)) for i in range(r + 1))


@lru_cache(maxsize=None)
def denominators(r: int, dprime: int, ms: tuple[int, ...] = (1, 3)) -> tuple[int, int]:
    """``(D, N)``: ``D`` clears every coefficient of ``X`` for the given ``m``;
    ``N`` is the largest integer with ``(D/N) X(1 - sqrt(d') x)`` still integral
    over the ring of integers of ``Q(sqrt(d'))``.

    An odd power of ``sqrt(d')`` is ``d'**(i//2) * f * sqrt(core(d'))`` with
    ``f**2 = d' / core(d')``, and a rational multiple of ``sqrt(core(d'))`` is
    integral exactly when the multiplier is a rational integer.

    >>> denominators(1, -1)
    (3, 1)
    >>> denominators(1, -20)
    (3, 2)
    """
    if r < 0:
        raise DomainError("r must be nonnegative")
    if dprime == 0:
        raise DomainError("d' must be nonzero")
    big_d = common_denominator(r, ms)
    root = isqrt_exact(dprime)
    square_part = 1 if root is not None else isqrt_exact(dprime // core(dprime))
    n = 0
    for m in ms:
        for i, e in enumerate(_shifted_sums(r, m)):
            if root is not None:
                w = big_d * e * root**i
            else:
                w = big_d * e * dprime ** (i // 2) * (square_part if i % 2 else 1)
            n = math.gcd(n, int(w))
    return big_d, n


def _gamma_ratio_lower(r: int) -> Fraction:
    """``Gamma(3/4) r! / Gamma(r + 3/4)`` as an exact product."""
    out = Fraction(1)
    for j in range(r):
        out *= Fraction(j + 1) / (j + Fraction(3, 4))
    return out


def _gamma_ratio_upper(r: int) -> Fraction:
    """``Gamma(r + 5/4) / (Gamma(1/4) r!)`` as an exact product."""
    out = Fraction(1, 4)
    for j in range(1, r + 1):
        out *= (j + Fraction(1, 4)) / j
    return out


@dataclass(frozen=True)
class SweepRow:
    r: int
    ratio_lower: mpmath.mpf
    ratio_upper: mpmath.mpf


def denominator_ratio_sweep(
    r_max: int, dprime: int = -1, precision: int = DEFAULT_PRECISION, ms: tuple[int, ...] = (1,)
) -> list[SweepRow]:
    """Growth-normalised coefficient-size ratios for ``1 <= r <= r_max``.

    Each ratio is the Gamma factor times ``D/N`` times ``(N_2 / exp(1.68))**r``
    where ``N_2`` is the 2-adic normaliser of ``d'``.  Only the ``m = 1``
    polynomial enters the approximants, so it is the default here.
    """
    nsq = 2 ** min(_v2(dprime), 6)
    rows = []
    with mpmath.workprec(precision):
        growth = mpmath.sqrt(nsq) / mpmath.exp(mpmath.mpf(LOG_D4.numerator) / LOG_D4.denominator)
        for r in range(1, r_max + 1):
            big_d, n = denominators(r, dprime, ms)
            scale = growth**r * big_d / n
            lo = _gamma_ratio_lower(r)
            hi = _gamma_ratio_upper(r)
            rows.append(
                SweepRow(
                    r,
                    scale * mpmath.mpf(lo.numerator) / lo.denominator,
                    scale * mpmath.mpf(hi.numerator) / hi.denominator,
                )
            )
    return rows


def _v2(n: int) -> int:
    return (n & -n).bit_length() - 1


def pochhammer_bounds(r: int) -> tuple[bool, bool]:
    """Two elementary inequalities on Pochhammer ratios, checked in high precision."""
    if r < 1:
        raise DomainError("r must be positive")
    num = Fraction(1)
    for j in range(r + 1):
        num *= j + Fraction(1, 4)
    den = math.prod(range(r + 1, 2 * r + 2))
    left = num / den
    with mpmath.workprec(200):
        quarter_root = mpmath.root(r, 4)
        lower = mpmath.mpf(5) / (24 * mpmath.mpf(4) ** r * quarter_root)
        first = lower <= mpmath.mpf(left.numerator) / left.denominator * (1 + mpmath.mpf(2) ** -150)
        g = _gamma_ratio_lower(r)
        upper = 4 * quarter_root / 3
        second = mpmath.mpf(g.numerator) / g.denominator <= upper * (1 + mpmath.mpf(2) ** -150)
    return bool(first), bool(second)


@dataclass(frozen=True)
class Approximant:
    """``p_r`` and ``q_r`` as exact numerators over the common real scale.

    ``p_r = p_num / (N * g**r)`` with ``g = sqrt(g_sq)``, and likewise for q.
    """

    r: int
    p_num: QuadInt
    q_num: QuadInt
    n: int
    g_sq: Fraction
    omega: mpmath.mpc
    p: mpmath.mpc
    q: mpmath.mpc
    residual: mpmath.mpc
    remainder: mpmath.mpc
    precision: int

    @property
    def error(self) -> mpmath.mpf:
        return abs(self.residual - self.remainder)

    def is_algebraic_integer(self) -> bool | None:
        """Integrality of ``p_r`` when the scale is rational, or of ``p_r**2`` otherwise."""
        return _scaled_integral(self.p_num, self.n, self.g_sq, self.r)


def _scaled_integral(num: QuadInt, n: int, g_sq: Fraction, r: int) -> bool:
    # p = num / (n * g**r); test p (r even) or p**2 (r odd) for integrality.
    if r % 2 == 0:
        scale = n * g_sq ** (r // 2)
        h, k = Fraction(num.h) / scale, Fraction(num.k) / scale
    else:
        sq = num * num
        scale = n * n * g_sq**r
        h, k = Fraction(sq.h) / scale, Fraction(sq.k) / scale
    if h.denominator != 1 or k.denominator != 1:
        return False
    return (h.numerator**2 - num.d * k.numerator**2) % 4 == 0


def _homogeneous(coeffs, first: QuadInt, second: QuadInt, r: int) -> QuadInt:
    """``sum_j coeffs[j] * first**j * second**(r - j)`` for integer coeffs."""
    total = QuadInt(0, 0, first.d)
    for j, c in enumerate(coeffs):
        if c:
            total = total + (first**j * second ** (r - j)) * c
    return total


def _to_mpc(z: QuadInt) -> mpmath.mpc:
    root = mpmath.sqrt(abs(z.d))
    half = mpmath.mpf(z.h) / 2
    if z.d < 0:
        return mpmath.mpc(half, root * z.k / 2)
    return mpmath.mpc(half + root * z.k / 2, 0)


def remainder_poly(r: int, m: int, z) -> mpmath.mpc:
    """``(z-1)**(2r+1) * prod(nu+i)/prod(r+1+i) * 2F1(r+1-nu, r+1; 2r+2; 1-z)``."""
    nu = mpmath.mpf(m) / 4
    lead = mpmath.fprod(nu + i for i in range(r + 1)) / mpmath.fprod(range(r + 1, 2 * r + 2))
    return (z - 1) ** (2 * r + 1) * lead * mpmath.hyp2f1(r + 1 - nu, r + 1, 2 * r + 2, 1 - z)


def approx_pair(p: SeqParams, k: int, r: int, precision: int = DEFAULT_PRECISION) -> Approximant:
    """Approximants to the fourth root of ``omega_k`` built from the term at index k.

    The residual ``q_r * omega**(1/4) - p_r`` is computed with enough guard
    bits to absorb cancellation, so that it is accurate to ``precision`` bits
    relative to 1.
    """
    if r < 0:
        raise DomainError("r must be nonnegative")
    if precision < 64:
        raise DomainError("precision must be at least 64 bits")
    if k == 0:
        raise DomainError("k must be nonzero")
    tprime, u1, u2 = direct_inputs(p, k)
    gs = g_quantities(tprime, u1, u2)
    big_d, n = denominators(r, gs.dprime, (1,))
    u = QuadInt(u1, u2, tprime)
    sigma = u.conj()
    ints = [int(c * big_d) for c in xpoly(r, 1)]
    p_num = _homogeneous(ints, u, sigma, r)
    q_num = _homogeneous(ints, sigma, u, r)
    bits = precision + 64 + (abs(p_num.h) + abs(p_num.k) * abs(tprime)).bit_length()
    with mpmath.workprec(bits):
        scale = n * mpmath.sqrt(mpmath.mpf(gs.g_sq.numerator) / gs.g_sq.denominator) ** r
        uc, sc = _to_mpc(u), _to_mpc(sigma)
        omega = uc / sc
        pv = _to_mpc(p_num) / scale
        qv = _to_mpc(q_num) / scale
        root4 = mpmath.exp(1j * mpmath.arg(omega) / 4)
        residual = qv * root4 - pv
        remainder = mpmath.mpf(big_d) / scale * sc**r * remainder_poly(r, 1, omega)
    return Approximant(r, p_num, q_num, n, gs.g_sq, omega, pv, qv, residual, remainder, precision)


def quartic_root_alignment(omega, z) -> int:
    """``j`` in 0..3 minimising ``|omega**(1/4) - i**j * z|`` (principal branch)."""
    with mpmath.workprec(DEFAULT_PRECISION):
        omega, z = mpmath.mpc(omega), mpmath.mpc(z)
        if omega == 0:
            raise DomainError("omega must be nonzero")
        root = mpmath.exp(mpmath.log(omega) / 4)
        dists = [abs(root - (1j) ** j * z) for j in range(4)]
        best = min(dists)
        tol = mpmath.mpf(2) ** (-DEFAULT_PRECISION // 2)
        return next(j for j, dist in enumerate(dists) if dist - best <= tol)


def omega_factors(c0: float, precision: int = 128) -> mpmath.mpf:
    """Smallest positive root of ``x^8 - 8x^6 + 20x^4 - 16x^2 + c0^2``."""
    if not 0 < c0 < 2:
        raise DomainError("c0 must lie in (0, 2)")
    with mpmath.workprec(precision):
        c0 = mpmath.mpf(c0)
        roots = mpmath.polyroots([1, -8, 20, -16, c0 * c0], maxsteps=200, extraprec=precision)
        real = [mpmath.re(x) for x in roots if abs(mpmath.im(x)) < mpmath.mpf(2) ** (-precision // 2)]
        pos = [x for x in real if x > 0]
        return mpmath.sqrt(min(pos))


def omega_factor_inv(c1: float, precision: int = 128) -> mpmath.mpf:
    """``(2 - c1**2) * sqrt(4 - c1**2)``."""
    if not 0 <= c1 < 2:
        raise DomainError("c1 must lie in [0, 2)")
    with mpmath.workprec(precision):
        c1 = mpmath.mpf(c1)
        return (2 - c1 * c1) * mpmath.sqrt(4 - c1 * c1)


@dataclass(frozen=True)
class BoundSet:
    E: mpmath.mpf
    Q: mpmath.mpf
    k0: Fraction
    ell0: mpmath.mpf
    c: Fraction
    gn_sq: Fraction
    phi: mpmath.mpf
    proxy_e: mpmath.mpf
    proxy_q: mpmath.mpf

    @property
    def usable(self) -> bool:
        return self.E > 1 and self.Q > 1


def d4(precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
    with mpmath.workprec(precision):
        return mpmath.exp(mpmath.mpf(LOG_D4.numerator) / LOG_D4.denominator)


def bounds(p: SeqParams, k: int, c: float | Fraction = Fraction(3, 4), precision: int = DEFAULT_PRECISION) -> BoundSet:
    """Approximation-quality parameters for the term at index k (b0 = 1, N(alpha) < 0).

    ``proxy_e`` and ``proxy_q`` are the simplified lower bounds for ``E``
    and ``Q`` in terms of ``y_k`` used for large ``d``.
    """
    if p.b0 != 1 or p.n_alpha >= 0:
        raise DomainError("requires b0 = 1 and N(alpha) < 0")
    term = element(p, k)
    if k == 0 or not term.integral or term.y2 <= 2:
        raise DomainError("requires k != 0 and integral x_k, y_k with y_k > 1")
    c = Fraction(c)
    tprime, u1, u2 = direct_inputs(p, k)
    gs = g_quantities(tprime, u1, u2)
    y = term.y2 // 2
    with mpmath.workprec(precision):
        big = d4(precision)
        gn = mpmath.sqrt(mpmath.mpf(gs.gn_sq.numerator) / gs.gn_sq.denominator)
        span = abs(u1) + mpmath.sqrt(u1 * u1 - tprime * u2 * u2)
        e_val = gn * span / (big * u2 * u2 * abs(tprime))
        q_val = big * span / gn
        omega = _to_mpc(QuadInt(u1, u2, tprime)) / _to_mpc(QuadInt(u1, -u2, tprime))
        phi = mpmath.arg(omega)
        root_d = mpmath.sqrt(p.d)
        proxy_e = mpmath.mpf("0.1832") * gn * root_d * y / abs(p.n_alpha)
        proxy_q = mpmath.mpf("21.12") * root_d * y / gn
        ell0 = abs(phi) * ELL0_FACTOR.numerator / ELL0_FACTOR.denominator
    return BoundSet(e_val, q_val, K0, ell0, c, gs.gn_sq, phi, proxy_e, proxy_q)


@dataclass(frozen=True)
class R0Result:
    r0: int
    lb_mismatch: mpmath.mpf
    lb_match: mpmath.mpf


def r0_and_lowerbound(bs: BoundSet, q_abs, max_r: int = 100_000) -> R0Result:
    """Smallest positive ``r0`` with ``(Q - 1/E) ell0 |q| / (Q - 1) < c E**r0``.

    >>> from fractions import Fraction as F
    >>> bs = BoundSet(2, 10, F(89, 100), F(1, 10), F(3, 4), F(1), 0, 0, 0)
    >>> r0_and_lowerbound(bs, 100).r0
    4
    """
    E, Q = mpmath.mpf(bs.E), mpmath.mpf(bs.Q)
    if not (E > 1 and Q > 1):
        raise DomainError("E and Q must exceed 1")
    c = mpmath.mpf(bs.c.numerator) / bs.c.denominator
    if not 0 < c < 1:
        raise DomainError("c must lie in (0, 1)")
    k0 = mpmath.mpf(bs.k0.numerator) / bs.k0.denominator
    ell0 = mpmath.mpf(bs.ell0) if not isinstance(bs.ell0, Fraction) else mpmath.mpf(bs.ell0.numerator) / bs.ell0.denominator
    threshold = (Q - 1 / E) * ell0 * mpmath.mpf(q_abs) / (Q - 1)
    r0, power = 1, E
    while not threshold < c * power:
        r0 += 1
        power *= E
        if r0 > max_r:
            raise DomainError("r0 search exceeded its limit")
    return R0Result(r0, (1 - c) / (k0 * Q**r0), (1 - c / E) / (k0 * Q ** (r0 + 1)))
