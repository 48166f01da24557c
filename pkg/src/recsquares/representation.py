"""Quartic representations of square terms and the gcd quantities around them."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .intkit import core, factorize, is_square, isqrt_exact, rad, valuation
from .quadratic import QuadInt
from .sequence import SeqParams, element


@dataclass(frozen=True)
class GSet:
    g1: int
    g2: int
    g3: int
    g_sq: Fraction
    dprime: int
    n_sq: int

    @property
    def gn_sq(self) -> Fraction:
        """``(|g| * N)**2`` where ``N`` is the 2-adic normaliser."""
        return self.g_sq * self.n_sq


def normaliser_sq(dprime: int) -> int:
    return 2 ** min(valuation(dprime, 2), 6)


def g_quantities(tprime: int, u1: int, u2: int) -> GSet:
    """gcd data for the algebraic integer ``(u1 + u2*sqrt(tprime)) / 2``.

    >>> g_quantities(-1, 8, 4).gn_sq
    Fraction(16, 1)
    """
    if u1 == 0 or u2 == 0:
        raise DomainError("u1 and u2 must be nonzero")
    if tprime == 1 or core(tprime) != tprime:
        raise DomainError(f"t'={tprime} must be squarefree and not 1")
    if (u1 * u1 - tprime * u2 * u2) % 4:
        raise DomainError("(u1 + u2 sqrt t')/2 is not an algebraic integer")
    g1 = math.gcd(u1, u2)
    g2 = math.gcd(u1 // g1, tprime)
    even_gap = ((u1 - u2) // g1) % 2 == 0
    if tprime % 4 == 1 and even_gap:
        g3 = 1
    elif tprime % 4 == 3 and even_gap:
        g3 = 2
    else:
        g3 = 4
    g_sq = Fraction(g1 * g1 * g2, g3)
    dprime = u2 * u2 * tprime / g_sq
    if dprime.denominator != 1:
        raise DomainError("d' is not an integer")
    dprime = int(dprime)
    return GSet(g1, g2, g3, g_sq, dprime, normaliser_sq(dprime))


def _check_b1_negative(p: SeqParams) -> None:
    if p.b0 != 1:
        raise DomainError("requires b = 1")
    if p.n_alpha >= 0:
        raise DomainError("requires N(alpha) < 0")


def gn_closed_form(p: SeqParams, k: int | None = None) -> int:
    """Closed form of ``(|g| * N)**2``; independent of the index."""
    _check_b1_negative(p)
    if k is not None:
        term = element(p, k)
        if k == 0 or not term.integral:
            raise DomainError("term must be integral with k != 0")
    base = math.gcd(p.a * p.a, p.d)
    reduced = p.n_alpha // base
    return base * 2 ** (2 + min(4, valuation(reduced, 2)))


def direct_inputs(p: SeqParams, k: int) -> tuple[int, int, int]:
    """``(t', u1, u2)`` whose ratio ``u/conj(u)`` is the unit-circle point at index k."""
    term = element(p, k)
    if not term.integral:
        raise DomainError("term is not integral")
    tprime = core(p.n_alpha)
    if tprime == 1:
        raise DomainError("N(alpha) is a square")
    cof = isqrt_exact(p.n_alpha // tprime)
    sign = p.n_eps ** abs(k * p.step)
    return tprime, term.x2, 2 * cof * sign


def gn_direct(p: SeqParams, k: int) -> Fraction:
    return g_quantities(*direct_inputs(p, k)).gn_sq


@dataclass(frozen=True)
class Decomposition:
    f: int
    r: int
    s: int
    sign: int
    part: str
    fprime: int
    branch: str
    core: int
    s_cofactor: int
    x: int
    y_root: int
    b: int
    n_eps: int
    gcd_with_s_unchanged: bool


def _gsq(r1: int, b: int, s1: int) -> tuple[int, int]:
    """Paired gcds: the first ignores ``s1``, the second is the full common square."""
    first = math.gcd(4 * b * b * r1 // core(r1), r1 * r1)
    return first, math.gcd(first, s1 * s1)


def _core_shape(c: int) -> str:
    """'p' for a prime, '2p' for twice an odd prime, '' otherwise."""
    fac = factorize(abs(c)).primes
    if len(fac) == 1:
        return "p"
    if len(fac) == 2 and 2 in fac:
        return "2p"
    return ""


def decompose(p: SeqParams, k: int) -> Decomposition:
    """Write ``x_k + N(eps^k)*sqrt(N(alpha))`` via a fourth power in Z[sqrt(core)].

    Requires the even-power sequence, ``b0`` a perfect square, ``k != 0`` and
    ``y_k`` a perfect square with ``x_k != 0``.
    """
    if p.step != 2:
        raise DomainError("decomposition needs the even-power sequence")
    b = p.b
    if b is None:
        raise DomainError("b0 must be a perfect square")
    if k == 0:
        raise DomainError("k must be nonzero")
    n_alpha = p.n_alpha
    if is_square(n_alpha):
        raise DomainError("N(alpha) must not be a square")
    term = element(p, k)
    if not term.integral:
        raise DomainError("term is not integral")
    x, yk = term.x2 // 2, term.y2 // 2
    y = isqrt_exact(yk)
    if y is None or y == 0:
        raise DomainError(f"y_{k} = {yk} is not a positive square")
    if x == 0:
        raise DomainError("x_k must be nonzero")
    ek = p.eps**k
    t, u, n_eps = ek.h, ek.k, ek.norm()
    c = core(n_alpha)
    m = isqrt_exact(n_alpha // c)
    s1 = -u * m
    base = t * b * b + p.a * u
    cands = {"+": base + 2 * b * y, "-": base - 2 * b * y}
    gsq = {key: _gsq(r1, b, s1) for key, r1 in cands.items()}
    reduced = {key: Fraction(cands[key], gsq[key][1]) for key in cands}

    primes = sorted(factorize(c).primes)
    plus = minus = rest = 1
    for q in primes:
        vp, vm = valuation(reduced["+"], q), valuation(reduced["-"], q)
        if vp < vm:
            plus *= q
        elif vm < vp:
            minus *= q
        else:
            rest *= q
    branch = "+" if plus > minus else "-"
    fprime = abs(c) // max(plus * rest, minus * rest)

    neg_square = is_square(-n_alpha)
    shape = "" if neg_square else _core_shape(c)
    if neg_square:
        part = "b"
    elif shape:
        part = "c"
        fprime = 1
        if shape == "2p":
            odd = max(primes)
            vp, vm = valuation(reduced["+"], odd), valuation(reduced["-"], odd)
            branch = "+" if vp <= vm else "-"
    else:
        part = "a"

    r1 = cands[branch]
    first, g_sq = gsq[branch]
    g1 = math.isqrt(g_sq)
    r, s = r1 // g1, s1 // g1
    f = 4 * b * b * r1 // g_sq
    sign = 1
    if part == "b" and f % 2 == 0 and r % 2 and s % 2:
        r, s = (r + s) // 2, (s - r) // 2
        f //= 2
        sign = -1
    # Normalise: the quartic power only sees f**2 and (r, s) up to sign.
    if f < 0:
        f = -f
    if r < 0 or (r == 0 and s < 0):
        r, s = -r, -s
    return Decomposition(f, r, s, sign, part, fprime, branch, c, m, x, y, b, n_eps, first == g_sq)


def _lhs_rhs(dec: Decomposition, a: int) -> tuple[QuadInt, QuadInt]:
    c, m = dec.core, dec.s_cofactor
    lhs = QuadInt.from_parts(dec.x, dec.n_eps * m, c) * (dec.sign * dec.f * dec.f)
    rhs = QuadInt.from_parts(a, m, c) * QuadInt.from_parts(dec.r, dec.s, c) ** 4
    return lhs, rhs


@dataclass(frozen=True)
class DecompositionCheck:
    identity: bool
    root_relation: bool
    divisibility: bool
    general_divisibility: bool
    fprime_ok: bool

    @property
    def ok(self) -> bool:
        return (
            self.identity
            and self.root_relation
            and self.divisibility
            and self.general_divisibility
            and self.fprime_ok
        )


def verify_decomposition(p: SeqParams, dec: Decomposition) -> DecompositionCheck:
    lhs, rhs = _lhs_rhs(dec, p.a)
    c, b2 = dec.core, dec.b * dec.b
    relation = dec.r * dec.r - c * dec.s * dec.s
    root_ok = abs(dec.f * dec.y_root) == abs(dec.b * relation)
    general = 4 * b2 * rad(dec.fprime)
    if dec.part == "b":
        bound = b2
    elif dec.part == "c":
        n_alpha = p.n_alpha
        bound = 4 * b2 if n_alpha % 4 == 1 and p.d % 4 == 0 else 2 * b2
    else:
        bound = general
    fprime_ok = abs(c) % dec.fprime == 0 and dec.fprime < max(2, math.sqrt(abs(c)))
    return DecompositionCheck(
        identity=lhs == rhs,
        root_relation=root_ok,
        divisibility=bound % dec.f == 0,
        general_divisibility=general % dec.f == 0,
        fprime_ok=fprime_ok,
    )
