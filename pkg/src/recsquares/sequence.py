"""The sequences ``x_k + y_k*sqrt(d) = alpha * eps**(step*k)``.

``alpha = a + b0*sqrt(d)`` and ``eps = (t + u*sqrt(d)) / 2`` is a unit of norm
+-1.  Terms are half-integers in general and are carried doubled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .intkit import is_square, isqrt_exact
from .quadratic import QuadInt

K_CUTOFF_LIMIT = -64

# Squares modulo these moduli, used to reject most candidates before isqrt.
_FILTERS = tuple((m, frozenset(i * i % m for i in range(m))) for m in (64, 63, 65, 11))


def is_square_fast(n: int) -> bool:
    if n < 0:
        return False
    for m, residues in _FILTERS:
        if n % m not in residues:
            return False
    r = math.isqrt(n)
    return r * r == n


@dataclass(frozen=True)
class SeqParams:
    a: int
    b0: int
    d: int
    t: int
    u: int
    step: int = 2

    def __post_init__(self):
        if self.d < 2 or is_square(self.d):
            raise DomainError(f"d={self.d} must be a positive non-square")
        if min(self.a, self.b0, self.t, self.u) < 1:
            raise DomainError("a, b0, t and u must be positive")
        if self.t * self.t - self.d * self.u * self.u not in (4, -4):
            raise DomainError(f"({self.t}, {self.u}) is not a unit for d={self.d}")
        if self.step not in (1, 2):
            raise DomainError("step must be 1 or 2")

    @property
    def n_alpha(self) -> int:
        return self.a * self.a - self.b0 * self.b0 * self.d

    @property
    def n_eps(self) -> int:
        return (self.t * self.t - self.d * self.u * self.u) // 4

    @property
    def alpha(self) -> QuadInt:
        return QuadInt.from_parts(self.a, self.b0, self.d)

    @property
    def eps(self) -> QuadInt:
        return QuadInt(self.t, self.u, self.d)

    @property
    def b(self) -> int | None:
        """Square root of ``b0`` when it is a perfect square."""
        return isqrt_exact(self.b0)

    def with_step(self, step: int) -> "SeqParams":
        return SeqParams(self.a, self.b0, self.d, self.t, self.u, step)

    def as_tuple(self) -> tuple[int, ...]:
        return (self.a, self.b0, self.d, self.t, self.u, self.step)


@dataclass(frozen=True)
class Term:
    k: int
    x2: int
    y2: int

    @property
    def x(self) -> Fraction:
        return Fraction(self.x2, 2)

    @property
    def y(self) -> Fraction:
        return Fraction(self.y2, 2)

    @property
    def integral(self) -> bool:
        return self.x2 % 2 == 0 and self.y2 % 2 == 0


@dataclass(frozen=True)
class SquareHit:
    k: int
    y: int
    root: int
    x: int


def element(p: SeqParams, k: int) -> Term:
    """Exact term ``x_k + y_k*sqrt(d)``.

    >>> element(SeqParams(2, 1, 40, 6, 1), 1).x, element(SeqParams(2, 1, 40, 6, 1), 1).y
    (Fraction(158, 1), Fraction(25, 1))
    """
    w = p.alpha * p.eps ** (p.step * k)
    return Term(k, w.h, w.k)


def _recurrence(p: SeqParams) -> tuple[int, int]:
    """Coefficients ``(T, N)`` with ``z_{k+1} = T z_k - N z_{k-1}``."""
    e = p.eps ** p.step
    return e.trace(), e.norm()


def terms(p: SeqParams, k_min: int, k_max: int) -> list[Term]:
    """Terms for ``k_min <= k <= k_max`` (an interval containing 0) by recurrence."""
    if not k_min <= 0 <= k_max:
        raise DomainError("window must contain 0")
    trace, norm = _recurrence(p)
    first = element(p, 1)
    fwd = [(2 * p.a, 2 * p.b0), (first.x2, first.y2)]
    while len(fwd) <= k_max:
        (x0, y0), (x1, y1) = fwd[-2], fwd[-1]
        fwd.append((trace * x1 - norm * x0, trace * y1 - norm * y0))
    back = [(2 * p.a, 2 * p.b0)]
    if k_min < 0:
        m1 = element(p, -1)
        back.append((m1.x2, m1.y2))
    while len(back) <= -k_min:
        (x0, y0), (x1, y1) = back[-2], back[-1]
        # z_{k-1} = (T z_k - z_{k+1}) / N with N = +-1
        back.append(((trace * x1 - x0) * norm, (trace * y1 - y0) * norm))
    out = [Term(-i, *back[i]) for i in range(-k_min, 0, -1)]
    out += [Term(i, *fwd[i]) for i in range(0, k_max + 1)]
    return out


def scan_squares(p: SeqParams, window: int) -> list[SquareHit]:
    """Indices ``|k| <= window`` where ``y_k`` is a positive integral square."""
    if window < 0:
        raise DomainError("window must be nonnegative")
    hits = []
    for term in terms(p, -window, window):
        if term.y2 > 0 and term.integral:
            y = term.y2 // 2
            if is_square_fast(y):
                hits.append(SquareHit(term.k, y, math.isqrt(y), term.x2 // 2))
    return hits


def distinct_squares(hits: list[SquareHit]) -> list[int]:
    return sorted({h.y for h in hits})


def _require_step2_negative(p: SeqParams) -> None:
    if p.step != 2:
        raise DomainError("only defined for the even-power sequence")
    if p.n_alpha >= 0:
        raise DomainError("requires N(alpha) < 0")


def k_cutoff(p: SeqParams) -> int:
    """Largest negative ``k`` with ``y_k > b0``, searching down to -64."""
    _require_step2_negative(p)
    for term in terms(p, K_CUTOFF_LIMIT, 0)[::-1]:
        if term.k < 0 and term.y2 > 2 * p.b0:
            return term.k
    raise DomainError(f"no k >= {K_CUTOFF_LIMIT} with y_k > b0")


def growth_factor(p: SeqParams) -> Fraction:
    """Guaranteed ratio between consecutive terms away from the turning point."""
    du2 = p.d * p.u * p.u
    if p.n_eps == 1:
        return Fraction(du2)
    if (p.d, p.t, p.u) == (5, 1, 1):
        return Fraction(2 * du2, 5)
    return Fraction(5 * du2, 8)


def lower_bound_y(p: SeqParams, k: int) -> Fraction:
    """Explicit lower bound for ``y_k`` when ``k != 0`` and ``N(alpha) < 0``."""
    _require_step2_negative(p)
    if k == 0:
        raise DomainError("k must be nonzero")
    base = Fraction(abs(p.n_alpha) * p.u * p.u, 4 * p.b0)
    exponent = k - 1 if k > 0 else max(0, k_cutoff(p) - k)
    return base * growth_factor(p) ** exponent
