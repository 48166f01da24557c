"""Quadratic integers ``(h + k*sqrt(d)) / 2`` and the minimal unit of norm +-1."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .intkit import is_square


@dataclass(frozen=True)
class QuadInt:
    """Algebraic integer ``(h + k*sqrt(d)) / 2`` of the order generated over Z.

    The representation requires ``h*h - d*k*k`` to be divisible by 4, which
    is exactly the condition for the number to be integral when ``k`` is an
    integer.  ``d`` need not be squarefree.
    """

    h: int
    k: int
    d: int

    def __post_init__(self):
        if self.d == 0 or is_square(self.d):
            raise DomainError(f"d={self.d} must be a non-square")
        if (self.h * self.h - self.d * self.k * self.k) % 4:
            raise DomainError(f"({self.h} + {self.k}*sqrt({self.d}))/2 is not integral")

    @classmethod
    def from_parts(cls, x: int, y: int, d: int) -> "QuadInt":
        """The number ``x + y*sqrt(d)``."""
        return cls(2 * x, 2 * y, d)

    def _check(self, other: "QuadInt") -> None:
        if self.d != other.d:
            raise DomainError(f"mixed radicands {self.d} and {other.d}")

    def __add__(self, other: "QuadInt") -> "QuadInt":
        self._check(other)
        return QuadInt(self.h + other.h, self.k + other.k, self.d)

    def __sub__(self, other: "QuadInt") -> "QuadInt":
        self._check(other)
        return QuadInt(self.h - other.h, self.k - other.k, self.d)

    def __neg__(self) -> "QuadInt":
        return QuadInt(-self.h, -self.k, self.d)

    def __mul__(self, other):
        if isinstance(other, int):
            return QuadInt(self.h * other, self.k * other, self.d)
        self._check(other)
        h = self.h * other.h + self.d * self.k * other.k
        k = self.h * other.k + self.k * other.h
        return QuadInt(h // 2, k // 2, self.d)

    __rmul__ = __mul__

    def conj(self) -> "QuadInt":
        return QuadInt(self.h, -self.k, self.d)

    def norm(self) -> int:
        return (self.h * self.h - self.d * self.k * self.k) // 4

    def trace(self) -> int:
        return self.h

    def is_unit(self) -> bool:
        return self.norm() in (1, -1)

    def inverse(self) -> "QuadInt":
        n = self.norm()
        if n not in (1, -1):
            raise DomainError("only units are invertible")
        return self.conj() * n

    def __pow__(self, e: int) -> "QuadInt":
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        out = QuadInt(2, 0, self.d)
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def exact_div(self, n: int) -> "QuadInt":
        if self.h % n or self.k % n:
            raise DomainError(f"{self} is not divisible by {n}")
        return QuadInt(self.h // n, self.k // n, self.d)

    @property
    def x(self) -> Fraction:
        return Fraction(self.h, 2)

    @property
    def y(self) -> Fraction:
        return Fraction(self.k, 2)

    def __complex__(self) -> complex:
        root = math.sqrt(abs(self.d))
        return complex(self.h / 2, 0) + (complex(0, root) if self.d < 0 else root) * self.k / 2


def pell4_min(d: int) -> tuple[int, int, int]:
    """Smallest positive ``(t, u)`` with ``t*t - d*u*u = s``, ``s`` in {-4, 4}.

    Returns ``(t, u, s)``; when both signs occur at the minimal ``u`` the
    norm -1 solution wins.

    >>> pell4_min(5), pell4_min(2), pell4_min(40)
    ((1, 1, -4), (2, 2, -4), (6, 1, -4))
    """
    if d < 2 or is_square(d):
        raise DomainError(f"d={d} must be a positive non-square")
    if d <= 16:
        return _pell4_search(d, 10**4)
    # For d > 16 every minimal solution is, after removing a common factor
    # of 2, a convergent of the continued fraction of sqrt(d).
    root = math.isqrt(d)
    m, q, a = 0, 1, root
    p_prev, p = 1, root
    q_prev, qn = 0, 1
    best = None
    while True:
        n = p * p - d * qn * qn
        cand = None
        if n in (4, -4):
            cand = (p, qn, n)
        elif n in (1, -1):
            cand = (2 * p, 2 * qn, 4 * n)
        if cand and (best is None or (cand[1], cand[2]) < (best[1], best[2])):
            best = cand
        if best is not None and qn > best[1]:
            return best
        m = a * q - m
        q = (d - m * m) // q
        a = (root + m) // q
        p_prev, p = p, a * p + p_prev
        q_prev, qn = qn, a * qn + q_prev


def _pell4_search(d: int, u_max: int) -> tuple[int, int, int]:
    for u in range(1, u_max + 1):
        for s in (-4, 4):
            t2 = d * u * u + s
            if t2 > 0:
                t = math.isqrt(t2)
                if t * t == t2:
                    return t, u, s
    raise DomainError(f"no solution with u <= {u_max}")
