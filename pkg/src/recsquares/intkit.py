"""Integer helpers: valuations, squarefree kernels, radicals and factoring.

Factoring is trial division by primes below ``TRIAL_LIMIT`` followed by
Brent's variant of Pollard rho under an iteration budget.  Every reported
prime is certified by a deterministic Miller-Rabin test, which is proven
correct below ``MR_DETERMINISTIC_LIMIT``; larger cofactors are reported as
unfactored rather than guessed.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, FactorizationError

TRIAL_LIMIT = 10**6
RHO_BUDGET = 200_000
MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    sieve = bytearray([1]) * (TRIAL_LIMIT + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(TRIAL_LIMIT) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, TRIAL_LIMIT + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def is_prime(n: int) -> bool:
    """Deterministic primality test.

    >>> [p for p in range(20) if is_prime(p)]
    [2, 3, 5, 7, 11, 13, 17, 19]
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= MR_DETERMINISTIC_LIMIT:
        raise DomainError(f"{n} exceeds the certified Miller-Rabin range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n: int, budget: int, rng: random.Random) -> int | None:
    """Return a nontrivial factor of composite odd ``n`` or None if out of budget."""
    spent = 0
    while spent < budget:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1 and spent < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            spent += r
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return None


@dataclass(frozen=True)
class Factorization:
    """Signed factorisation ``sign * prod(p**e)``."""

    sign: int
    primes: dict[int, int] = field(default_factory=dict)

    def value(self) -> int:
        out = self.sign
        for p, e in self.primes.items():
            out *= p**e
        return out

    def __iter__(self):
        return iter(sorted(self.primes.items()))


def factorize(n: int, budget: int = RHO_BUDGET, seed: int = 1) -> Factorization:
    if n == 0:
        raise DomainError("cannot factor 0")
    sign, m = (1, n) if n > 0 else (-1, -n)
    primes: dict[int, int] = {}
    for p in _small_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            primes[p] = e
    if m == 1:
        return Factorization(sign, primes)
    rng = random.Random(seed)
    stack = [m]
    while stack:
        q = stack.pop()
        if q == 1:
            continue
        # Cofactors below TRIAL_LIMIT**2 have no prime factor under TRIAL_LIMIT
        # left, so they are prime; past the certified range rho must split them.
        if q < TRIAL_LIMIT**2 or (q < MR_DETERMINISTIC_LIMIT and is_prime(q)):
            primes[q] = primes.get(q, 0) + 1
            continue
        root = math.isqrt(q)
        if root * root == q:
            stack += [root, root]
            continue
        g = _brent(q, budget, rng)
        if g is None:
            raise FactorizationError(q, primes)
        stack += [g, q // g]
    return Factorization(sign, dict(sorted(primes.items())))


def valuation(n: int | Fraction, p: int) -> int:
    """Exponent of ``p`` in ``n``; rationals give numerator minus denominator."""
    if p < 2:
        raise DomainError("valuation base must be at least 2")
    if n == 0:
        raise DomainError("valuation of 0 is undefined")
    if isinstance(n, Fraction):
        return valuation(n.numerator, p) - valuation(n.denominator, p)
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def core(n: int) -> int:
    """Signed squarefree part: ``core(n) * square == n``.

    >>> core(-16), core(12), core(1)
    (-1, 3, 1)
    """
    fac = factorize(n)
    out = fac.sign
    for p, e in fac.primes.items():
        if e % 2:
            out *= p
    return out


def rad(n: int) -> int:
    """Product of the distinct primes dividing ``n``; ``rad(-1) == 1``."""
    out = 1
    for p in factorize(n).primes:
        out *= p
    return out


def isqrt_exact(n: int) -> int | None:
    """Nonnegative square root of ``n`` when ``n`` is a perfect square."""
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def is_square(n: int) -> bool:
    return isqrt_exact(n) is not None


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorize(n).primes.values())


def prime_power_base(n: int) -> int | None:
    """The prime ``p`` if ``|n| = p**e`` with ``e >= 1``, otherwise None."""
    primes = factorize(n).primes
    return next(iter(primes)) if len(primes) == 1 else None
