"""Checks and searches built on the sequence, representation and bound machinery."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator

import mpmath

from .errors import DomainError
from .hypergeom import bounds
from .intkit import core, factorize, is_square, is_squarefree, isqrt_exact, prime_power_base, valuation
from .quadratic import pell4_min
from .representation import gn_closed_form, gn_direct
from .sequence import SeqParams, SquareHit, distinct_squares, element, scan_squares, terms

GAP_A = Fraction("57.32")
GAP_B = Fraction("15.36")
GAP_B_LARGE = 182
GAP_B_FLOOR = Fraction("4.27")


@dataclass(frozen=True)
class GapVerdict:
    part: str
    applicable: bool
    reason: str
    threshold: Fraction
    satisfied: bool


def _at_least_sqrt_bound(y: int, coeff: int, num: int, den: int) -> bool:
    """``y >= coeff * sqrt(num / den)`` decided exactly (``y``, ``coeff`` >= 0)."""
    return y * y * den >= coeff * coeff * num


def gap_check(p: SeqParams, yi: SquareHit, yj: SquareHit, fi: int = 1, fj: int = 1, part: str | None = None) -> GapVerdict:
    """Does the larger square ``yj`` sit above the gap forced by ``yi``?"""
    n_abs, d, b2 = abs(p.n_alpha), p.d, p.b0
    if p.n_alpha >= 0:
        raise DomainError("requires N(alpha) < 0")
    natural = "a" if is_square(n_abs) else "b"
    if part is None:
        part = natural
    if part != natural:
        raise DomainError(f"part ({part}) does not match the squareness of -N(alpha)")
    if yi.k == 0 or yj.k == 0:
        raise DomainError("indices must be nonzero")
    if yj.y <= yi.y:
        raise DomainError("need y_j > y_i")
    y = yi.y
    floor_root = _at_least_sqrt_bound(y, 4, n_abs, d)
    if part == "a":
        threshold = GAP_A * Fraction(d, b2 * n_abs) ** 2 * y**3
        applicable = floor_root and y * d >= b2 * n_abs
        reason = "ok" if applicable else "y_i below hypothesis floor"
    else:
        if fi == 0 or fj == 0:
            raise DomainError("f values must be nonzero")
        large = floor_root and y * d >= GAP_B_FLOOR * b2 * n_abs * n_abs
        const = GAP_B_LARGE if large else GAP_B
        threshold = const * Fraction(b2 * d, fi * fj * n_abs) ** 2 * y**3
        applicable = floor_root
        reason = "ok" if applicable else "y_i below hypothesis floor"
    return GapVerdict(part, applicable, reason, threshold, yj.y > threshold)


def gap_pairs(p: SeqParams, hits: Iterable[SquareHit]) -> list[tuple[SquareHit, SquareHit, GapVerdict]]:
    """Every pair of distinct nonzero-index squares with the part (a) verdict."""
    by_value: dict[int, SquareHit] = {}
    for h in hits:
        if h.k != 0:
            by_value.setdefault(h.y, h)
    out = []
    for lo, hi in combinations(sorted(by_value.values(), key=lambda h: h.y), 2):
        out.append((lo, hi, gap_check(p, lo, hi)))
    return out


@dataclass(frozen=True)
class Threshold:
    """``max(1, 76 |N|^(3/2) / (sqrt(d) * gn_sq))`` with exact comparisons."""

    n_abs: int
    d: int
    gn_sq: int

    def exceeded_by(self, y: int) -> bool:
        if y <= 1:
            return False
        # y * sqrt(d) * gn_sq > 76 |N|^(3/2), both sides positive
        return y * y * self.d * self.gn_sq**2 > 76 * 76 * self.n_abs**3

    @property
    def value(self) -> float:
        return max(1.0, 76 * self.n_abs**1.5 / (math.sqrt(self.d) * self.gn_sq))


def prop41_threshold(p: SeqParams) -> Threshold:
    if p.b0 != 1 or p.n_alpha >= 0 or not is_square(-p.n_alpha):
        raise DomainError("requires b0 = 1 and -N(alpha) a positive square")
    return Threshold(-p.n_alpha, p.d, gn_closed_form(p))


@dataclass(frozen=True)
class QuarticSolutions:
    d: int
    n: int
    complete_up_to: int
    solutions: tuple[tuple[int, int], ...]


def quartic_solutions(d: int, n: int, y_bound: int) -> QuarticSolutions:
    """Positive solutions of ``x^2 - d y^4 = n`` with ``y <= y_bound`` (complete only that far)."""
    if y_bound < 1:
        raise DomainError("y_bound must be positive")
    sols = []
    for y in range(1, y_bound + 1):
        x = isqrt_exact(d * y**4 + n)
        if x:
            sols.append((x, y))
    return QuarticSolutions(d, n, y_bound, tuple(sols))


# Proxy scan over d -------------------------------------------------------------------------------

PROXY_E_CLAIM = Fraction("1.13")
PROXY_Q_CLAIM = 217
PROXY_E_STOP = 2
PROXY_Q_STOP = 300
LARGE_D = 105


@dataclass(frozen=True)
class ProxyRecord:
    a: int
    d: int
    k: int
    x: int
    y: int
    n_alpha: int
    E: float
    proxy_e: float
    proxy_q: float


@dataclass
class ProxyReport:
    d_min: int
    d_max: int
    records: int = 0
    min_proxy_e: ProxyRecord | None = None
    min_proxy_q: ProxyRecord | None = None
    min_E: ProxyRecord | None = None
    small_E: list[ProxyRecord] = field(default_factory=list)
    violations: list[ProxyRecord] = field(default_factory=list)
    gn_mismatches: list[tuple[int, int, int]] = field(default_factory=list)


def _stop_y(n_abs: int, d: int, gn_sq: int) -> float:
    """Past this value of y both proxies exceed their stopping levels."""
    gn = math.sqrt(gn_sq)
    return max(PROXY_E_STOP * n_abs / (0.1832 * gn * math.sqrt(d)), PROXY_Q_STOP * gn / (21.12 * math.sqrt(d)))


def lemma313_scan(d_min: int, d_max: int, precision: int = 64) -> ProxyReport:
    """Proxy minima over ``a^2 < d``, ``b0 = 1`` and every integral ``y_k > 1`` below the stop level."""
    if d_min < 2:
        raise DomainError("d_min must be at least 2")
    report = ProxyReport(d_min, d_max)
    for d in range(d_min, d_max + 1):
        if is_square(d):
            continue
        t, u, _ = pell4_min(d)
        for a in range(1, math.isqrt(d - 1) + 1):
            p = SeqParams(a, 1, d, t, u)
            gn_sq = gn_closed_form(p)
            stop = _stop_y(d - a * a, d, gn_sq)
            for direction in (1, -1):
                k = direction
                while True:
                    term = element(p, k)
                    y2 = term.y2
                    if y2 > 0 and y2 / 2 > stop and (direction > 0 or k < -2):
                        break
                    if term.integral and y2 > 2:
                        _record(report, p, k, term.x2 // 2, y2 // 2, gn_sq, precision)
                    k += direction
    return report


def _record(report: ProxyReport, p: SeqParams, k: int, x: int, y: int, gn_sq: int, precision: int) -> None:
    direct = gn_direct(p, k)
    if direct != gn_sq:
        report.gn_mismatches.append((p.a, p.d, k))
    bs = bounds(p, k, precision=precision)
    rec = ProxyRecord(p.a, p.d, k, x, y, p.n_alpha, float(bs.E), float(bs.proxy_e), float(bs.proxy_q))
    report.records += 1
    if report.min_E is None or rec.E < report.min_E.E:
        report.min_E = rec
    if rec.E < 1:
        report.small_E.append(rec)
    if p.d >= LARGE_D:
        if report.min_proxy_e is None or rec.proxy_e < report.min_proxy_e.proxy_e:
            report.min_proxy_e = rec
        if report.min_proxy_q is None or rec.proxy_q < report.min_proxy_q.proxy_q:
            report.min_proxy_q = rec
        if rec.proxy_e <= PROXY_E_CLAIM or rec.proxy_q <= PROXY_Q_CLAIM:
            report.violations.append(rec)


# Congruence sieve ------------------------------------------------------------------------------

NALPHA_CONDITIONS = ("any", "square", "odd-square", "even-square", "odd", "even")


@dataclass(frozen=True)
class SieveSpec:
    modulus: int
    u: int
    sign: int
    n_alpha: str = "any"
    b: int = 1


@dataclass(frozen=True)
class SieveReport:
    spec: SieveSpec
    survivors: tuple[tuple[int, int, int], ...]
    min_valuations: dict[int, tuple[int, int]]
    forced_gcd_divisor: int | None  # None when nothing survives


def _val_mod(x: int, p: int, e: int) -> int:
    x %= p**e
    return e if x == 0 else valuation(x, p)


def congruence_sieve(spec: SieveSpec) -> SieveReport:
    """Residues ``(a, t, d) mod M`` compatible with a square ``y_1`` or ``y_-1``."""
    m = spec.modulus
    if not 2 <= m <= 10**6 or m**3 > 10**9:
        raise DomainError(f"modulus {m} is not feasible to enumerate")
    if spec.sign not in (4, -4):
        raise DomainError("sign must be +4 or -4")
    if spec.n_alpha not in NALPHA_CONDITIONS:
        raise DomainError(f"unknown N(alpha) condition {spec.n_alpha}")
    squares = {s * s % m for s in range(m)}
    odd_sq = {s * s % m for s in range(1, 2 * m, 2)} if m % 2 == 0 else squares
    even_sq = {s * s % m for s in range(0, 2 * m, 2)} if m % 2 == 0 else squares
    four_sq = {4 * s for s in squares}
    four_sq = {v % m for v in four_sq}
    allowed_neg = {"square": squares, "odd-square": odd_sq, "even-square": even_sq}.get(spec.n_alpha)
    u, b2 = spec.u, spec.b * spec.b
    survivors = []
    for t in range(m):
        for d in range(m):
            if (t * t - d * u * u - spec.sign) % m:
                continue
            for a in range(m):
                n_alpha = a * a - b2 * b2 * d
                if allowed_neg is not None and (-n_alpha) % m not in allowed_neg:
                    continue
                if spec.n_alpha in ("odd", "even") and m % 2 == 0:
                    if n_alpha % 2 != (spec.n_alpha == "odd"):
                        continue
                base = b2 * (t * t + d * u * u)
                cross = 2 * a * t * u
                if (base + cross) % m in four_sq or (base - cross) % m in four_sq:
                    survivors.append((a, t, d))
    if not survivors:
        return SieveReport(spec, (), {}, None)
    mins: dict[int, tuple[int, int]] = {}
    divisor = 1
    for p, e in factorize(m).primes.items():
        va = min(_val_mod(a * a, p, e) for a, _, _ in survivors)
        vd = min(_val_mod(d, p, e) for _, _, d in survivors)
        mins[p] = (va, vd)
        divisor *= p ** min(va, vd)
    return SieveReport(spec, tuple(survivors), mins, divisor)


# Square-count classifier ---------------------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    case: str
    bound: int
    conditions: dict[str, bool]


def _step2_neighbours_square(p: SeqParams) -> bool:
    q = p.with_step(2)
    return any(element(q, k).integral and is_square(element(q, k).y2 // 2) for k in (1, -1))


def classify_theorem14(p: SeqParams) -> Classification:
    """Square-count bound for ``b0 = 1`` and ``-N(alpha)`` a positive square."""
    n = p.n_alpha
    if p.b0 != 1:
        raise DomainError("requires b0 = 1")
    if n >= 0 or not is_square(-n):
        raise DomainError(f"-N(alpha) = {-n} is not a positive square")
    g = math.gcd(p.a * p.a, p.d)
    neighbour = _step2_neighbours_square(p)
    negative_unit = p.n_eps == -1
    conds_a = {
        "u=1": p.u == 1,
        "norm -4": negative_unit,
        "N=12 mod 16": n % 16 == 12,
        "gcd in {1,4}": g in (1, 4),
        "y+-1 square": neighbour,
    }
    if all(conds_a.values()):
        return Classification("a", 3, conds_a)
    conds_b = {
        "u=2": p.u == 2,
        "norm -4": negative_unit,
        "N odd": n % 2 == 1,
        "gcd=1": g == 1,
        "y+-1 square": neighbour,
    }
    if all(conds_b.values()):
        return Classification("b", 3, conds_b)
    return Classification("c", 2, {**conds_a, **conds_b})


# Conjecture scan -------------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRanges:
    b_max: int
    d_max: int
    window: int = 40
    steps: tuple[int, ...] = (2,)
    a_near: int = 20
    a_small: int = 50
    a_modes: tuple[int, ...] = (1, 2)
    b_min: int = 1
    d_min: int = 2
    squarefree_only: bool = True


def core_class(n_alpha: int) -> str:
    m = abs(n_alpha)
    if is_square(m):
        return "square"
    c = core(m)
    primes = factorize(c).primes
    odd = [q for q in primes if q != 2]
    if len(odd) <= 1:
        return "2^l p^m"
    return "general"


def conjecture_limit(p: SeqParams) -> int:
    n = p.n_alpha
    if p.step == 1:
        m = abs(n)
        return 3 if is_square(m) or prime_power_base(m) is not None else 4
    cls = core_class(n)
    limit = {"square": 2, "2^l p^m": 3, "general": 4}[cls]
    if p.b0 == 1 and n < 0:
        limit = min(limit, 2 if is_square(-n) else 3)
    return limit


def a_values(b: int, d: int, ranges: ScanRanges) -> list[int]:
    out: set[int] = set()
    if 1 in ranges.a_modes:
        centre = math.isqrt(d * b**4)
        out.update(range(max(1, centre - ranges.a_near), centre + ranges.a_near + 2))
    if 2 in ranges.a_modes:
        out.update(range(1, ranges.a_small + 1))
    return sorted(a for a in out if is_squarefree(math.gcd(a, b * b)))


@dataclass(frozen=True)
class SequenceRecord:
    params: SeqParams
    n_alpha: int
    core_class: str
    hits: tuple[SquareHit, ...]
    distinct_count: int
    limit: int
    threshold: float | None
    violations: tuple[str, ...]


def examine(p: SeqParams, window: int) -> SequenceRecord:
    hits = tuple(scan_squares(p, window))
    distinct = len(distinct_squares(list(hits)))
    limit = conjecture_limit(p)
    violations = []
    if distinct > limit:
        violations.append(f"distinct squares {distinct} > limit {limit}")
    threshold = None
    n = p.n_alpha
    if p.step == 2 and p.b0 == 1 and n < 0 and is_square(-n):
        th = prop41_threshold(p)
        threshold = th.value
        above = {h.y for h in hits if th.exceeded_by(h.y)}
        if len(above) > 1:
            violations.append(f"{len(above)} distinct squares above the large-square threshold")
        cls = classify_theorem14(p)
        if distinct > cls.bound:
            violations.append(f"distinct squares {distinct} > case ({cls.case}) bound {cls.bound}")
    return SequenceRecord(p, n, core_class(n), hits, distinct, limit, threshold, tuple(violations))


def _work_units(ranges: ScanRanges) -> list[tuple[int, int]]:
    units = []
    for b in range(ranges.b_min, ranges.b_max + 1):
        for d in range(max(2, ranges.d_min), ranges.d_max + 1):
            if not is_square(d) and (is_squarefree(d) or not ranges.squarefree_only):
                units.append((b, d))
    return units


def _run_unit(args: tuple[int, int, ScanRanges]) -> list[SequenceRecord]:
    b, d, ranges = args
    t, u, _ = pell4_min(d)
    out = []
    for a in a_values(b, d, ranges):
        for step in ranges.steps:
            out.append(examine(SeqParams(a, b * b, d, t, u, step), ranges.window))
    return out


def conjecture_scan(ranges: ScanRanges, jobs: int = 1) -> Iterator[SequenceRecord]:
    """Stream one record per sequence in canonical ``(b, d, a, step)`` order."""
    units = [(b, d, ranges) for b, d in _work_units(ranges)]
    if jobs <= 1 or len(units) < 2:
        for unit in units:
            yield from _run_unit(unit)
        return
    from multiprocessing import Pool

    with Pool(jobs) as pool:
        for chunk in pool.imap(_run_unit, units, chunksize=4):
            yield from chunk


# Families and tabulated examples -------------------------------------------------------------

# (a, b) rows with d = 2, t = u = 2 and the indices and roots of their four squares.
TABLE_D2 = (
    (1, 3, (0, -1, 3, -5), (3, 5, 31, 167)),
    (1019, 27, (0, 1, -3, -7), (27, 65, 29, 983)),
    (167, 13, (0, 1, -3, 4), (13, 29, 71, 407)),
    (157, 29, (0, -1, 3, -4), (29, 47, 307, 649)),
    (1, 41, (0, -1, -9, 11), (41, 71, 80753, 470861)),
    (1633, 65, (0, -1, -4, 7), (65, 97, 1331, 24791)),
    (48479, 211, (0, -3, 4, -7), (211, 1007, 6743, 34205)),
    (45649, 677, (0, -1, -4, 4), (677, 1133, 15679, 16825)),
    (1940147, 1217, (0, -3, 4, -11), (1217, 3289, 40573, 3794239)),
    (600589, 2213, (0, -1, -4, 4), (2213, 3673, 50801, 55415)),
    (20509501, 8689, (0, -1, 3, -4), (8689, 13619, 94393, 187603)),
    (255488029, 13457, (0, -1, 3, -4), (13457, 5683, 189241, 15821)),
    (409660129, 17023, (0, -1, -4, -8), (17023, 7073, 7949, 269495)),
    (3032771269, 46313, (0, -1, -4, -8), (46313, 19213, 15269, 516625)),
)

# (d, t, u, a, b) with four distinct squares in the even-power sequence.
FOUR_SQUARE_OTHER_D = (
    (3, 4, 2, 672, 91),
    (6, 10, 4, 78, 7),
    (6, 10, 4, 34986, 149),
    (6, 10, 4, 3663828, 2257),
    (30, 22, 4, 826320, 1111),
    (37, 12, 2, 138, 5),
)

# (d, t, u, a, b, {k: root}) for the odd-power sequence.
STEP1_EXAMPLES = (
    (5, 1, 1, 43, 3, {-3: 5, 0: 3, 11: 53}),
    (10, 6, 2, 1, 1, {0: 1, 1: 2, 2: 5}),
    (5, 1, 1, 153, 4, {-3: 11, 0: 4, 30: 8862}),
    (51, 100, 14, 2, 1, {-1: 6, 0: 1, 1: 8}),
    (5, 1, 1, 7, 1, {-9: 9, 0: 1, 1: 2, 3: 3}),
    (6, 10, 4, 2, 3, {-3: 63, 0: 3, 1: 7, 3: 69}),
)


def family_odd_n(n: int) -> SeqParams:
    """Odd ``n >= 5``: ``y_1 = ((n^2 - 3)/2)^2`` and ``y_-1 = n^2``."""
    if n < 5 or n % 2 == 0:
        raise DomainError("n must be odd and at least 5")
    return SeqParams((n * n - 9) // 4, 1, (n**4 - 2 * n * n + 17) // 16, (n * n - 1) // 2, 2)


def family_prime_norm(n: int) -> SeqParams:
    """``n = 1 mod 4``, ``n > 5``, ``5`` not dividing ``n``: ``N(alpha) = -n``, ``y_1 = ((n+1)/2)^2``."""
    if n <= 5 or n % 4 != 1 or n % 5 == 0:
        raise DomainError("need n > 5, n = 1 mod 4 and 5 not dividing n")
    a = (n - 5) // 4
    return SeqParams(a, 1, (n * n + 6 * n + 25) // 16, 2 * a + 4, 2)


def family_case_a(count: int) -> list[SeqParams]:
    """``a = 2``, ``u = 1``, ``d = t^2 + 4`` with ``y_1`` square and ``N(alpha) = 12 mod 16``.

    ``y_1`` is a square exactly when ``(t+1)^2 - 2 s^2 = -1``; solutions are
    walked with the unit ``3 + 2 sqrt 2`` and filtered on the congruence.
    """
    out = []
    x, s = 1, 1
    while len(out) < count:
        t = x - 1
        if t > 0 and (-t * t) % 16 == 12:
            out.append(SeqParams(2, 1, t * t + 4, t, 1))
        x, s = 3 * x + 4 * s, 2 * x + 3 * s
    return out


def family_large_cutoff(n: int) -> SeqParams:
    """``a = 2n^2 - 3``, ``d = 4n^4 - 8n^2 + 8`` and ``y_-1 = n^2``."""
    a = 2 * n * n - 3
    if n < 2 or a % 5 == 0:
        raise DomainError("need n >= 2 with 5 not dividing 2n^2 - 3")
    return SeqParams(a, 1, 4 * n**4 - 8 * n * n + 8, a + 1, 1)


def family_cutoff_two(a: int, kind: int) -> SeqParams:
    """Sequences with ``y_-1 = 1`` whose first term above 1 sits at ``k = -2``."""
    if a < 1:
        raise DomainError("a must be positive")
    if kind == 1:
        return SeqParams(a, 1, a * a + 4, a, 1)
    if kind == 2:
        return SeqParams(a, 1, a * a + 1, 2 * a, 2)
    raise DomainError("kind must be 1 or 2")
