"""Acceptance criteria, one test each.

Run under pytest for the summary table, or directly with
``python tests/test_acceptance.py`` for the same lines on stdout.
"""
import math
import random
import time
from functools import lru_cache

import mpmath
import pytest

from recsquares import analysis, hypergeom, representation
from recsquares.errors import DomainError
from recsquares.intkit import is_square
from recsquares.quadratic import pell4_min
from recsquares.sequence import SeqParams, element, scan_squares


def table_rows():
    """Exact index sets and roots for every (a, b) row with d = 2, t = u = 2."""
    start = time.perf_counter()
    bad = []
    for a, b, ks, roots in analysis.TABLE_D2:
        hits = scan_squares(SeqParams(a, b * b, 2, 2, 2), 80)
        got = {h.k: h.root for h in hits}
        if got != dict(zip(ks, roots)):
            bad.append((a, b, got))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    return ok, f"{len(analysis.TABLE_D2) - len(bad)}/14 rows exact in {elapsed:.1f}s" + (f"; mismatches {bad}" if bad else "")


def step1_examples():
    wanted = {(5, 1, 1, 43, 3), (10, 6, 2, 1, 1), (5, 1, 1, 7, 1), (6, 10, 4, 2, 3)}
    bad = []
    for d, t, u, a, b, roots in analysis.STEP1_EXAMPLES:
        if (d, t, u, a, b) not in wanted:
            continue
        hits = scan_squares(SeqParams(a, b * b, d, t, u, step=1), 40)
        if {h.k: h.root for h in hits} != roots:
            bad.append((d, t, u, a, b))
    return not bad, f"{4 - len(bad)}/4 step-1 square sets exact" + (f"; mismatches {bad}" if bad else "")


def quartic():
    start = time.perf_counter()
    first = analysis.quartic_solutions(17, -16, 10**4).solutions
    second = analysis.quartic_solutions(68, -64, 10**4).solutions
    elapsed = time.perf_counter() - start
    ok = set(first) == {(1, 1), (16, 2), (103, 5)} and set(second) == {(2, 1), (32, 2), (206, 5)} and elapsed < 5
    return ok, f"{first} and {second} in {elapsed:.2f}s"


@lru_cache(maxsize=None)
def proxy_report():
    start = time.perf_counter()
    rep = analysis.lemma313_scan(2, 1000)
    return rep, time.perf_counter() - start


def lemma313_extremals():
    rep, elapsed = proxy_report()
    t, u, _ = pell4_min(104)
    e_val = float(hypergeom.bounds(SeqParams(9, 1, 104, t, u), -1).E)
    pe, pq = rep.min_proxy_e, rep.min_proxy_q
    claims = {
        "E(9,104)=0.973": abs(e_val - 0.973) <= 0.001,
        "min proxy1=1.139 at (11,140)": (pe.a, pe.d) == (11, 140) and abs(pe.proxy_e - 1.139) <= 0.001,
        "min proxy2=217.3 at (10,140)": (pq.a, pq.d) == (10, 140) and abs(pq.proxy_q - 217.3) <= 0.1,
        "no violation for d>=105": not rep.violations,
    }
    ok = all(claims.values()) and elapsed < 600
    observed = (
        f"E(9,104)={e_val:.5f}; "
        f"min proxy1={pe.proxy_e:.5f} at (a,d,k,x,y)={(pe.a, pe.d, pe.k, pe.x, pe.y)}; "
        f"min proxy2={pq.proxy_q:.3f} at {(pq.a, pq.d, pq.k, pq.x, pq.y)}; "
        f"{len(rep.violations)} violations; {rep.records} records in {elapsed:.0f}s"
    )
    failed = [name for name, good in claims.items() if not good]
    return ok, observed + (f"; unmet: {', '.join(failed)}" if failed else "")


def denominator_ratios():
    start = time.perf_counter()
    rows = hypergeom.denominator_ratio_sweep(155)
    top_lo = max(rows, key=lambda row: row.ratio_lower)
    top_hi = max(rows, key=lambda row: row.ratio_upper)
    elapsed = time.perf_counter() - start
    ok = (
        top_lo.r == 3
        and top_hi.r == 3
        and top_lo.ratio_lower < 0.83
        and top_hi.ratio_upper < 0.2
        and elapsed < 60
    )
    return ok, (
        f"maxima {mpmath.nstr(top_lo.ratio_lower, 6)} at r={top_lo.r} and "
        f"{mpmath.nstr(top_hi.ratio_upper, 6)} at r={top_hi.r} over 1<=r<=155 in {elapsed:.1f}s"
    )


SCAN = analysis.ScanRanges(b_max=20, d_max=200, window=40, steps=(1, 2))


@lru_cache(maxsize=None)
def conjecture_summary():
    start = time.perf_counter()
    count, violations, harvest = 0, [], []
    for rec in analysis.conjecture_scan(SCAN):
        count += 1
        if rec.violations:
            violations.append((rec.params.as_tuple(), rec.violations))
        p = rec.params
        if p.step == 2 and not is_square(p.n_alpha):
            harvest.extend((p, h.k) for h in rec.hits if h.k != 0 and h.x != 0)
    return count, violations, harvest, time.perf_counter() - start


def decomposition_suite():
    _, _, harvest, _ = conjecture_summary()
    parts = {"a": 0, "b": 0, "c": 0}
    failures = []
    for p, k in harvest:
        dec = representation.decompose(p, k)
        check = representation.verify_decomposition(p, dec)
        parts[dec.part] += 1
        if not check.ok:
            failures.append((p.as_tuple(), k, check))
    ok = len(harvest) >= 1000 and not failures and all(parts.values())
    return ok, f"{len(harvest)} cases (parts a/b/c: {parts['a']}/{parts['b']}/{parts['c']}), {len(failures)} failures"


def gn_equivalence():
    rep, _ = proxy_report()
    ok = rep.records >= 1000 and not rep.gn_mismatches
    return ok, f"{rep.records} (params, k) cases compared, {len(rep.gn_mismatches)} mismatches"


def large_square_scan():
    start = time.perf_counter()
    ranges = analysis.ScanRanges(b_max=1, d_max=500, window=40, steps=(2,), squarefree_only=False)
    seen, bad = 0, []
    for rec in analysis.conjecture_scan(ranges):
        if rec.threshold is None:
            continue
        seen += 1
        th = analysis.prop41_threshold(rec.params)
        above = {h.y for h in rec.hits if th.exceeded_by(h.y)}
        if len(above) > 1:
            bad.append(rec.params.as_tuple())
    elapsed = time.perf_counter() - start
    return not bad and elapsed < 600, f"{seen} sequences with -N square, {len(bad)} with two squares above threshold, {elapsed:.0f}s"


def conjecture_scan():
    count, violations, _, elapsed = conjecture_summary()
    ok = not violations and elapsed < 1800
    return ok, f"{count} sequences (b<=20, squarefree d<=200, both steps), {len(violations)} violations, {elapsed:.0f}s" + (
        f"; first {violations[:3]}" if violations else ""
    )


def _random_valid_cases(count, seed=20240101):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        d = rng.randrange(2, 600)
        if is_square(d):
            continue
        t, u, _ = pell4_min(d)
        a = rng.randrange(1, math.isqrt(d) + 1)
        k = rng.choice((-3, -2, -1, 1, 2, 3))
        p = SeqParams(a, 1, d, t, u)
        if p.n_alpha >= 0 or not element(p, k).integral or element(p, k).y2 <= 2:
            continue
        bs = hypergeom.bounds(p, k)
        if bs.usable and abs(bs.phi) < mpmath.pi / 3:
            out.append((p, k, bs))
    return out


def hypergeometric_numerics():
    cases = _random_valid_cases(60)
    worst_err = mpmath.mpf(0)
    worst_q = worst_r = 0.0
    bad = []
    for p, k, bs in cases:
        prev = None
        for r in range(0, 31):
            ap = hypergeom.approx_pair(p, k, r, precision=256)
            worst_err = max(worst_err, ap.error)
            if ap.error >= mpmath.mpf(10) ** -30 or not ap.is_algebraic_integer():
                bad.append((p.as_tuple(), k, r, "identity"))
            if prev is not None and prev.p_num * ap.q_num == ap.p_num * prev.q_num:
                bad.append((p.as_tuple(), k, r, "degenerate"))
            prev = ap
            if r == 0:
                continue
            q_ratio = abs(ap.q) / (mpmath.mpf(bs.k0.numerator) / bs.k0.denominator * bs.Q**r)
            r_ratio = abs(ap.remainder) / (bs.ell0 * bs.E ** (-r))
            worst_q, worst_r = max(worst_q, float(q_ratio)), max(worst_r, float(r_ratio))
            if q_ratio >= 1 or r_ratio > 1:
                bad.append((p.as_tuple(), k, r, "size bound"))
    ok = len(cases) >= 50 and not bad
    return ok, (
        f"{len(cases)} cases, r<=30: max identity error {mpmath.nstr(worst_err, 3)}, "
        f"max |q_r|/(k0 Q^r)={worst_q:.3f}, max |R_r|/(l0 E^-r)={worst_r:.3f} for r>=1, {len(bad)} failures"
    )


def sieve():
    empty32 = not analysis.congruence_sieve(analysis.SieveSpec(32, 4, 4, "odd-square")).survivors
    rep9 = analysis.congruence_sieve(analysis.SieveSpec(9, 8, 4, "odd-square"))
    nine = bool(rep9.survivors) and rep9.forced_gcd_divisor % 9 == 0
    empty9 = not analysis.congruence_sieve(analysis.SieveSpec(9, 6, -4)).survivors
    pattern = all(
        bool(analysis.congruence_sieve(analysis.SieveSpec(16, u, -4, "odd-square")).survivors) == (u % 4 == 2)
        for u in range(16)
    )
    ok = empty32 and nine and empty9 and pattern
    return ok, f"mod 32 u=4 empty: {empty32}; 9 | gcd(a^2,d) for u=8: {nine}; mod 9 u=6 empty: {empty9}; u = 2 mod 4 forced: {pattern}"


CRITERIA = {
    1: ("table reproduction", table_rows),
    2: ("step-1 examples", step1_examples),
    3: ("quartic solver", quartic),
    4: ("proxy extremals", lemma313_extremals),
    5: ("denominator ratios", denominator_ratios),
    6: ("representation identities", decomposition_suite),
    7: ("gn closed form vs direct", gn_equivalence),
    8: ("large-square threshold", large_square_scan),
    9: ("conjecture scan", conjecture_scan),
    10: ("hypergeometric numerics", hypergeometric_numerics),
    11: ("congruence sieve", sieve),
}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, record):
    title, check = CRITERIA[number]
    ok, detail = check()
    record(number, title, ok, detail)
    print(f"criterion {number} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


if __name__ == "__main__":
    for number in sorted(CRITERIA):
        title, check = CRITERIA[number]
        ok, detail = check()
        print(f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}", flush=True)
