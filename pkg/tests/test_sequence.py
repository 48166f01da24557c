import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from recsquares.errors import DomainError
from recsquares.intkit import is_square
from recsquares.quadratic import pell4_min
from recsquares.sequence import (
    SeqParams,
    distinct_squares,
    element,
    growth_factor,
    is_square_fast,
    k_cutoff,
    lower_bound_y,
    scan_squares,
    terms,
)


def test_element_examples():
    assert element(SeqParams(1, 9, 2, 2, 2), 3).y == 961
    p = SeqParams(5, 7, 11, 20, 6)
    assert (element(p, 0).x, element(p, 0).y) == (5, 7)
    assert element(SeqParams(4, 1, 37, 12, 2), 1).y == 121
    t = element(SeqParams(2, 1, 40, 6, 1), 1)
    assert (t.x, t.y) == (158, 25)


def test_scan_examples():
    hits = scan_squares(SeqParams(1, 9, 2, 2, 2), 80)
    assert sorted((h.k, h.root) for h in hits) == [(-5, 167), (-1, 5), (0, 3), (3, 31)]
    hits = scan_squares(SeqParams(1, 1, 10, 6, 2, step=1), 3)
    assert [(h.k, h.root) for h in hits] == [(0, 1), (1, 2), (2, 5)]
    hits = scan_squares(SeqParams(2, 1, 40, 6, 1), 1)
    assert [(h.k, h.y, h.root) for h in hits] == [(0, 1, 1), (1, 25, 5)]


def test_params_validation():
    with pytest.raises(DomainError):
        SeqParams(1, 1, 4, 2, 0)
    with pytest.raises(DomainError):
        SeqParams(1, 1, 2, 3, 2)
    with pytest.raises(DomainError):
        SeqParams(0, 1, 2, 2, 2)
    with pytest.raises(DomainError):
        SeqParams(-1, 1, 2, 2, 2)
    with pytest.raises(DomainError):
        SeqParams(1, 1, 2, 2, 2, step=3)


def test_lower_bound_examples():
    p = SeqParams(2, 1, 40, 6, 1)
    assert lower_bound_y(p, 1) == 9 <= element(p, 1).y
    assert growth_factor(SeqParams(1, 1, 5, 1, 1)) == 2
    assert lower_bound_y(SeqParams(7, 3, 13, 3, 1), 1) == Fraction(abs(49 - 9 * 13), 12)


def test_cutoff_examples():
    p = SeqParams(3, 1, 13, 3, 1)
    assert k_cutoff(p) == -2 and element(p, -2).y == 10
    p = SeqParams(1, 1, 2, 2, 2)
    assert k_cutoff(p) == -2 and element(p, -2).y == 5
    p = SeqParams(1, 9, 2, 2, 2)
    assert k_cutoff(p) == -1 and element(p, -1).y == 25


def test_cutoff_requires_negative_norm():
    with pytest.raises(DomainError):
        k_cutoff(SeqParams(5, 1, 2, 2, 2))
    with pytest.raises(DomainError):
        k_cutoff(SeqParams(1, 1, 2, 2, 2, step=1))


def test_window_must_contain_zero():
    with pytest.raises(DomainError):
        terms(SeqParams(1, 1, 2, 2, 2), 1, 3)


nonsquare_d = st.integers(2, 300).filter(lambda d: not is_square(d))


@st.composite
def params(draw, step=st.sampled_from([1, 2])):
    d = draw(nonsquare_d)
    t, u, _ = pell4_min(d)
    a = draw(st.integers(1, 60))
    b0 = draw(st.integers(1, 9))
    return SeqParams(a, b0, d, t, u, draw(step))


@given(params(), st.integers(0, 12), st.integers(0, 12))
@settings(max_examples=150)
def test_recurrence_matches_direct_powers(p, lo, hi):
    for term in terms(p, -lo, hi):
        assert term == element(p, term.k)


@given(params(), st.integers(-10, 10))
def test_terms_have_norm_of_alpha_times_unit(p, k):
    term = element(p, k)
    norm4 = term.x2 * term.x2 - p.d * term.y2 * term.y2
    assert norm4 == 4 * p.n_alpha * p.n_eps ** (p.step * abs(k))


@given(params(step=st.just(2)))
@settings(max_examples=200)
def test_lower_bound_below_terms(p):
    assume(p.n_alpha < 0)
    try:
        cut = k_cutoff(p)
    except DomainError:
        return
    for k in list(range(1, 8)) + list(range(cut - 6, cut + 1)):
        term = element(p, k)
        assert lower_bound_y(p, k) <= term.y


@given(st.integers(0, 10**30))
def test_fast_square_filter(n):
    assert is_square_fast(n) == is_square(n)
    assert is_square_fast(n * n)


def test_distinct_squares_dedupes():
    hits = scan_squares(SeqParams(2, 1, 40, 6, 1, step=1), 6)
    assert distinct_squares(hits) == sorted({h.y for h in hits})


@given(params(step=st.just(2)))
@settings(max_examples=200)
def test_monotone_away_from_cutoff(p):
    assume(p.n_alpha < 0)
    ys = [element(p, k).y for k in range(0, 10)]
    assert all(lo < hi for lo, hi in zip(ys, ys[1:]))
    cut = k_cutoff(p)
    ys = [element(p, cut - j).y for j in range(0, 10)]
    assert all(lo < hi for lo, hi in zip(ys, ys[1:]))


@given(params(step=st.just(1)), st.integers(-8, 8))
@settings(max_examples=200)
def test_gcd_of_terms_with_odd_gcd(p, k):
    b = p.b
    assume(b is not None and math.gcd(p.a, b) % 2 == 1)
    # the step-1 statement uses alpha = a + b sqrt(d)
    q = SeqParams(p.a, b, p.d, p.t, p.u, step=1)
    term = element(q, k)
    assume(term.integral)
    g = math.gcd(term.x2 // 2, term.y2 // 2) // math.gcd(p.a, b)
    assert g in (1, 2)
