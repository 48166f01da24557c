import pytest
from hypothesis import given
from hypothesis import strategies as st

from recsquares.errors import DomainError
from recsquares.quadratic import QuadInt, _pell4_search, pell4_min


def q(x, y, d):
    return QuadInt.from_parts(x, y, d)


def test_products():
    assert q(1, 1, 2) * q(1, 1, 2) == q(3, 2, 2)
    assert QuadInt(6, 2, 10) ** 2 == q(19, 6, 10)
    z = q(7, -3, 13)
    assert z * 1 == z and z * q(1, 0, 13) == z


def test_norm_and_trace():
    assert QuadInt(2, 2, 2).norm() == -1
    assert q(1, 9, 2).norm() == -161
    t, u = 2, 2
    assert (QuadInt(t, u, 2) ** 2).trace() == (t * t + 2 * u * u) // 2


def test_powers():
    assert q(1, 1, 2) ** 6 == q(99, 70, 2)
    assert q(5, 3, 7) ** 0 == q(1, 0, 7)
    assert q(1, 1, 2) ** -1 == q(-1, 1, 2)
    with pytest.raises(DomainError):
        q(2, 1, 7) ** -1


def test_validation():
    with pytest.raises(DomainError):
        QuadInt(1, 0, 2)  # 1/2 is not an algebraic integer
    with pytest.raises(DomainError):
        QuadInt(2, 0, 9)
    with pytest.raises(DomainError):
        q(1, 1, 2) + q(1, 1, 3)
    # non-squarefree radicands are allowed as long as the value is integral
    assert QuadInt(6, 1, 40).norm() == -1


def test_exact_div():
    assert q(6, 4, 5).exact_div(2) == q(3, 2, 5)
    with pytest.raises(DomainError):
        q(3, 2, 5).exact_div(2)


small = st.integers(-50, 50)
radicand = st.sampled_from([2, 3, 5, 6, 7, 10, 13, 17, 21, 40, 104])


@given(small, small, small, small, radicand)
def test_norm_multiplicative(h1, k1, h2, k2, d):
    # keep h^2 - d k^2 = 0 mod 4 by doubling
    a, b = QuadInt(2 * h1, 2 * k1, d), QuadInt(2 * h2, 2 * k2, d)
    assert (a * b).norm() == a.norm() * b.norm()
    assert (a * b).conj() == a.conj() * b.conj()
    assert a + b - b == a


@pytest.mark.parametrize("d, expected", [(5, (1, 1, -4)), (2, (2, 2, -4)), (40, (6, 1, -4)), (3, (4, 2, 4))])
def test_pell4_examples(d, expected):
    assert pell4_min(d) == expected


@pytest.mark.parametrize("d", range(2, 300))
def test_pell4_against_bruteforce(d):
    if int(d**0.5) ** 2 == d:
        with pytest.raises(DomainError):
            pell4_min(d)
        return
    t, u, s = pell4_min(d)
    assert t * t - d * u * u == s
    assert QuadInt(t, u, d).is_unit()
    if u <= 2000:
        assert _pell4_search(d, 2000) == (t, u, s)
    else:
        with pytest.raises(DomainError):
            _pell4_search(d, 2000)
