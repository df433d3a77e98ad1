import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadtwist.arith import build_factor_tables
from quadtwist.errors import DomainError
from quadtwist.gauss import gauss_closed, gauss_closed_exact, gauss_direct, verify_gauss

# odd moduli up to 499^2 for the multiplicativity property
_TABLES = build_factor_tables(499 * 499)


def test_direct_examples():
    assert gauss_direct(0, 1) == pytest.approx(1)
    assert abs(gauss_direct(1, 5) - math.sqrt(5)) < 1e-9
    assert abs(gauss_direct(0, 15)) < 1e-9


@pytest.mark.parametrize(
    "k,m,expected",
    [(0, 9, 6.0), (3, 9, -3.0), (1, 25, 0.0), (2, 3, -math.sqrt(3))],
)
def test_closed_examples(k, m, expected, small_tables):
    assert gauss_closed(k, m, small_tables) == pytest.approx(expected, abs=1e-12)


def test_closed_is_exact_pair(small_tables):
    v = gauss_closed_exact(2, 3, small_tables)
    assert (v.coef, v.radicand) == (-1, 3)


def test_even_modulus_rejected(small_tables):
    with pytest.raises(DomainError):
        gauss_direct(1, 4)
    with pytest.raises(DomainError):
        gauss_closed(1, 4, small_tables)


def test_equivalence_moderate_range(small_tables):
    rep = verify_gauss(301, 30, small_tables)
    assert rep.passed and rep.max_deviation < 1e-9 and rep.max_imag < 1e-9


def test_k0_law(small_tables):
    for n in range(1, 10**4, 2):
        r = math.isqrt(n)
        expected = small_tables.phi[n] if r * r == n else 0
        assert gauss_closed(0, n, small_tables) == expected


@settings(max_examples=300, deadline=None)
@given(st.integers(-60, 60), st.integers(0, 249), st.integers(0, 249))
def test_closed_multiplicative(k, i, j):
    t = _TABLES
    m1, m2 = 2 * i + 1, 2 * j + 1
    if math.gcd(m1, m2) == 1:
        assert gauss_closed(k, m1 * m2, t) == pytest.approx(gauss_closed(k, m1, t) * gauss_closed(k, m2, t), abs=1e-9)


def test_k_vs_4k(small_tables):
    for m in range(1, 502, 2):
        for k in range(-30, 31):
            assert gauss_closed(k, m, small_tables) == gauss_closed(4 * k, m, small_tables)


def test_crude_bound(small_tables):
    for m in range(1, 400, 2):
        for k in range(-10, 11):
            assert abs(gauss_closed(k, m, small_tables)) <= m * math.sqrt(m)
