import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadtwist.errors import ConfigurationError, InsufficientTableError
from quadtwist.modform import (
    eta_power_q_expansion,
    hecke_check,
    lambda_at_squares,
    lambda_table,
    load_tau_csv,
    save_tau_csv,
)

# Ramanujan's tau for n = 1..12, as tabulated in OEIS A000594
TAU_KNOWN = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944]


def _tau_by_product(N):
    """q * prod (1 - q^n)^24 by repeated multiplication with (1 - q^n)."""
    poly = [0] * (N + 1)
    poly[1] = 1
    for n in range(1, N + 1):
        for _ in range(24):
            for i in range(N, n - 1, -1):
                poly[i] -= poly[i - n]
    return poly


def test_tau_small_values():
    tau = eta_power_q_expansion(12)
    assert tau[1:] == TAU_KNOWN
    assert eta_power_q_expansion(1)[1] == 1
    assert eta_power_q_expansion(2)[2] == -24


def test_tau_matches_product_expansion():
    N = 300
    assert eta_power_q_expansion(N)[1:] == _tau_by_product(N)[1:]


def test_tau_multiplicative_at_6():
    tau = eta_power_q_expansion(6)
    assert tau[6] == tau[2] * tau[3]


def test_lambda_normalization():
    c = lambda_table(100)
    assert c.lam[1] == 1.0
    assert c.lam[2] == pytest.approx(-24 / 2**5.5, rel=1e-15)
    d = np.array([sum(1 for k in range(1, n + 1) if n % k == 0) for n in range(1, 101)])
    assert np.max(np.abs(c.lam[1:]) / d) <= 1


def test_lambda_table_rejects_bad_n():
    with pytest.raises(ConfigurationError):
        lambda_table(0)


def test_hecke_suite_full(coeffs, tables):
    rep = hecke_check(coeffs, tables)
    assert coeffs.limit == 10**5
    assert rep.passed, (rep.multiplicative_failures[:5], rep.recursion_failures[:5], rep.deligne_failures[:5])


def test_hecke_check_detects_corruption(small_tables):
    c = lambda_table(200)
    tau = list(c.tau)
    tau[15] += 1
    bad = type(c)(weight=c.weight, limit=c.limit, tau=tau, lam=c.lam)
    rep = hecke_check(bad, small_tables)
    assert 15 in rep.multiplicative_failures and not rep.passed


def test_hecke_check_needs_tables(coeffs_small):
    from quadtwist.arith import build_factor_tables

    with pytest.raises(InsufficientTableError):
        hecke_check(coeffs_small, build_factor_tables(100))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 300), st.integers(1, 300))
def test_lambda_multiplicative_float(m, n):
    c = _COEFFS
    if math.gcd(m, n) == 1 and m * n <= c.limit:
        assert c.lam[m * n] == pytest.approx(c.lam[m] * c.lam[n], rel=1e-12, abs=1e-14)


_COEFFS = lambda_table(10**4)


def test_lambda_at_squares(coeffs):
    sq = lambda_at_squares(coeffs, 300)
    n = np.arange(1, 301)
    assert np.allclose(sq[1:], coeffs.lam[n * n], rtol=1e-11, atol=1e-12)
    assert sq[2] == pytest.approx(coeffs.lam[2] ** 2 - 1, rel=1e-13)
    assert sq[6] == pytest.approx(sq[2] * sq[3], rel=1e-13)


def test_lambda_at_squares_limit(coeffs_small):
    with pytest.raises(InsufficientTableError):
        lambda_at_squares(coeffs_small, 5000)


def test_tau_csv_roundtrip(tmp_path):
    tau = eta_power_q_expansion(500)
    path = tmp_path / "tau.csv"
    save_tau_csv(path, tau)
    assert load_tau_csv(path) == tau


def test_lambda_table_cache(tmp_path):
    a = lambda_table(300, cache_dir=tmp_path)
    assert (tmp_path / "tau_300.csv").exists()
    b = lambda_table(300, cache_dir=tmp_path)
    assert a.tau == b.tau and np.array_equal(a.lam, b.lam)
