import math

import mpmath
import numpy as np
import pytest

from quadtwist.errors import AccuracyError, PoleError
from quadtwist.lfunctions import (
    L_symsq,
    L_symsq_with_error,
    LSeriesAccessor,
    symsq_coefficients,
    zeta_eval,
)

# L(s, sym^2 Delta) at real points, frozen from this implementation after the
# cross-checks below (Petersson norm, direct series, functional equation)
L_FROZEN = {1.0: 0.6317929457278988, 2.0: 0.805875209448689, 2.5: 0.86139018391906, 3.0: 0.9017198031509079}


def test_zeta_classical():
    assert zeta_eval(2.0) == pytest.approx(math.pi**2 / 6, rel=1e-12)
    N = 10**6
    direct = math.fsum(1.0 / np.arange(1, N + 1) ** 3) + 1 / (2 * N**2)
    assert zeta_eval(3.0) == pytest.approx(direct, rel=1e-11)
    assert abs(zeta_eval(0.5 + 14.134725j)) < 1e-5


@pytest.mark.parametrize("s", [0.1 + 0j, 0.5 + 1j, 0.75 - 40j, 1.3 + 200j, 2.0 + 999j, 3.0 - 5j])
def test_zeta_against_mpmath(s):
    assert zeta_eval(s) == pytest.approx(complex(mpmath.zeta(s)), rel=1e-10)


def test_zeta_vectorized_and_pole():
    s = np.array([2.0, 0.5 + 3j])
    assert np.allclose(zeta_eval(s), [zeta_eval(2.0), zeta_eval(0.5 + 3j)], rtol=1e-13)
    with pytest.raises(PoleError):
        zeta_eval(1.0)


def _euler_oracle(coeffs, N):
    """a_n of L(s, sym^2 f) from the local factors 1/((1 - a^2 X)(1 - X)(1 - b^2 X))."""
    out = np.ones(N + 1)
    out[0] = 0
    for p in range(2, N + 1):
        if any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
            continue
        t = coeffs.lam[p] ** 2 - 1
        c = [1.0, t, 0.0, 0.0]
        e = 1
        while p ** (e + 1) <= N:
            e += 1
            c.append(0.0)
        for k in range(2, e + 1):
            c[k] = t * c[k - 1] - t * c[k - 2] + (c[k - 3] if k >= 3 else 0.0)
        pe = p
        for k in range(1, e + 1):
            idx = np.arange(pe, N + 1, pe)
            idx = idx[(idx // pe) % p != 0]
            out[idx] *= c[k]
            pe *= p
    return out


def test_symsq_coefficients_against_euler_product(coeffs_small):
    a = symsq_coefficients(coeffs_small, 1000)
    assert np.allclose(a, _euler_oracle(coeffs_small, 1000), rtol=1e-11, atol=1e-12)


def test_L_frozen_values(acc):
    for s, ref in L_FROZEN.items():
        assert complex(L_symsq(s, acc)) == pytest.approx(ref, rel=1e-12)


def test_L1_reproduces_petersson_norm(acc):
    # <Delta, Delta> = 11! / (2^23 pi^13) L(1, sym^2 Delta) = 1.035362056804320e-6
    norm = math.factorial(11) / (2**23 * math.pi**13) * complex(L_symsq(1.0, acc)).real
    assert norm == pytest.approx(1.035362056804320e-6, rel=1e-9)


def test_L2_against_direct_series(acc):
    n = np.arange(1, acc.n_terms + 1)
    direct = float(acc.coefficients[1:] @ n**-2.0)
    assert complex(L_symsq(2.0, acc)).real == pytest.approx(direct, abs=1e-8)


def test_L1_stable_under_cutoff(coeffs):
    half = LSeriesAccessor.from_eigenform(coeffs, n_terms=coeffs.limit // 2)
    full = LSeriesAccessor.from_eigenform(coeffs)
    assert abs(L_symsq(1.0, half) - L_symsq(1.0, full)) < 1e-6


GRID = [0.8 + 3j, 0.5 + 0j, 0.5 + 14j, 0.3 + 1j, 0.7 - 8j, 0.9 + 30j, 0.6 + 60j, 0.25 - 2j, 0.1 + 5j, 0.55 + 120j]


@pytest.mark.parametrize("s", GRID)
def test_functional_equation(s, acc):
    lam_s = acc.completed(s)
    lam_dual = acc.completed(1 - s)
    assert abs(lam_s - lam_dual) <= 1e-6 * abs(lam_s)


def test_conjugate_symmetry_and_vectorization(acc):
    s = np.array([0.58 + 17j, 0.58 - 17j, 1.16 + 200j, 0.84 - 200j, 2.7 + 1j])
    vals = L_symsq(s, acc)
    assert vals[0] == pytest.approx(np.conj(vals[1]), rel=1e-12)
    for si, v in zip(s, vals):
        assert v == pytest.approx(L_symsq_with_error(si, acc)[0], rel=1e-12)
    assert vals[2] == pytest.approx(0.7099367252 - 0.0442279806j, abs=1e-9)
    assert vals[3] == pytest.approx(0.6486936109 + 0.1342773963j, abs=1e-9)


def test_error_estimate_small(acc):
    _, err = L_symsq_with_error(0.9 + 50j, acc)
    assert err < 1e-10


def test_short_table_raises(acc_small):
    with pytest.raises(AccuracyError):
        L_symsq(0.75 + 900j, acc_small)
