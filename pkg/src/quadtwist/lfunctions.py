"""Riemann zeta and the symmetric-square L-function of the fixed eigenform.

``zeta_eval`` uses Borwein's accelerated alternating series for the eta
function. ``L_symsq`` evaluates

    L(s, sym^2 f) = zeta(2s) sum lambda(n^2) n^(-s)

from its Dirichlet coefficients: directly (with a tail bound) far to the
right, and through a smoothed approximate functional equation built on the
completed function

    Lambda(s) = pi^(-3s/2) Gamma((s+1)/2) Gamma((s+k-1)/2) Gamma((s+k)/2) L(s)

and ``Lambda(s) = Lambda(1-s)`` everywhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, loggamma

from .errors import AccuracyError, PoleError
from .modform import EigenformCoefficients, lambda_at_squares

_LOG_3_SQRT8 = math.log(3 + math.sqrt(8))


def _borwein_weights(n: int) -> np.ndarray:
    """e_k = 1 - d_k/d_n for k < n, computed in log space."""
    i = np.arange(n + 1, dtype=float)
    logt = math.log(n) + gammaln(n + i) - gammaln(n - i + 1) - gammaln(2 * i + 1) + i * math.log(4)
    cum = np.logaddexp.accumulate(logt)
    return -np.expm1(cum[:n] - cum[n])


def zeta_eval(s, tol: float = 1e-12):
    """Riemann zeta for complex s != 1 (vectorized).

    Accurate to about 1e-10 relative on 0.1 <= Re s <= 3, |Im s| <= 1000,
    away from the zeros of 1 - 2^(1-s) on Re s = 1.
    """
    scalar = np.ndim(s) == 0
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    if np.any(s == 1):
        raise PoleError("zeta has a pole at s = 1")
    tmax = float(np.max(np.abs(s.imag)))
    n = int(math.ceil((math.pi * tmax + math.log(1 / tol) + math.log(3 + 2 * tmax)) / _LOG_3_SQRT8)) + 10
    e = _borwein_weights(n)
    k = np.arange(n)
    signs = np.where(k % 2 == 0, 1.0, -1.0)
    logk = np.log(k + 1.0)
    eta = np.exp(-np.outer(s, logk)) @ (signs * e)
    out = eta / (1 - np.exp((1 - s) * math.log(2)))
    return complex(out[0]) if scalar else out


def symsq_coefficients(coeffs: EigenformCoefficients, n_terms: int) -> np.ndarray:
    """Dirichlet coefficients a_n (0 <= n <= n_terms) of L(s, sym^2 f).

    a_n = sum_{m^2 k = n} lambda(k^2), the convolution of zeta(2s) with
    sum lambda(k^2) k^(-s).
    """
    lam_sq = lambda_at_squares(coeffs, n_terms)
    a = np.zeros(n_terms + 1)
    m = 1
    while m * m <= n_terms:
        kmax = n_terms // (m * m)
        a[m * m * np.arange(1, kmax + 1)] += lam_sq[1 : kmax + 1]
        m += 1
    return a


@dataclass(frozen=True)
class LSeriesAccessor:
    """Coefficient stream plus gamma data for L(s, sym^2 f).

    The approximate functional equation uses the smoothing weight
    ``h(w) = exp(w^2/A - i theta sgn(Im s) w)``. The phase term cancels the
    exponential growth of the gamma ratio in the direction of -Im s, which
    lets a wide Gaussian (large A) be used. That in turn makes the smoothed
    coefficients decay quickly in n.

    Attributes:
        weight: weight kappa of the form.
        coefficients: a_0..a_N (a_0 unused).
        tol: target absolute accuracy of each smoothed sum.
        node_step: trapezoid step on the smoothing line.
        gauss_width: A above.
        phase_fraction: theta as a fraction of 3 pi / 4.
    """

    weight: int
    coefficients: np.ndarray = field(repr=False)
    tol: float = 1e-12
    node_step: float = 0.08
    gauss_width: float = 16.0
    phase_fraction: float = 0.95

    @classmethod
    def from_eigenform(cls, coeffs: EigenformCoefficients, n_terms: int | None = None, **kw) -> "LSeriesAccessor":
        n_terms = coeffs.limit if n_terms is None else n_terms
        return cls(weight=coeffs.weight, coefficients=symsq_coefficients(coeffs, n_terms), **kw)

    @property
    def n_terms(self) -> int:
        return self.coefficients.size - 1

    def log_gamma_factor(self, s):
        """log of pi^(-3s/2) Gamma((s+1)/2) Gamma((s+k-1)/2) Gamma((s+k)/2)."""
        s = np.asarray(s, dtype=complex)
        k = self.weight
        return (
            -1.5 * s * math.log(math.pi)
            + loggamma((s + 1) / 2)
            + loggamma((s + k - 1) / 2)
            + loggamma((s + k) / 2)
        )

    def completed(self, s) -> complex:
        """Lambda(s, sym^2 f)."""
        return complex(np.exp(self.log_gamma_factor(s)) * L_symsq(s, self))


def _smoothing_nodes(acc: LSeriesAccessor, s_abs: float, c: float):
    # the Gaussian must beat the gamma ratio, which grows at most like |s+w|^(3c/2)
    growth = 1.5 * c * math.log(3 + s_abs)
    R = math.sqrt(acc.gauss_width * (c * c / acc.gauss_width + math.log(1 / acc.tol) + growth + 5))
    h = acc.node_step
    tau = np.arange(-R, R + h / 2, h)
    return tau, h


def _smoothed_sums(acc: LSeriesAccessor, s: np.ndarray, c: float, s_ref: np.ndarray, log_q: np.ndarray):
    """``(1/2 pi i) int_(c) gamma(s+w)/gamma(s_ref) D(s+w) h(w) dw/w`` for each s.

    D is the Dirichlet series of L and ``h(w) = exp(w^2/A + log_q w)``.
    Normalizing by gamma(s_ref) rather than gamma(s) lets the dual sum carry
    the root factor gamma(1-s)/gamma(s) without evaluating either gamma
    separately, which matters where one of them has a pole. All s share the
    line Re w = c, so ``n^(-w)`` is common and each coefficient block costs
    one matrix product. Blocks double in length until a whole block falls
    below ``tol`` for every s.
    """
    tau, h = _smoothing_nodes(acc, float(np.max(np.abs(s))), c)
    w = c + 1j * tau
    log_h = w[None, :] ** 2 / acc.gauss_width + log_q[:, None] * w[None, :]
    log_ratio = acc.log_gamma_factor(s[:, None] + w[None, :]) - acc.log_gamma_factor(s_ref)[:, None]
    kern = np.exp(log_ratio + log_h) / w[None, :] * (h / (2 * math.pi))
    a = acc.coefficients
    total = np.zeros(s.size, dtype=complex)
    lo, hi = 0, 64
    while True:
        hi = min(hi, acc.n_terms)
        logn = np.log(np.arange(lo + 1, hi + 1))
        smooth = kern @ np.exp(-np.outer(w, logn))
        block = smooth * (a[lo + 1 : hi + 1] * np.exp(-np.outer(s, logn)))
        total += block.sum(axis=1)
        # the smoothed weight decays monotonically past the transition, so one block bounds the rest
        tail = np.abs(block).sum(axis=1)
        if (tail.max() < acc.tol and hi > 256) or hi == acc.n_terms:
            break
        lo, hi = hi, 2 * hi
    if tail.max() > max(acc.tol, 1e-9):
        raise AccuracyError(
            f"L(sym^2) smoothed sum needs more than {acc.n_terms} coefficients", achieved=float(tail.max())
        )
    return total, tail


def _direct_sum(acc: LSeriesAccessor, s: complex) -> tuple[complex, float]:
    sigma = s.real
    N = acc.n_terms
    # |a_n| <= d(n)^2 <= 4n
    tail = 4 * N ** (2 - sigma) / (sigma - 2)
    n = np.arange(1, N + 1)
    val = np.exp(-s * np.log(n)) @ acc.coefficients[1:]
    return complex(val), tail


def _afe(s: np.ndarray, acc: LSeriesAccessor, c: float) -> tuple[np.ndarray, np.ndarray]:
    log_q = -1j * acc.phase_fraction * 0.75 * math.pi * np.sign(s.imag)
    first, t1 = _smoothed_sums(acc, s, c, s, log_q)
    second, t2 = _smoothed_sums(acc, 1 - s, c, s, -log_q)
    return first + second, t1 + t2


def L_symsq_with_error(s, acc: LSeriesAccessor) -> tuple[complex, float]:
    """L(s, sym^2 f) together with an estimate of the truncation error."""
    s = complex(s)
    if s.real > 2.5:
        val, tail = _direct_sum(acc, s)
        if tail < 1e-10:
            return val, tail
    val, tail = _afe(np.array([s]), acc, max(s.real, 1 - s.real) + 0.25)
    return complex(val[0]), float(tail[0])


def L_symsq(s, acc: LSeriesAccessor, chunk: int = 256):
    """L(s, sym^2 f), vectorized over s.

    Points sharing a real part are evaluated together in chunks, which is
    the common case along a vertical contour.
    """
    if np.ndim(s) == 0:
        return L_symsq_with_error(s, acc)[0]
    flat = np.asarray(s, dtype=complex).ravel()
    out = np.empty(flat.size, dtype=complex)
    for sigma in np.unique(flat.real):
        idx = np.flatnonzero(flat.real == sigma)
        if sigma > 2.5:
            for i in idx:
                out[i] = L_symsq_with_error(flat[i], acc)[0]
            continue
        c = max(sigma, 1 - sigma) + 0.25
        for start in range(0, idx.size, chunk):
            part = idx[start : start + chunk]
            out[part] = _afe(flat[part], acc, c)[0]
    return out.reshape(np.shape(s))
