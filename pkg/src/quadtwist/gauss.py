"""Quadratic Gauss-type sums G_k(m) for odd m.

``G_k(m) = ((1-i)/2 + (-1/m)(1+i)/2) * sum_{a mod m} (a/m) e(ak/m)``

Two independent evaluations are provided: the O(m) definition sum and the
closed form obtained from multiplicativity in m plus an explicit table at
prime powers. :func:`verify_gauss` compares them over a range.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .arith import FactorTables, kronecker, kronecker_array
from .errors import DomainError, InsufficientTableError


class GaussValue(NamedTuple):
    """Exact closed-form value ``coef * sqrt(radicand)``, radicand square-free."""

    coef: int
    radicand: int

    def __float__(self) -> float:
        return self.coef * math.sqrt(self.radicand)

    def __mul__(self, other: "GaussValue") -> "GaussValue":  # type: ignore[override]
        g = math.gcd(self.radicand, other.radicand)
        return GaussValue(
            self.coef * other.coef * g,
            (self.radicand // g) * (other.radicand // g),
        )


def _check_modulus(m: int) -> None:
    if m <= 0 or m % 2 == 0:
        raise DomainError(f"G_k(m) needs odd positive m, got {m}")


def _prefactor(m: int) -> complex:
    # (1-i)/2 + (-1/m)(1+i)/2 is 1 for m = 1 mod 4 and -i for m = 3 mod 4
    return 1.0 if m % 4 == 1 else -1j


def gauss_direct(k: int, m: int) -> complex:
    """G_k(m) straight from the definition, in complex double arithmetic."""
    return complex(gauss_direct_many(np.array([k]), m)[0])


def gauss_direct_many(ks, m: int) -> np.ndarray:
    """G_k(m) for every k in ``ks`` (same modulus), vectorized over k."""
    _check_modulus(m)
    ks = np.atleast_1d(np.asarray(ks, dtype=np.int64))
    a = np.arange(m, dtype=np.int64)
    chi = kronecker_array(a, m).astype(float)
    support = chi != 0
    a = a[support]
    chi = chi[support]
    # exact residue ak mod m before forming the angle
    r = (ks[:, None] % m) * a[None, :] % m
    phases = np.exp(2j * np.pi * r / m)
    return _prefactor(m) * (phases @ chi)


def _prime_power_value(k: int, p: int, b: int) -> GaussValue:
    if k == 0:
        # a = infinity: always in the b <= a branch
        return GaussValue(0, 1) if b % 2 else GaussValue(p**b - p ** (b - 1), 1)
    a = 0
    kk = k
    while kk % p == 0:
        kk //= p
        a += 1
    if b <= a:
        return GaussValue(0, 1) if b % 2 else GaussValue(p**b - p ** (b - 1), 1)
    if b == a + 1:
        if b % 2 == 0:
            return GaussValue(-(p**a), 1)
        return GaussValue(kronecker(kk, p) * p**a, p)
    return GaussValue(0, 1)


def gauss_closed_exact(k: int, m: int, tables: FactorTables) -> GaussValue:
    """Closed-form G_k(m) as an exact (coefficient, square-free radicand) pair."""
    _check_modulus(m)
    if m > tables.limit:
        raise InsufficientTableError(f"m={m} exceeds factor table limit {tables.limit}")
    value = GaussValue(1, 1)
    for p, b in tables.factorize(m):
        local = _prime_power_value(k, p, b)
        if local.coef == 0:
            return GaussValue(0, 1)
        value = value * local
    return value


def gauss_closed(k: int, m: int, tables: FactorTables) -> float:
    """Closed-form G_k(m); always real."""
    return float(gauss_closed_exact(k, m, tables))


@dataclass
class GaussReport:
    m_max: int
    k_max: int
    n_checked: int = 0
    max_deviation: float = 0.0
    max_imag: float = 0.0
    failures: list[tuple[int, int, float, complex]] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_gauss(m_max: int, k_max: int, tables: FactorTables, rtol: float = 1e-6) -> GaussReport:
    """Compare direct and closed-form G_k(m) for odd m <= m_max, |k| <= k_max.

    A pair fails when the difference exceeds ``rtol * max(1, m)`` or the
    imaginary part of the direct sum exceeds ``rtol * m``.
    """
    t0 = time.perf_counter()
    report = GaussReport(m_max=m_max, k_max=k_max)
    ks = np.arange(-k_max, k_max + 1)
    for m in range(1, m_max + 1, 2):
        direct = gauss_direct_many(ks, m)
        closed = np.array([gauss_closed(int(k), m, tables) for k in ks])
        dev = np.abs(direct - closed)
        imag = np.abs(direct.imag)
        report.n_checked += len(ks)
        report.max_deviation = max(report.max_deviation, float(dev.max()) / max(1, m))
        report.max_imag = max(report.max_imag, float(imag.max()) / m)
        bad = (dev > rtol * max(1, m)) | (imag > rtol * m)
        for i in np.flatnonzero(bad):
            report.failures.append((m, int(ks[i]), float(closed[i]), complex(direct[i])))
    report.seconds = time.perf_counter() - t0
    return report
