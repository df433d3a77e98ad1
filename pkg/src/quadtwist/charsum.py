"""Brute-force evaluation of the smoothed mean square

    S(X, Y) = sum*_{d odd square-free} ( sum_n lambda(n) chi_8d(n) Phi(n/Y) )^2 Psi(d/X).

Two kernels compute the same quantity:

``naive``
    one Kronecker-symbol evaluation per (d, n) pair, plain Python loops.
``sieved``
    per block of d, the values chi_8d(p) at primes p are taken from a table of
    Legendre symbols mod p and extended to every n along smallest-prime-factor
    chains, so the inner sum becomes a matrix-vector product.

The d-range is split into fixed-size contiguous blocks independent of the
worker count. Block sums are combined in block order with ``math.fsum``,
so the result is bit-identical for any number of workers.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Literal

import numpy as np

from .arith import FactorTables, kronecker, kronecker_array
from .errors import ConfigurationError, DomainError, InsufficientTableError
from .modform import EigenformCoefficients
from .windows import WindowLike

Method = Literal["naive", "sieved"]
BLOCK_SIZE = 4096


@dataclass
class ExperimentPoint:
    X: float
    Y: float
    value_S: float
    n_d_terms: int
    wall_time: float
    method: str

    def to_dict(self) -> dict:
        return asdict(self)


def _n_range(Y: float, Phi: WindowLike) -> np.ndarray:
    a, b = Phi.support
    lo = int(math.floor(a * Y)) + 1
    hi = int(math.ceil(b * Y)) - 1
    return np.arange(max(lo, 1), hi + 1, dtype=np.int64)


def _weights(Y: float, Phi: WindowLike, coeffs: EigenformCoefficients, tables: FactorTables):
    ns = _n_range(Y, Phi)
    if ns.size and ns[-1] > min(coeffs.limit, tables.limit):
        raise InsufficientTableError(
            f"n up to {ns[-1]} needed; coefficient table {coeffs.limit}, factor table {tables.limit}"
        )
    w = coeffs.lam[ns] * Phi(ns / Y) if ns.size else np.zeros(0)
    keep = w != 0
    return ns[keep], np.asarray(w[keep], dtype=float)


def inner_sum(d: int, Y: float, Phi: WindowLike, coeffs: EigenformCoefficients, tables: FactorTables) -> float:
    """``sum_n lambda(n) (8d/n) Phi(n/Y)`` for one odd square-free d."""
    if d < 1 or d % 2 == 0 or tables.mobius[d] == 0:
        raise DomainError(f"d={d} is not odd and square-free")
    ns, w = _weights(Y, Phi, coeffs, tables)
    return math.fsum(wn * kronecker(8 * d, int(n)) for n, wn in zip(ns, w))


def _naive_block(ds: np.ndarray, psi: np.ndarray, ns: np.ndarray, w: np.ndarray) -> float:
    out = []
    for d, pw in zip(ds.tolist(), psi.tolist()):
        inner = math.fsum(wn * kronecker(8 * d, n) for n, wn in zip(ns.tolist(), w.tolist()))
        out.append(inner * inner * pw)
    return math.fsum(out)


def _chi_matrix(ds: np.ndarray, n_hi: int, spf: np.ndarray, primes: np.ndarray) -> np.ndarray:
    """chi_8d(m) for every d in ``ds`` and 1 <= m <= n_hi (column m)."""
    chi = np.zeros((ds.size, n_hi + 1), dtype=np.int8)
    chi[:, 1] = 1
    for p in primes.tolist():
        if p == 2:
            continue  # chi_8d(2) = 0, column stays zero
        legendre = kronecker_array(np.arange(p), p).astype(np.int8)
        chi[:, p] = legendre[(8 * ds) % p]
    for m in range(4, n_hi + 1):
        p = int(spf[m])
        if p != m:
            chi[:, m] = chi[:, p] * chi[:, m // p]
    return chi


def _sieved_block(ds, psi, ns, w, spf, primes) -> float:
    chi = _chi_matrix(ds, int(ns[-1]), spf, primes)
    inner = chi[:, ns].astype(float) @ w
    return math.fsum((inner * inner * psi).tolist())


def _run_block(args):
    method, payload = args
    if method == "naive":
        return _naive_block(*payload)
    return _sieved_block(*payload)


def mean_square(
    X: float,
    Y: float,
    Phi: WindowLike,
    Psi: WindowLike,
    coeffs: EigenformCoefficients,
    tables: FactorTables,
    method: Method = "sieved",
    workers: int = 1,
    block_size: int = BLOCK_SIZE,
) -> ExperimentPoint:
    """Brute-force S(X, Y) by the chosen kernel."""
    if workers < 1:
        raise ConfigurationError("workers must be at least 1")
    if method not in ("naive", "sieved"):
        raise ConfigurationError(f"unknown method {method!r}")
    t0 = time.perf_counter()
    a, b = Psi.support
    if math.ceil(b * X) - 1 > tables.limit:
        raise InsufficientTableError(f"d up to {b * X} needs factor tables beyond {tables.limit}")
    ds = tables.odd_squarefree_in(a * X, b * X)
    psi = np.asarray(Psi(ds / X), dtype=float)
    keep = psi > 0
    ds, psi = ds[keep], psi[keep]
    ns, w = _weights(Y, Phi, coeffs, tables)

    if ds.size == 0 or ns.size == 0:
        return ExperimentPoint(X, Y, 0.0, int(ds.size), time.perf_counter() - t0, method)

    n_hi = int(ns[-1])
    spf = np.asarray(tables.spf[: n_hi + 1])
    primes = tables.primes[tables.primes <= n_hi]
    jobs = []
    for start in range(0, ds.size, block_size):
        sl = slice(start, start + block_size)
        if method == "naive":
            payload = (ds[sl], psi[sl], ns, w)
        else:
            payload = (ds[sl], psi[sl], ns, w, spf, primes)
        jobs.append((method, payload))

    if workers == 1 or len(jobs) == 1:
        partials = [_run_block(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(_run_block, jobs))
    value = math.fsum(partials)
    return ExperimentPoint(X, Y, value, int(ds.size), time.perf_counter() - t0, method)
