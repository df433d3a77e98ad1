"""Fourier coefficients of the discriminant form Delta (weight 12, level 1).

tau(n) is produced exactly from Jacobi's identity
``prod (1 - q^m)^3 = sum_k (-1)^k (2k+1) q^(k(k+1)/2)``: raising this sparse
series to the 8th power gives ``prod (1 - q^m)^24`` and hence Delta.
Each sparse-times-dense product costs O(N sqrt N). Since tau(n) outgrows
64-bit integers already near n = 2000, the convolution runs in parallel modulo
several 31-bit primes and the result is lifted back by Chinese remaindering.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from math import prod
from pathlib import Path
from typing import Callable

import numpy as np

from .arith import build_factor_tables
from .errors import ArithmeticOverflowError, ConfigurationError, InsufficientTableError

WEIGHT = 12

# Primes just below 2**31; products of two residues fit in int64.
_MODULI = (
    2147483647, 2147483629, 2147483587, 2147483579,
    2147483563, 2147483549, 2147483543, 2147483497,
)


def _jacobi_cube_terms(N: int) -> tuple[np.ndarray, np.ndarray]:
    """Exponents and coefficients of prod(1-q^m)^3 up to q^(N-1)."""
    exps, coefs = [], []
    k = 0
    while k * (k + 1) // 2 <= N - 1:
        exps.append(k * (k + 1) // 2)
        coefs.append((-1) ** k * (2 * k + 1))
        k += 1
    return np.array(exps, dtype=np.int64), np.array(coefs, dtype=np.int64)


def _tau_bound(N: int) -> int:
    # |tau(n)| <= d(n) n^(11/2) <= 2 sqrt(n) n^(11/2)
    return 2 * N**6


def _crt_lift(residues: np.ndarray, moduli: tuple[int, ...]) -> list[int]:
    """Garner reconstruction to symmetric representatives."""
    k = len(moduli)
    digits = [residues[0] % moduli[0]]
    for i in range(1, k):
        mi = moduli[i]
        x = residues[i] % mi
        for j in range(i):
            inv = pow(moduli[j], -1, mi)
            x = ((x - digits[j]) % mi) * inv % mi
        digits.append(x)
    value = digits[-1].astype(object)
    for i in range(k - 2, -1, -1):
        value = value * moduli[i] + digits[i].astype(object)
    M = prod(moduli)
    half = M // 2
    return [int(v) - M if v > half else int(v) for v in value]


def eta_power_q_expansion(N: int) -> list[int]:
    """Exact tau(1), ..., tau(N) for Delta = q prod (1 - q^m)^24.

    Returns a list of Python ints of length N + 1 with a 0 in slot 0.

    Raises:
        ArithmeticOverflowError: if N is large enough that either the int64
            accumulation or the residue reconstruction could overflow.
    """
    if N < 1:
        raise ConfigurationError("N must be positive")
    exps, coefs = _jacobi_cube_terms(N)
    # per-pass accumulation: len(exps) terms of |c| * (m - 1)
    if len(exps) * int(np.abs(coefs).max()) * (2**31) >= 2**63:
        raise ArithmeticOverflowError(f"int64 accumulation would overflow for N={N}")
    need = 2 * _tau_bound(N)
    k = 1
    while prod(_MODULI[:k]) <= need:
        k += 1
        if k > len(_MODULI):
            raise ArithmeticOverflowError(f"tau range for N={N} exceeds CRT capacity")
    moduli = _MODULI[:k]
    mods = np.array(moduli, dtype=np.int64)[:, None]

    length = N  # coefficients of q^0 .. q^(N-1)
    base = np.zeros((k, length), dtype=np.int64)
    base[:, exps] = coefs[None, :]
    base %= mods
    dense = base.copy()
    for _ in range(7):
        acc = np.zeros_like(dense)
        for e, c in zip(exps, coefs):
            acc[:, e:] += c * dense[:, : length - e]
        dense = acc % mods
    tau = _crt_lift(dense, moduli)
    return [0] + tau


@dataclass(frozen=True)
class EigenformCoefficients:
    """Coefficients of a level-1 Hecke eigenform.

    Attributes:
        weight: the weight kappa.
        limit: N, the last tabulated index.
        tau: exact integer coefficients, ``tau[0] = 0`` is padding.
        lam: normalized coefficients tau(n) / n^((kappa-1)/2) as float64.
    """

    weight: int
    limit: int
    tau: list[int]
    lam: np.ndarray

    def lambda_prime_power(self, p: int, e_max: int) -> np.ndarray:
        return hecke_prime_powers(self.lam[p], e_max)


def hecke_prime_powers(lam_p, e_max: int) -> np.ndarray:
    """lambda(p^e) for e = 0..e_max from the weight-normalized Hecke recursion.

    ``lam_p`` may be an array of lambda(p) values; the exponent is the last axis
    of the result.
    """
    lam_p = np.asarray(lam_p, dtype=float)
    out = np.empty(lam_p.shape + (e_max + 1,), dtype=float)
    out[..., 0] = 1.0
    if e_max >= 1:
        out[..., 1] = lam_p
    for e in range(1, e_max):
        out[..., e + 1] = lam_p * out[..., e] - out[..., e - 1]
    return out


TauProvider = Callable[[int], list[int]]


def save_tau_csv(path: str | os.PathLike, tau: list[int]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "tau"])
        for n in range(1, len(tau)):
            w.writerow([n, tau[n]])


def load_tau_csv(path: str | os.PathLike) -> list[int]:
    tau = [0]
    with open(path, newline="") as fh:
        rows = csv.reader(fh)
        header = next(rows)
        if header != ["n", "tau"]:
            raise ValueError(f"unexpected header {header}")
        for expected, (n, t) in enumerate(rows, start=1):
            if int(n) != expected:
                raise ValueError(f"row {expected} has index {n}")
            tau.append(int(t))
    return tau


def lambda_table(
    N: int,
    provider: TauProvider = eta_power_q_expansion,
    weight: int = WEIGHT,
    cache_dir: str | os.PathLike | None = None,
) -> EigenformCoefficients:
    """Build normalized coefficients lambda(1..N).

    If ``cache_dir`` is given, a CSV file ``tau_<N>.csv`` there is read when
    present and written otherwise.
    """
    if N < 1:
        raise ConfigurationError("N must be positive")
    tau = None
    cache = Path(cache_dir) / f"tau_{N}.csv" if cache_dir is not None else None
    if cache is not None and cache.exists():
        tau = load_tau_csv(cache)
    if tau is None:
        tau = provider(N)
        if cache is not None:
            cache.parent.mkdir(parents=True, exist_ok=True)
            save_tau_csv(cache, tau)
    n = np.arange(N + 1, dtype=float)
    lam = np.zeros(N + 1)
    lam[1:] = np.array(tau[1:], dtype=object).astype(float) / n[1:] ** ((weight - 1) / 2)
    lam.setflags(write=False)
    return EigenformCoefficients(weight=weight, limit=N, tau=tau, lam=lam)


def lambda_at_squares(coeffs: EigenformCoefficients, M: int) -> np.ndarray:
    """lambda(n^2) for 0 <= n <= M (slot 0 is 0), built from lambda(p), p <= M.

    Uses lambda(n^2) = prod lambda(p^(2e)) over n = prod p^e, so no table of
    length M^2 is needed.
    """
    if M > coeffs.limit:
        raise InsufficientTableError(f"need lambda(p) for p <= {M}, table stops at {coeffs.limit}")
    out = np.zeros(M + 1)
    if M >= 1:
        out[1] = 1.0
    if M < 2:
        return out
    tables = build_factor_tables(max(M, 2))
    n = np.arange(M + 1)
    p = tables.spf.astype(np.int64)
    rest = n.copy()
    rest[2:] //= p[2:]
    exp = np.ones(M + 1, dtype=np.int64)
    exp[:2] = 0
    active = np.flatnonzero((rest > 1) & (p[rest] == p))
    while active.size:
        rest[active] //= p[active]
        exp[active] += 1
        active = active[(rest[active] > 1) & (p[rest[active]] == p[active])]
    e_max = int(2 * exp.max())
    pp = hecke_prime_powers(coeffs.lam[: M + 1], e_max)
    local = np.ones(M + 1)
    local[2:] = pp[p[2:], 2 * exp[2:]]
    # n runs upward and rest < n, so one ordered pass suffices
    for i in range(2, M + 1):
        out[i] = local[i] * out[rest[i]]
    return out


@dataclass
class HeckeReport:
    """Outcome of :func:`hecke_check`; each failure list holds offending n."""

    limit: int
    multiplicative_failures: list[int]
    recursion_failures: list[int]
    deligne_failures: list[int]

    @property
    def passed(self) -> bool:
        return not (self.multiplicative_failures or self.recursion_failures or self.deligne_failures)


def hecke_check(coeffs: EigenformCoefficients, tables) -> HeckeReport:
    """Exact integer checks of the Hecke relations and of Deligne's bound.

    * tau(n) = tau(p^e) tau(n / p^e) with p^e || n, p the least prime factor
      (by induction this is full multiplicativity);
    * tau(p^(e+1)) = tau(p) tau(p^e) - p^(k-1) tau(p^(e-1));
    * tau(n)^2 <= d(n)^2 n^(k-1), i.e. |lambda(n)| <= d(n).
    """
    N = coeffs.limit
    if tables.limit < N:
        raise InsufficientTableError("factor tables shorter than the coefficient table")
    tau, k1 = coeffs.tau, coeffs.weight - 1
    spf = tables.spf.tolist()
    divcount = tables.divcount.tolist()
    mult, rec, deligne = [], [], []
    for n in range(2, N + 1):
        p = spf[n]
        q, m = p, n // p
        while m % p == 0:
            q, m = q * p, m // p
        if m > 1 and tau[n] != tau[q] * tau[m]:
            mult.append(n)
        if m == 1 and q > p:
            # n = p^(e+1)
            if tau[n] != tau[p] * tau[n // p] - p**k1 * tau[n // (p * p)]:
                rec.append(n)
        if tau[n] * tau[n] > divcount[n] ** 2 * n**k1:
            deligne.append(n)
    return HeckeReport(N, mult, rec, deligne)
