"""Sieved multiplicative functions and the Kronecker symbol.

The tables are built once from a smallest-prime-factor sieve and are
read-only afterwards, so they can be shared freely between workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import numpy as np

from .errors import ConfigurationError, DomainError

MAX_LIMIT = 10**8

# (2/n) for n mod 8
_TAB2 = (0, 1, 0, -1, 0, -1, 0, 1)
_TAB2_ARR = np.array(_TAB2, dtype=np.int64)


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FactorTables:
    """Multiplicative data for 1 <= n <= limit.

    Index 0 is padding and index 1 carries the empty-product values
    (``spf[1] == 1`` is a sentinel, not a prime).

    Attributes:
        limit: largest tabulated integer.
        spf: smallest prime factor.
        mobius: Moebius function, int8.
        phi: Euler totient.
        divcount: number of divisors d(n).
        is_odd_squarefree: n odd and mobius(n) != 0.
        primes: all primes <= limit, ascending.
    """

    limit: int
    spf: np.ndarray
    mobius: np.ndarray
    phi: np.ndarray
    divcount: np.ndarray
    is_odd_squarefree: np.ndarray
    primes: np.ndarray

    def factorize(self, n: int) -> list[tuple[int, int]]:
        """Prime factorization of ``n`` as ``[(p, e), ...]`` with p ascending."""
        if not 1 <= n <= self.limit:
            raise DomainError(f"cannot factor {n} with tables up to {self.limit}")
        out: list[tuple[int, int]] = []
        while n > 1:
            p = int(self.spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out

    def odd_squarefree_in(self, lo: float, hi: float) -> np.ndarray:
        """Odd square-free integers d with lo < d < hi (clipped to the table)."""
        start = max(1, int(np.floor(lo)) + 1)
        stop = min(self.limit, int(np.ceil(hi)) - 1)
        if stop < start:
            return np.zeros(0, dtype=np.int64)
        idx = np.arange(start, stop + 1, dtype=np.int64)
        return idx[self.is_odd_squarefree[start : stop + 1]]


def _smallest_prime_factor(limit: int) -> np.ndarray:
    dtype = np.int32 if limit < 2**31 else np.int64
    spf = np.zeros(limit + 1, dtype=dtype)
    for p in range(2, isqrt(limit) + 1):
        if spf[p] == 0:
            seg = spf[p * p :: p]
            seg[seg == 0] = p
    idx = np.arange(limit + 1, dtype=dtype)
    unset = spf == 0
    spf[unset] = idx[unset]
    spf[0] = 0
    spf[1] = 1
    return spf


def build_factor_tables(limit: int) -> FactorTables:
    """Sieve spf, mobius, phi, d(n) and the odd-square-free flag up to ``limit``.

    Every n >= 2 is split as n = p^e * c with p = spf(n) and gcd(c, p) = 1.
    The multiplicative tables are then filled by iterating
    f(n) = f(p^e) * f(c); after omega_max rounds every entry is final.
    """
    if not isinstance(limit, (int, np.integer)) or not 2 <= limit <= MAX_LIMIT:
        raise ConfigurationError(f"limit must be an integer in [2, {MAX_LIMIT}], got {limit!r}")
    limit = int(limit)
    spf = _smallest_prime_factor(limit).astype(np.int64)
    n = np.arange(limit + 1, dtype=np.int64)
    p = spf.copy()
    p[:2] = 1

    rest = n.copy()
    rest[2:] //= p[2:]
    rest[:2] = 1
    exp = np.ones(limit + 1, dtype=np.int64)
    exp[:2] = 0
    active = np.flatnonzero((rest > 1) & (spf[rest] == p))
    while active.size:
        rest[active] //= p[active]
        exp[active] += 1
        active = active[(rest[active] > 1) & (spf[rest[active]] == p[active])]
    ppow = np.where(n >= 2, n // np.maximum(rest, 1), 1)

    mu_local = np.where(exp == 1, -1, 0).astype(np.int64)
    mu_local[:2] = 1
    phi_local = ppow - ppow // np.maximum(p, 1)
    phi_local[:2] = 1
    d_local = exp + 1
    d_local[:2] = 1

    mobius, phi, divcount = mu_local.copy(), phi_local.copy(), d_local.copy()
    while True:
        new_mu = mu_local * mobius[rest]
        new_phi = phi_local * phi[rest]
        new_d = d_local * divcount[rest]
        if (
            np.array_equal(new_mu, mobius)
            and np.array_equal(new_phi, phi)
            and np.array_equal(new_d, divcount)
        ):
            break
        mobius, phi, divcount = new_mu, new_phi, new_d

    mobius[0] = 0
    phi[0] = 0
    divcount[0] = 0
    is_osf = (n % 2 == 1) & (mobius != 0)
    spf_out = spf.astype(np.int32) if limit < 2**31 else spf
    primes = np.flatnonzero(spf == n)
    primes = primes[primes >= 2].astype(np.int64)
    return FactorTables(
        limit=limit,
        spf=_readonly(spf_out),
        mobius=_readonly(mobius.astype(np.int8)),
        phi=_readonly(phi),
        divcount=_readonly(divcount.astype(np.int32)),
        is_odd_squarefree=_readonly(is_osf),
        primes=_readonly(primes),
    )


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for integer a and n >= 0.

    Binary reciprocity algorithm, no factorization required.

    >>> kronecker(8, 3)
    -1
    """
    a = int(a)
    n = int(n)
    if n < 0:
        raise DomainError("bottom argument must be non-negative")
    if n == 0:
        if a == 0:
            raise DomainError("(0/0) is undefined")
        return 1 if a in (1, -1) else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    k = 1 if v % 2 == 0 else _TAB2[a & 7]
    while a != 0:
        v = 0
        while a % 2 == 0:
            a //= 2
            v += 1
        if v % 2:
            k *= _TAB2[n & 7]
        if a & n & 2:
            k = -k
        r = abs(a)
        a = n % r
        n = r
    return k if n == 1 else 0


def kronecker_array(a, n) -> np.ndarray:
    """Vectorized Kronecker symbol for broadcastable integer arrays, n >= 1.

    Same algorithm as :func:`kronecker`, run on all entries in lockstep.
    """
    a = np.asarray(a, dtype=np.int64)
    n = np.asarray(n, dtype=np.int64)
    a, n = np.broadcast_arrays(a, n)
    a = a.copy()
    n = n.copy()
    if np.any(n < 1):
        raise DomainError("kronecker_array requires n >= 1")
    out = np.ones(a.shape, dtype=np.int64)
    out[(a % 2 == 0) & (n % 2 == 0)] = 0

    tz = np.zeros(a.shape, dtype=np.int64)
    even = n % 2 == 0
    while np.any(even):
        n[even] //= 2
        tz[even] += 1
        even = n % 2 == 0
    odd_v = tz % 2 == 1
    out[odd_v] *= _TAB2_ARR[a[odd_v] & 7]

    live = (out != 0) & (a != 0)
    while np.any(live):
        idx = np.flatnonzero(live)
        aa = a.ravel()[idx]
        nn = n.ravel()[idx]
        kk = out.ravel()[idx]
        v = np.zeros(aa.shape, dtype=np.int64)
        ev = aa % 2 == 0
        while np.any(ev):
            aa[ev] //= 2
            v[ev] += 1
            ev = aa % 2 == 0
        flip = v % 2 == 1
        kk[flip] *= _TAB2_ARR[nn[flip] & 7]
        kk[(aa & nn & 2) != 0] *= -1
        r = np.abs(aa)
        aa, nn = nn % r, r
        a.ravel()[idx] = aa
        n.ravel()[idx] = nn
        out.ravel()[idx] = kk
        live = (out != 0) & (a != 0)
    out[(a == 0) & (n != 1)] = 0
    return out
