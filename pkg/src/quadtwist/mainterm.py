"""The main-term constant C0(Phi, Psi) and the pieces it is built from.

Two independent routes are provided.

Diagonal route
    C0_diag(Y) = (4/pi^2) Psi.mass / Y * sum lambda(n1) lambda(n2)
    prod_{p | n1 n2} p/(p+1) Phi(n1/Y) Phi(n2/Y), over odd pairs with n1 n2
    a perfect square. It converges to C0 like Y^(-1/2).

Contour route
    C0 = (4/pi^2) (1/2 pi i) int_(1/2+eps) Psi.mass Phi_M(u) Phi_M(1-u)
    L(2u, sym^2 f) L(2-2u, sym^2 f) L(1, sym^2 f) Z2(u, 1-u) du,
    with Z2 evaluated as an Euler product of local quotients.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import Iterator, NamedTuple

import numpy as np

from .arith import FactorTables
from .errors import (
    AccuracyError,
    ConfigurationError,
    DomainError,
    InsufficientTableError,
)
from .lfunctions import L_symsq, L_symsq_with_error, LSeriesAccessor, zeta_eval  # noqa: F401 (re-exported)
from .modform import EigenformCoefficients, hecke_prime_powers
from .quadrature import DEFAULT_QUADRATURE, QuadratureSpec, gauss_legendre_panels
from .windows import WindowLike, mellin_transform

FOUR_OVER_PI2 = 4.0 / math.pi**2


class SquarePair(NamedTuple):
    n1: int
    n2: int
    r: int
    s1: int
    s2: int


@dataclass(frozen=True)
class SquarePairArrays:
    """All odd pairs n1, n2 <= Ymax with n1 n2 a square, as parallel arrays.

    n1 = r s1^2, n2 = r s2^2 with r = gcd(n1, n2) and gcd(s1, s2) = 1.
    """

    n1: np.ndarray
    n2: np.ndarray
    r: np.ndarray
    s1: np.ndarray
    s2: np.ndarray

    def __len__(self) -> int:
        return int(self.n1.size)


def square_pair_arrays(Ymax: float, tables: FactorTables | None = None) -> SquarePairArrays:
    """Enumerate odd square-product pairs through their (r, s1, s2) parameters."""
    Ymax = int(math.floor(Ymax))
    if tables is not None and Ymax > tables.limit:
        raise InsufficientTableError(f"Ymax={Ymax} exceeds factor tables {tables.limit}")
    parts = []
    smax = isqrt(max(Ymax, 0))
    for s1 in range(1, smax + 1, 2):
        for s2 in range(1, smax + 1, 2):
            if gcd(s1, s2) != 1:
                continue
            rmax = Ymax // max(s1, s2) ** 2
            if rmax < 1:
                continue
            r = np.arange(1, rmax + 1, 2, dtype=np.int64)
            parts.append((r, s1, s2))
    if not parts:
        empty = np.zeros(0, dtype=np.int64)
        return SquarePairArrays(empty, empty, empty, empty, empty)
    r = np.concatenate([p[0] for p in parts])
    s1 = np.concatenate([np.full(p[0].size, p[1], dtype=np.int64) for p in parts])
    s2 = np.concatenate([np.full(p[0].size, p[2], dtype=np.int64) for p in parts])
    return SquarePairArrays(r * s1 * s1, r * s2 * s2, r, s1, s2)


def square_pairs(Ymax: float, tables: FactorTables | None = None) -> Iterator[SquarePair]:
    """Stream of :class:`SquarePair` with n1, n2 <= Ymax, no duplicates."""
    arr = square_pair_arrays(Ymax, tables)
    for row in zip(arr.n1.tolist(), arr.n2.tolist(), arr.r.tolist(), arr.s1.tolist(), arr.s2.tolist()):
        yield SquarePair(*row)


def prime_weight_table(tables: FactorTables, limit: int | None = None) -> np.ndarray:
    """g(n) = prod_{p | n} p/(p+1) for 0 <= n <= limit (g(0) unused)."""
    limit = tables.limit if limit is None else limit
    g = np.ones(limit + 1)
    spf = tables.spf
    for m in range(2, limit + 1):
        p = int(spf[m])
        rest = m // p
        g[m] = g[rest] if rest % p == 0 else g[rest] * p / (p + 1)
    return g


def diagonal_constant(
    Y: float,
    Phi: WindowLike,
    Psi: WindowLike,
    coeffs: EigenformCoefficients,
    tables: FactorTables,
    weights: np.ndarray | None = None,
) -> float:
    """C0_diag(Y), the k = 0 contribution divided by X Y."""
    a, b = Phi.support
    ymax = int(math.ceil(b * Y)) - 1
    if ymax > min(coeffs.limit, tables.limit):
        raise InsufficientTableError(f"need tables up to {ymax}")
    if ymax < 1:
        return 0.0
    g = prime_weight_table(tables, ymax) if weights is None else weights
    pairs = square_pair_arrays(ymax)
    keep = (pairs.n1 > a * Y) & (pairs.n2 > a * Y)
    n1, n2, r = pairs.n1[keep], pairs.n2[keep], pairs.r[keep]
    if n1.size == 0:
        return 0.0
    terms = (
        coeffs.lam[n1] * coeffs.lam[n2]
        * g[n1] * g[n2] / g[r]
        * Phi(n1 / Y) * Phi(n2 / Y)
    )
    return FOUR_OVER_PI2 * Psi.mass / Y * math.fsum(terms.tolist())


@dataclass(frozen=True)
class DiagonalExtrapolation:
    """Estimates of lim C0_diag(Y) from a scan over Y.

    ``weighted`` treats the deviation C0_diag(Y) - C0 as an oscillating term
    of size ~ Y^(-1/2) and takes the inverse-variance mean (weights ~ Y).
    ``fit`` is the least-squares value of C in C + c Y^(-1/2), which assumes a
    single-signed trend. ``spread`` is the scatter of the scan about
    ``weighted``, scaled by sqrt(Y / Y_max).
    """

    weighted: float
    fit: float
    spread: float
    Ys: tuple
    values: tuple


def extrapolate_diagonal(Ys, values) -> DiagonalExtrapolation:
    Ys = np.asarray(Ys, dtype=float)
    values = np.asarray(values, dtype=float)
    weighted = float(np.sum(Ys * values) / np.sum(Ys))
    design = np.column_stack([np.ones_like(Ys), Ys ** -0.5])
    coef, *_ = np.linalg.lstsq(design, values, rcond=None)
    spread = float(np.max(np.abs(values - weighted) * np.sqrt(Ys / Ys.max())))
    return DiagonalExtrapolation(weighted, float(coef[0]), spread, tuple(Ys.tolist()), tuple(values.tolist()))


def diagonal_scan(
    Ys, Phi: WindowLike, Psi: WindowLike, coeffs: EigenformCoefficients, tables: FactorTables
) -> DiagonalExtrapolation:
    """C0_diag over a list of Y, extrapolated."""
    Ys = [float(Y) for Y in Ys]
    g = prime_weight_table(tables, int(math.ceil(max(Ys) * Phi.support[1])))
    values = [diagonal_constant(Y, Phi, Psi, coeffs, tables, g) for Y in Ys]
    return extrapolate_diagonal(Ys, values)


# ---------------------------------------------------------------------------
# Z2: the Euler product left after removing zeta(u+v) L(2u) L(2v) L(u+v)


@dataclass(frozen=True)
class ContourSpec:
    """Parameters of the contour evaluation of C0.

    Attributes:
        epsilon: the u-line is Re u = 1/2 + epsilon.
        T: truncation height; None picks it from the Mellin decay of Phi.
        panel: Gauss-Legendre panel width along the line.
        order: nodes per panel.
        rel_tol: relative accuracy target for truncation and quadrature.
        prime_cutoff: P, primes p <= P enter the Z2 product exactly.
        exponent_cutoff: E, truncates the local Z-series at e1 + e2 <= E;
            None uses the closed form of the local factor (no truncation).
        tail_correction: add the Sato-Tate average of log Z2_p over p > P.
    """

    epsilon: float = 0.08
    T: float | None = None
    panel: float = 1.0
    order: int = 20
    rel_tol: float = 1e-6
    prime_cutoff: int = 10**4
    exponent_cutoff: int | None = None
    tail_correction: bool = True

    def __post_init__(self):
        if not 0 < self.epsilon < 0.25:
            raise ConfigurationError("epsilon must lie in (0, 1/4)")
        if self.T is not None and self.T <= 0:
            raise ConfigurationError("T must be positive")
        if self.panel <= 0 or self.order < 2:
            raise ConfigurationError("panel must be positive and order at least 2")
        if not 0 < self.rel_tol < 1:
            raise ConfigurationError("rel_tol must lie in (0, 1)")
        if self.prime_cutoff < 3:
            raise ConfigurationError("prime_cutoff must be at least 3")
        if self.exponent_cutoff is not None and self.exponent_cutoff < 2:
            raise ConfigurationError("exponent_cutoff must be at least 2")


def _clog1p(z):
    """log(1 + z) for complex z, accurate for small |z| (numpy's is not)."""
    z = np.asarray(z, dtype=complex)
    a, b = z.real, z.imag
    return 0.5 * np.log1p(2 * a + a * a + b * b) + 1j * np.arctan2(b, 1 + a)


def _log_symsq_local_inverse(lam_p, z):
    """log of 1/L_p(sym^2 f) = log(1 - a z + a z^2 - z^3), a = lambda(p)^2 - 1."""
    a = lam_p * lam_p - 1
    return _clog1p(-a * z + a * z * z - z**3)


def _log_inverse_locals(lam_p, x, y):
    """log of the inverse local factors of zeta(u+v) L(2u) L(2v) L(u+v) at p."""
    xy = x * y
    return (
        _clog1p(-xy)
        + _log_symsq_local_inverse(lam_p, x * x)
        + _log_symsq_local_inverse(lam_p, y * y)
        + _log_symsq_local_inverse(lam_p, xy)
    )


def _local_z_minus_one(lam_p, p, x, y):
    """Local Z-factor minus 1, without cancellation.

    The even-degree part of F(x) F(y), F(t) = 1/(1 - lambda t + t^2), is
    ((1+x^2)(1+y^2) + lambda^2 x y) / (Q(x) Q(y)) with
    Q(t) = 1 + (2 - lambda^2) t^2 + t^4; subtracting 1 is expanded by hand.
    """
    l2 = lam_p * lam_p
    b = 2 - l2
    x2, y2 = x * x, y * y
    num = (
        (l2 - 1) * (x2 + y2)
        + l2 * x * y
        + (1 - b * b) * x2 * y2
        - x2 * x2
        - y2 * y2
        - b * x2 * y2 * (x2 + y2)
        - x2 * x2 * y2 * y2
    )
    Q = lambda t2: 1 + b * t2 + t2 * t2
    return p / (p + 1) * num / (Q(x2) * Q(y2))


def _local_z_truncated_minus_one(lam_p, p, x, y, E: int):
    lam_pow = hecke_prime_powers(lam_p, E)
    total = np.zeros(np.broadcast(lam_p, x).shape, dtype=complex)
    for e1 in range(E + 1):
        for e2 in range(E + 1 - e1):
            if (e1 + e2) % 2 or e1 + e2 == 0:
                continue
            total = total + lam_pow[..., e1] * lam_pow[..., e2] * x**e1 * y**e2
    return p / (p + 1) * total


def _log_local_factor(lam_p, p, x, y, E):
    dz = _local_z_minus_one(lam_p, p, x, y) if E is None else _local_z_truncated_minus_one(lam_p, p, x, y, E)
    return _clog1p(dz) + _log_inverse_locals(lam_p, x, y)


_ST_ORDER = 24


def _sato_tate_tail(u: np.ndarray, v: np.ndarray, P: int) -> tuple[np.ndarray, np.ndarray]:
    """Mean and fluctuation scale of sum_{p > P} log Z2_p(u, v).

    lambda(p) = 2 cos(theta_p) is modelled as Sato-Tate distributed and the
    primes by the density 1/log t, so the mean is
    ``int_P^inf E[log Z2_t] dt / log t``. The fluctuation scale is the
    square root of the corresponding variance integral.
    """
    k = np.arange(1, _ST_ORDER + 1)
    theta = k * np.pi / (_ST_ORDER + 1)
    st_w = 2 * np.sin(theta) ** 2 / (_ST_ORDER + 1)  # Gauss-Chebyshev (2nd kind)
    lam = 2 * np.cos(theta)
    # log Z2_p = O(p^-alpha) with alpha the smallest exponent present
    alpha = min(4 * float(np.min(u.real)), 4 * float(np.min(v.real)), 2.0)
    decay = alpha - 1
    ymax = 40.0 / decay
    yv, wy = gauss_legendre_panels(0.0, ymax, max(4, int(math.ceil(ymax / 2))), 16)
    t = P * np.exp(yv)
    dens = wy * t / np.log(t)
    logt = np.log(t)
    x = np.exp(-u[..., None, None] * logt[:, None])
    y = np.exp(-v[..., None, None] * logt[:, None])
    logz = _log_local_factor(lam[None, :], t[:, None], x, y, None)
    mean_theta = logz @ st_w
    var_theta = np.abs(logz - mean_theta[..., None]) ** 2 @ st_w
    return mean_theta @ dens, np.sqrt(np.abs(var_theta @ dens))


def z2_value_with_error(u, v, coeffs: EigenformCoefficients, tables: FactorTables, spec: ContourSpec = ContourSpec()):
    """Z2(u, v) and an error estimate; vectorized over broadcast u, v."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    u, v = np.broadcast_arrays(u, v)
    if np.any(u.real <= 0.26) or np.any(v.real <= 0.26):
        raise DomainError("Z2 needs Re u, Re v > 1/4 + 0.01")
    P = spec.prime_cutoff
    if P > min(coeffs.limit, tables.limit):
        raise InsufficientTableError(f"prime cutoff {P} exceeds coefficient/factor tables")
    primes = tables.primes[tables.primes <= P]
    lam_p = coeffs.lam[primes]
    logp = np.log(primes.astype(float))
    out = np.empty(u.shape, dtype=complex)
    err = np.empty(u.shape, dtype=float)
    flat_u, flat_v = u.ravel(), v.ravel()
    step = max(1, 2**20 // primes.size)
    for start in range(0, flat_u.size, step):
        uu = flat_u[start : start + step]
        vv = flat_v[start : start + step]
        x = np.exp(-np.outer(uu, logp))
        y = np.exp(-np.outer(vv, logp))
        odd = primes > 2
        logs = np.empty(x.shape, dtype=complex)
        logs[:, odd] = _log_local_factor(lam_p[odd], primes[odd].astype(float), x[:, odd], y[:, odd], spec.exponent_cutoff)
        # the Z-sum runs over odd n only, so p = 2 keeps just the inverse factors
        logs[:, ~odd] = _log_inverse_locals(lam_p[~odd], x[:, ~odd], y[:, ~odd])
        log_val = logs.sum(axis=1)
        mean, spread = _sato_tate_tail(uu, vv, P)
        if spec.tail_correction:
            log_val = log_val + mean
            e = np.abs(np.exp(log_val)) * spread
        else:
            e = np.abs(np.exp(log_val)) * (np.abs(mean) + spread)
        val = np.exp(log_val)
        sl = slice(start, start + uu.size)
        out.reshape(-1)[sl] = val
        err.reshape(-1)[sl] = e
    return out, err


def z2_value(u, v, coeffs: EigenformCoefficients, tables: FactorTables, spec: ContourSpec = ContourSpec()):
    """Z2(u, v) (scalar in, scalar out)."""
    val, _ = z2_value_with_error(u, v, coeffs, tables, spec)
    return complex(val) if val.ndim == 0 else val


# ---------------------------------------------------------------------------
# contour route


@dataclass
class ContourResult:
    value: float
    imag: float
    error_estimate: float
    T: float
    nodes: int
    epsilon: float
    seconds: float
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "imag": self.imag,
            "error_estimate": self.error_estimate,
            "T": self.T,
            "nodes": self.nodes,
            "epsilon": self.epsilon,
            "seconds": self.seconds,
            **self.details,
        }


def _mellin_pair(Phi: WindowLike, u: np.ndarray, q: QuadratureSpec) -> np.ndarray:
    return mellin_transform(Phi, u, q) * mellin_transform(Phi, 1 - u, q)


def _contour_height(Phi: WindowLike, eps: float, rel_tol: float, q: QuadratureSpec) -> float:
    u0 = 0.5 + eps
    scale = abs(complex(_mellin_pair(Phi, np.array([u0 + 0j]), q)[0]))
    # L-values and Z2 grow at most polynomially; a factor 1e-3 covers them
    target = 1e-3 * rel_tol * scale
    T = 8.0
    while T < 4096:
        probe = u0 + 1j * T * np.array([1.0, 1.25, 1.5, 2.0])
        if np.all(np.abs(_mellin_pair(Phi, probe, q)) <= target):
            return T
        T *= 1.25
    raise AccuracyError("Mellin transform of Phi does not decay on the contour", achieved=T)


def contour_integrand(u, Phi: WindowLike, Psi: WindowLike, acc: LSeriesAccessor, coeffs, tables, spec: ContourSpec, L1: complex | None = None, q: QuadratureSpec = DEFAULT_QUADRATURE):
    """``H0~(u, 1-u) L(2u) L(2-2u) L(1) Z2(u, 1-u)`` with H0~ = Psi.mass Phi_M(u) Phi_M(1-u)."""
    u = np.asarray(u, dtype=complex)
    L1 = complex(L_symsq(1.0, acc)) if L1 is None else L1
    h0 = Psi.mass * _mellin_pair(Phi, u, q)
    lv = L_symsq(2 * u, acc) * L_symsq(2 - 2 * u, acc)
    z2, z2_err = z2_value_with_error(u, 1 - u, coeffs, tables, spec)
    return h0 * lv * L1 * z2, np.abs(h0 * lv * L1) * z2_err


def c0_contour(
    Phi: WindowLike,
    Psi: WindowLike,
    spec: ContourSpec,
    acc: LSeriesAccessor,
    coeffs: EigenformCoefficients,
    tables: FactorTables,
    q: QuadratureSpec = DEFAULT_QUADRATURE,
) -> ContourResult:
    """C0 as (4/pi^2) (1/2 pi i) int over Re u = 1/2 + eps of the residue integrand.

    The line integral runs over [-T, T] with composite Gauss-Legendre panels,
    so the imaginary part of the result is a genuine symmetry check. A second
    pass with doubled panel width on [0, T] estimates the quadrature error.
    """
    if not 0.01 < spec.epsilon < 0.15:
        raise ConfigurationError("c0_contour needs epsilon in (0.01, 0.15)")
    t0 = time.perf_counter()
    eps = spec.epsilon
    T = spec.T if spec.T is not None else _contour_height(Phi, eps, spec.rel_tol, q)
    L1 = complex(L_symsq(1.0, acc))

    panels = max(2, int(math.ceil(2 * T / spec.panel)))
    t, w = gauss_legendre_panels(-T, T, panels, spec.order)
    f, f_err = contour_integrand(0.5 + eps + 1j * t, Phi, Psi, acc, coeffs, tables, spec, L1, q)
    full = FOUR_OVER_PI2 * np.sum(w * f) / (2 * math.pi)

    coarse_panels = max(1, int(math.ceil(T / (2 * spec.panel))))
    tc, wc = gauss_legendre_panels(0.0, T, coarse_panels, spec.order)
    fc, _ = contour_integrand(0.5 + eps + 1j * tc, Phi, Psi, acc, coeffs, tables, spec, L1, q)
    coarse = FOUR_OVER_PI2 * float(np.real(np.sum(wc * fc))) / math.pi

    edge = np.abs(f[[0, -1]]).max()
    quad_err = abs(full.real - coarse)
    trunc_err = FOUR_OVER_PI2 * float(edge) * T / math.pi
    z2_err = FOUR_OVER_PI2 * float(np.sum(w * f_err)) / (2 * math.pi)
    err = quad_err + trunc_err + z2_err
    if err > spec.rel_tol * abs(full.real) * 10:
        raise AccuracyError("contour evaluation of C0 missed its tolerance", achieved=err / abs(full.real))
    return ContourResult(
        value=float(full.real),
        imag=float(full.imag),
        error_estimate=err,
        T=float(T),
        nodes=int(t.size + tc.size),
        epsilon=eps,
        seconds=time.perf_counter() - t0,
        details={"quadrature_error": quad_err, "truncation_error": trunc_err, "z2_error": z2_err, "L1": L1.real},
    )


def h0_tilde_direct(Phi: WindowLike, Psi: WindowLike, u, v, order: int = 200) -> np.ndarray:
    """H0~(u, v) = int int int h(x, y, z) y^(u-1) z^(v-1) dx dy dz for h = Psi(x) Phi(y) Phi(z).

    Evaluated on a tensor Gauss-Legendre grid over the support of h, as a
    check on the factorized form Psi.mass Phi_M(u) Phi_M(v).
    """
    u = np.atleast_1d(np.asarray(u, dtype=complex))
    v = np.atleast_1d(np.asarray(v, dtype=complex))
    (a, b), (c, d) = Phi.support, Psi.support
    y, wy = gauss_legendre_panels(a, b, 8, order // 8)
    x, wx = gauss_legendre_panels(c, d, 8, order // 8)
    h = np.einsum("i,j,k->ijk", Psi(x) * wx, Phi(y) * wy, Phi(y) * wy)  # h on the grid, with weights
    ly = np.log(y)
    out = np.empty(u.size, dtype=complex)
    for i, (uu, vv) in enumerate(zip(u, v)):
        out[i] = np.einsum("ijk,j,k->", h, np.exp((uu - 1) * ly), np.exp((vv - 1) * ly))
    return out


def h0_mellin_check(
    Phi: WindowLike,
    Psi: WindowLike,
    points,
    line: float = 1.0,
    q: QuadratureSpec = DEFAULT_QUADRATURE,
    rel_tol: float = 1e-10,
    block: int = 512,
) -> np.ndarray:
    """Invert H0~(u, v) = Psi.mass Phi_M(u) Phi_M(v) over the lines Re u = Re v = line.

    Returns ``(1/2 pi i)^2 int int H0~(u,v) y^-u z^-v du dv`` at each (y, z) in
    ``points``; for the product window these must equal
    ``Psi.mass Phi(y) Phi(z)``. The double integral runs over the full tensor
    grid in row blocks.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    scale = abs(complex(mellin_transform(Phi, line + 0j, q)))
    T = 8.0
    while np.abs(mellin_transform(Phi, line + 1j * T, q)) > rel_tol * scale:
        T *= 1.25
    t, w = gauss_legendre_panels(-T, T, int(math.ceil(2 * T)), 20)
    s = line + 1j * t
    wm = mellin_transform(Phi, s, q)
    Ky = w[None, :] * np.exp(-np.outer(np.log(pts[:, 0]), s))
    Kz = w[None, :] * np.exp(-np.outer(np.log(pts[:, 1]), s))
    total = np.zeros(len(pts), dtype=complex)
    for start in range(0, s.size, block):
        rows = slice(start, start + block)
        H = Psi.mass * np.outer(wm[rows], wm)
        total += np.sum(Ky[:, rows] * (H @ Kz.T).T, axis=1)
    return total.real / (2 * math.pi) ** 2
