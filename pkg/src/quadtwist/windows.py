"""Compactly supported bump windows and the transforms applied to them.

The canonical window on [a, b] is ``exp(-1/(x-a) - 1/(b-x))``. Besides
point evaluation this module provides

* the cosine-plus-sine transform ``int (cos + sin)(2 pi xi x) W(x) dx``,
* the Mellin transform ``W_M(s) = int x^(s-1) W(x) dx`` and its inverse,
* the cosine/sine transform rebuilt from W_M along a vertical line, used to
  cross-check the Mellin-Barnes representation, and
* the envelope check for ``Gamma(s) (cos +- sin)(pi s / 2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Literal, Protocol

import numpy as np
from scipy.special import loggamma

from .errors import AccuracyError, ConfigurationError
from .quadrature import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    gauss_legendre_panels,
    integrate,
)


class WindowLike(Protocol):
    @property
    def support(self) -> tuple[float, float]: ...

    def __call__(self, x): ...


@dataclass(frozen=True)
class SmoothWindow:
    """Bump ``exp(-1/(x-a) - 1/(b-x))`` on (a, b), zero elsewhere."""

    a: float = 0.5
    b: float = 1.0

    def __post_init__(self):
        if not (0 < self.a < self.b < np.inf):
            raise ConfigurationError(f"window support needs 0 < a < b < inf, got [{self.a}, {self.b}]")

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.b)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        inside = (x > self.a) & (x < self.b)
        xi = x[inside]
        with np.errstate(over="ignore", divide="ignore"):
            out[inside] = np.exp(-1.0 / (xi - self.a) - 1.0 / (self.b - xi))
        return out if out.ndim else float(out)

    @cached_property
    def mass(self) -> float:
        value, _ = integrate(lambda x: np.atleast_1d(self(x)), self.a, self.b)
        return float(value[0])


@dataclass(frozen=True)
class WindowCombination:
    """Finite linear combination ``sum c_j W_j`` of windows."""

    terms: tuple[tuple[float, SmoothWindow], ...]

    @property
    def support(self) -> tuple[float, float]:
        return (min(w.a for _, w in self.terms), max(w.b for _, w in self.terms))

    def __call__(self, x):
        return sum(c * w(x) for c, w in self.terms)

    @property
    def mass(self) -> float:
        return sum(c * w.mass for c, w in self.terms)


def window_eval(W: WindowLike, x):
    """W(x); zero outside the support."""
    return W(x)


def _as_output(values: np.ndarray, scalar: bool):
    return values[0] if scalar else values


def tilde_transform(W: WindowLike, xi, q: QuadratureSpec = DEFAULT_QUADRATURE):
    """``int (cos(2 pi xi x) + sin(2 pi xi x)) W(x) dx``, vectorized over xi.

    Breakpoints are placed every quarter period of the largest |xi| so each
    adaptive panel sees at most a quarter oscillation.
    """
    scalar = np.ndim(xi) == 0
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    a, b = W.support
    top = float(np.max(np.abs(xi))) if xi.size else 0.0
    points = np.arange(a, b, 0.25 / top)[1:] if top > 0 else None

    def f(x):
        arg = 2 * np.pi * xi * x
        return (np.cos(arg) + np.sin(arg)) * W(x)

    value, _ = integrate(f, a, b, q, points)
    return _as_output(value, scalar)


def _log_breakpoints(a: float, b: float, tmax: float) -> np.ndarray | None:
    if tmax <= 0:
        return None
    step = 0.5 * np.pi / tmax
    logs = np.arange(np.log(a), np.log(b), step)[1:]
    return np.exp(logs)


def mellin_transform(W: WindowLike, s, q: QuadratureSpec = DEFAULT_QUADRATURE):
    """``W_M(s) = int_0^inf x^(s-1) W(x) dx``, vectorized over complex s."""
    scalar = np.ndim(s) == 0
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    a, b = W.support
    points = _log_breakpoints(a, b, float(np.max(np.abs(s.imag))))
    sm1 = s - 1

    def f(x):
        return np.exp(sm1 * np.log(x)) * W(x)

    value, _ = integrate(f, a, b, q, points)
    return _as_output(value, scalar)


def gamma_trig(s, kind: Literal["cos", "sin"]):
    """``Gamma(s) cos(pi s/2)`` or ``Gamma(s) sin(pi s/2)`` without overflow.

    Both factors are exponentially large/small in |Im s| separately, so the
    product is formed from ``exp(loggamma(s) +- i pi s / 2)``.
    """
    s = np.asarray(s, dtype=complex)
    lg = loggamma(s)
    z = 0.5 * np.pi * s
    ep = np.exp(lg + 1j * z)
    em = np.exp(lg - 1j * z)
    if kind == "cos":
        return 0.5 * (ep + em)
    if kind == "sin":
        return (ep - em) / 2j
    raise ConfigurationError(f"kind must be 'cos' or 'sin', got {kind!r}")


def gamma_cs_envelope_ratio(s, sign: int = 1):
    """``|Gamma(s)(cos + sign*sin)(pi s/2)| / |s|^(Re s - 1/2)``."""
    s = np.asarray(s, dtype=complex)
    val = gamma_trig(s, "cos") + sign * gamma_trig(s, "sin")
    return np.abs(val) / np.abs(s) ** (s.real - 0.5)


def gamma_decay_constant(
    sigmas=(0.25, 0.5, 0.75, 1.0),
    ts=tuple(2.0**j for j in range(10)),
) -> float:
    """Largest envelope ratio over the grid, both signs; the fitted constant."""
    sig = np.asarray(sigmas, dtype=float)[:, None]
    t = np.asarray(ts, dtype=float)[None, :]
    s = sig + 1j * t
    ratios = np.concatenate([
        gamma_cs_envelope_ratio(s, +1).ravel(),
        gamma_cs_envelope_ratio(s, -1).ravel(),
        gamma_cs_envelope_ratio(np.conj(s), +1).ravel(),
        gamma_cs_envelope_ratio(np.conj(s), -1).ravel(),
    ])
    return float(ratios.max())


@dataclass
class LineIntegral:
    """Result of a truncated vertical-line integral."""

    value: float
    height: float
    tail_estimate: float
    nodes: int


def _truncation_height(envelope, scale: float, tol: float, start: float = 8.0, cap: float = 4096.0) -> float:
    T = start
    while T <= cap:
        probe = np.array([T, 1.25 * T, 1.5 * T, 2.0 * T])
        if np.all(envelope(probe) <= tol * scale):
            return T
        T *= 1.5
    raise AccuracyError("vertical-line integrand does not decay below tolerance", achieved=float(envelope(np.array([cap]))[0] / scale))


def _half_line_integral(g, T: float, panel: float = 0.5, order: int = 20) -> float:
    """(1/pi) Re int_0^T g(t) dt for integrands with g(-t) = conj g(t)."""
    panels = max(1, int(np.ceil(T / panel)))
    t, w = gauss_legendre_panels(0.0, T, panels, order)
    return float(np.real(np.sum(w * g(t))) / np.pi)


def cs_transform_via_mellin(
    W: WindowLike,
    y: float,
    kind: Literal["cos", "sin"],
    line: float = 0.5,
    q: QuadratureSpec = DEFAULT_QUADRATURE,
    tol: float = 1e-12,
) -> LineIntegral:
    """``int_0^inf W(x) CS(2 pi x y) dx`` rebuilt from the Mellin transform.

    Evaluates ``(1/2 pi i) int_(line) W_M(1-s) Gamma(s) CS(sgn(y) pi s/2)
    (2 pi |y|)^(-s) ds`` with the line truncated at the height where the
    integrand envelope drops below ``tol`` times its size at the real axis.
    """
    if y == 0:
        raise ConfigurationError("y must be nonzero")
    if not 0 < line < 1:
        raise ConfigurationError("line must lie in (0, 1)")
    sgn = 1.0 if y > 0 else -1.0
    scale_y = 2 * np.pi * abs(y)

    def g(t):
        s = line + 1j * np.asarray(t)
        wm = mellin_transform(W, 1 - s, q)
        trig = gamma_trig(s, kind)
        if kind == "sin":
            trig = sgn * trig
        return wm * trig * np.exp(-s * np.log(scale_y))

    def envelope(t):
        return np.abs(g(t))

    scale = float(np.abs(g(np.array([0.0])))[0]) + 1e-300
    T = _truncation_height(envelope, scale, tol)
    tail = float(envelope(np.array([T]))[0]) * T
    value = _half_line_integral(g, T)
    return LineIntegral(value=value, height=T, tail_estimate=tail, nodes=int(np.ceil(T / 0.5)) * 20)


def inverse_mellin(W: WindowLike, x, line: float = 1.0, q: QuadratureSpec = DEFAULT_QUADRATURE, tol: float = 1e-12):
    """Reconstruct W(x) from ``(1/2 pi i) int_(line) x^(-s) W_M(s) ds``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    logx = np.log(x)

    def wm(t):
        return mellin_transform(W, line + 1j * np.asarray(t), q)

    scale = float(np.abs(wm(np.array([0.0])))[0])
    T = _truncation_height(lambda t: np.abs(wm(t)), scale, tol)
    panels = max(1, int(np.ceil(T / 0.5)))
    t, w = gauss_legendre_panels(0.0, T, panels, 20)
    s = line + 1j * t
    kern = np.exp(-np.outer(logx, s))
    return np.real(kern @ (w * wm(t))) / np.pi
