"""Adaptive quadrature with explicit tolerance control.

Thin layer over :func:`scipy.integrate.quad_vec` (adaptive Gauss-Kronrod on
vector-valued integrands) that turns a missed tolerance into an
:class:`~quadtwist.errors.AccuracyError` instead of a warning.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad_vec

from .errors import AccuracyError, ConfigurationError


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 4000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ConfigurationError("quadrature tolerances must be positive")
        if self.max_subdivisions < 10:
            raise ConfigurationError("max_subdivisions must be at least 10")


DEFAULT_QUADRATURE = QuadratureSpec()


def integrate(
    f: Callable[[float], np.ndarray],
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    points: Sequence[float] | None = None,
) -> tuple[np.ndarray, float]:
    """Integrate a (possibly vector-valued) function over [a, b].

    Returns ``(value, error_estimate)``. The error criterion is the max-norm
    estimate against ``max(abs_tol, rel_tol * max|value|)``.
    """
    if points is not None:
        points = [p for p in points if a < p < b]
        if not points:
            points = None
    limit = max(spec.max_subdivisions, 2 * len(points or ()) + 10)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        value, err, info = quad_vec(
            f, a, b,
            epsabs=spec.abs_tol, epsrel=spec.rel_tol,
            norm="max", limit=limit, points=points, full_output=True,
        )
    target = max(spec.abs_tol, spec.rel_tol * float(np.max(np.abs(value))))
    if info.status != 0 and err > target:
        raise AccuracyError("adaptive quadrature did not converge", achieved=float(err))
    return value, float(err)


def gauss_legendre_panels(a: float, b: float, panels: int, order: int = 20):
    """Nodes and weights of a composite Gauss-Legendre rule on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights
