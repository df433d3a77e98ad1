"""Numerical check of Poisson summation for quadratic characters.

For odd n and a window F,

    sum_{d odd} (d/n) F(d/X) = (X/2n) (2/n) sum_k (-1)^k G_k(n) F~(kX/2n),

where F~ is the cosine-plus-sine transform. The dual sum is truncated
adaptively in blocks of k once a full block contributes less than ``tol``
relative to ``sum_d |F(d/X)|``. The same l1 mass normalizes the residual:
for symmetric windows the character sum can cancel to exactly zero, so a
residual relative to the left side alone is not meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import FactorTables, kronecker
from .errors import DomainError
from .gauss import gauss_closed
from .quadrature import QuadratureSpec
from .windows import WindowLike, tilde_transform


@dataclass
class PoissonCheck:
    n: int
    X: float
    lhs: float
    lhs_abs: float
    rhs: float
    k_max: int
    tail_estimate: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def relative_residual(self) -> float:
        return self.residual / self.lhs_abs


def poisson_lhs(F: WindowLike, n: int, X: float) -> tuple[float, float]:
    """``sum_{d odd} (d/n) F(d/X)`` and the l1 mass ``sum_{d odd} |F(d/X)|``."""
    a, b = F.support
    d = np.arange(int(math.floor(a * X)), int(math.ceil(b * X)) + 1)
    d = d[(d % 2 == 1) & (d > 0)]
    weights = [float(F(di / X)) for di in d]
    terms = [kronecker(int(di), n) * w for di, w in zip(d, weights)]
    return math.fsum(terms), math.fsum(abs(w) for w in weights)


def poisson_check(
    F: WindowLike,
    n: int,
    X: float,
    tables: FactorTables,
    tol: float = 1e-8,
    block: int = 16,
    max_k: int = 10**6,
    q: QuadratureSpec | None = None,
) -> PoissonCheck:
    """Evaluate both sides of the identity for odd ``n``."""
    if n % 2 == 0 or n < 1:
        raise DomainError(f"n must be odd and positive, got {n}")
    lhs, lhs_abs = poisson_lhs(F, n, X)
    scale = X / (2 * n)
    if q is None:
        # each transform only needs to be accurate relative to the target
        # residual, spread over |G_k(n)| <= n^1.5
        abs_tol = max(1e-15, 1e-3 * tol * lhs_abs / (scale * n**1.5))
        q = QuadratureSpec(abs_tol=abs_tol, rel_tol=1e-12)
    chi2 = kronecker(2, n)

    def block_terms(ks: np.ndarray) -> np.ndarray:
        g = np.array([gauss_closed(int(k), n, tables) for k in ks])
        keep = g != 0
        out = np.zeros(len(ks))
        if np.any(keep):
            ft = np.atleast_1d(tilde_transform(F, ks[keep] * X / (2 * n), q))
            out[keep] = np.where(ks[keep] % 2 == 0, 1.0, -1.0) * g[keep] * ft
        return out

    terms = [block_terms(np.array([0]))]
    k = 1
    tail = math.inf
    while k <= max_k:
        ks = np.arange(k, k + block)
        blk = np.concatenate([block_terms(ks), block_terms(-ks)])
        terms.append(blk)
        k += block
        tail = float(np.abs(blk).sum())
        if scale * tail <= tol * lhs_abs:
            break
    rhs = scale * chi2 * math.fsum(np.concatenate(terms))
    return PoissonCheck(n=n, X=X, lhs=lhs, lhs_abs=lhs_abs, rhs=rhs, k_max=k - 1, tail_estimate=scale * tail)
