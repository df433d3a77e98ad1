"""Numerical study of the mean square of quadratic twists of Delta's coefficients.

The package computes

    S(X, Y) = sum*_{d odd square-free} (sum_n lambda(n) chi_8d(n) Phi(n/Y))^2 Psi(d/X)

by brute force and compares it with C0(Phi, Psi) X Y, where C0 is obtained
both from the diagonal (square-product) terms and from a contour integral of
symmetric-square L-values.
"""

__version__ = "0.1.0"

from .arith import FactorTables, build_factor_tables, kronecker  # noqa: E402
from .charsum import ExperimentPoint, inner_sum, mean_square  # noqa: E402
from .errors import (  # noqa: E402
    AccuracyError,
    ArithmeticOverflowError,
    ConfigurationError,
    DomainError,
    InsufficientTableError,
    PoleError,
    QuadTwistError,
)
from .gauss import gauss_closed, gauss_direct, verify_gauss  # noqa: E402
from .lfunctions import L_symsq, LSeriesAccessor, zeta_eval  # noqa: E402
from .mainterm import (  # noqa: E402
    ContourSpec,
    SquarePair,
    c0_contour,
    diagonal_constant,
    square_pairs,
    z2_value,
)
from .modform import EigenformCoefficients, eta_power_q_expansion, lambda_table  # noqa: E402
from .poisson import poisson_check  # noqa: E402
from .windows import SmoothWindow, mellin_transform, tilde_transform  # noqa: E402

__all__ = [
    "AccuracyError", "ArithmeticOverflowError", "ConfigurationError", "ContourSpec", "DomainError",
    "EigenformCoefficients", "ExperimentPoint", "FactorTables", "InsufficientTableError", "LSeriesAccessor",
    "L_symsq", "PoleError", "QuadTwistError", "SmoothWindow", "SquarePair", "build_factor_tables",
    "c0_contour", "diagonal_constant", "eta_power_q_expansion", "gauss_closed", "gauss_direct", "inner_sum",
    "kronecker", "lambda_table", "mean_square", "mellin_transform", "poisson_check", "square_pairs",
    "tilde_transform", "verify_gauss", "z2_value", "zeta_eval",
]
