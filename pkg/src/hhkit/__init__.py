"""Numerical toolkit for approximate convexity and Hermite-Hadamard
inequalities: Takagi-type series, dyadic averaging kernels, a log-scale
convolution calculus, error-function transforms between the approximate
Jensen and Hermite-Hadamard inequalities, and a verification harness.
"""

from hhkit.quadrature import (
    QuadratureSpec,
    IntegralResult,
    QuadratureError,
    BudgetExhaustedError,
    integrate,
    integrate_log_substituted,
)

__version__ = "0.1.0"
