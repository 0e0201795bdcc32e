"""Numerical integration by the generalized method of exhaustion."""

from .core import (
    ConvergenceRow,
    Integrand,
    Interval,
    LevelTerm,
    NonFiniteSampleError,
    QuadOptions,
    QuadratureResult,
    RefinementState,
    Termination,
    convergence_report,
    dyadic_node,
    integrate,
    integrate_from_zero,
    integrate_symmetric,
    level_term_naive,
    refine,
)
from .improper import TailPolicy, integrate_semi_infinite
from .series import SeriesId, eval_series, sinc_product, sinc_sum

__version__ = "0.1.0"
