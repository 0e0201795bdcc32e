"""Dyadic double-sum series for elementary and special functions.

Every series here has the shape

    value = offset + scale * sum_{n=1}^{N} sum_{m=1}^{2**n - 1} (-1)**(m+1) t(n, m)

where the printed summand satisfies ``t(n, 2m) = t(n-1, m) / 2``.  That makes
the truncated sum obey ``S_N = S_{N-1} / 2 + sum_{m odd} t(N, m)``, so each
level only evaluates its ``2**(N-1)`` new odd terms.  ``eval_series_literal``
keeps the plain alternating double sum for cross-checking.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import dyadic_sum

__all__ = [
    "SeriesId",
    "eval_series",
    "eval_series_literal",
    "sinc_product",
    "sinc_sum",
]


class SeriesId(enum.Enum):
    SINC_PRODUCT = "sinc_product"
    SINC_SUM = "sinc_sum"
    SIN = "sin"
    COS = "cos"
    SINE_INTEGRAL = "sine_integral"
    EXP = "exp"
    GAUSSIAN = "gaussian"
    LN = "ln"
    FACTORIAL = "factorial"

    @classmethod
    def parse(cls, name: str | SeriesId) -> SeriesId:
        if isinstance(name, SeriesId):
            return name
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown series {name!r}; choose from {[s.value for s in cls]}") from None


@dataclass(frozen=True)
class _DyadicSeries:
    offset: float
    scale: float
    # t(n, m) for a float64 array of m
    term: Callable[[int, np.ndarray], np.ndarray]


def _params(series: SeriesId, params: float | Sequence[float]) -> tuple[float, ...]:
    if isinstance(params, (int, float)):
        params = (params,)
    vals = tuple(float(v) for v in params)
    arity = {
        SeriesId.SINC_SUM: (1, 2),
        SeriesId.SINE_INTEGRAL: (2,),
        SeriesId.GAUSSIAN: (2,),
    }.get(series, (1,))
    if len(vals) not in arity:
        raise ValueError(f"{series.value} takes {' or '.join(map(str, arity))} parameter(s), got {len(vals)}")
    if not all(math.isfinite(v) for v in vals):
        raise ValueError("series parameters must be finite")
    return vals


def _build(series: SeriesId, vals: tuple[float, ...]) -> _DyadicSeries:
    if series is SeriesId.SINC_SUM:
        a, b = vals if len(vals) == 2 else (vals[0], 1.0)
        return _DyadicSeries(0.0, b, lambda n, m: np.cos(m * b * a / 2.0**n) / 2.0**n)
    if series is SeriesId.SIN:
        (x,) = vals
        return _DyadicSeries(0.0, x, lambda n, m: np.cos(m * x / 2.0**n) / 2.0**n)
    if series is SeriesId.COS:
        (x,) = vals
        return _DyadicSeries(1.0, -x, lambda n, m: np.sin(m * x / 2.0**n) / 2.0**n)
    if series is SeriesId.SINE_INTEGRAL:
        a, b = vals
        return _DyadicSeries(0.0, 1.0, lambda n, m: np.sin(m * b * a / 2.0**n) / m)
    if series is SeriesId.EXP:
        (x,) = vals
        return _DyadicSeries(1.0, x, lambda n, m: np.exp(m * x / 2.0**n) / 2.0**n)
    if series is SeriesId.GAUSSIAN:
        a, b = vals
        return _DyadicSeries(0.0, b, lambda n, m: np.exp(-a * (m * b) ** 2 / 4.0**n) / 2.0**n)
    if series is SeriesId.LN:
        (x,) = vals
        if not x > 0:
            raise ValueError(f"ln series needs x > 0, got {x}")
        return _DyadicSeries(0.0, 1.0, lambda n, m: (x - 1) / (2.0**n + m * (x - 1)))
    if series is SeriesId.FACTORIAL:
        (p,) = vals
        if not p >= 0:
            raise ValueError(f"factorial series needs p >= 0, got {p}")
        return _DyadicSeries(0.0, 1.0, lambda n, m: np.log(2.0**n / m) ** p / 2.0**n)
    raise ValueError(f"{series.value} is not a dyadic double sum")


def eval_series(series: SeriesId | str, params: float | Sequence[float], levels: int) -> float:
    """Truncate a catalog series after ``levels`` dyadic levels.

    ``params`` by series: ``x`` for SIN, COS, EXP and LN; ``(a, b)`` for
    SINE_INTEGRAL and GAUSSIAN; ``p`` for FACTORIAL (Gamma(p + 1) for
    non-integer p); ``a`` or ``(a, b)`` for SINC_SUM.  For SINC_PRODUCT
    ``levels`` is the number of product terms.
    """
    series = SeriesId.parse(series)
    vals = _params(series, params)
    if series is SeriesId.SINC_PRODUCT:
        return sinc_product(vals[0], levels)
    if levels < 1:
        raise ValueError("levels must be >= 1")
    spec = _build(series, vals)
    total = 0.0
    for n in range(1, levels + 1):
        total = total / 2 + dyadic_sum(lambda m: spec.term(n, m), 1, 1 << n, 2)
    return spec.offset + spec.scale * total


def eval_series_literal(series: SeriesId | str, params: float | Sequence[float], levels: int) -> float:
    """Same truncation as :func:`eval_series`, summing every signed term of every level."""
    series = SeriesId.parse(series)
    spec = _build(series, _params(series, params))
    if levels < 1:
        raise ValueError("levels must be >= 1")
    terms: list[float] = []
    for n in range(1, levels + 1):
        m = np.arange(1, 1 << n, dtype=np.float64)
        terms.extend((np.where(m % 2 == 1, 1.0, -1.0) * spec.term(n, m)).tolist())
    return spec.offset + spec.scale * math.fsum(terms)


def sinc_product(a: float, terms: int) -> float:
    """``cos^2(a/2) + sum_{n=1}^{terms} sin^2(a/2^(n+1)) prod_{m=1}^{n} cos(a/2^m)``."""
    if terms < 0:
        raise ValueError("terms must be >= 0")
    total = [math.cos(a / 2) ** 2]
    prod = 1.0
    for n in range(1, terms + 1):
        prod *= math.cos(a / 2.0**n)
        total.append(math.sin(a / 2.0 ** (n + 1)) ** 2 * prod)
    return math.fsum(total)


def sinc_sum(a: float, levels: int) -> float:
    return eval_series(SeriesId.SINC_SUM, a, levels)
