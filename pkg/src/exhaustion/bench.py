"""Exhaustion against composite Newton-Cotes rules at equal evaluation counts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import Integrand, Interval, QuadOptions, as_integrand, integrate, sample_nodes

__all__ = [
    "BENCH_HEADER",
    "BenchCase",
    "BenchRow",
    "METHODS",
    "bench_matched_evals",
    "default_suite",
    "poly_suite",
    "run_suite",
]

BENCH_HEADER = ("function", "method", "level", "eval_count", "abs_error")
METHODS = ("exhaustion", "midpoint", "trapezoid", "simpson")


@dataclass(frozen=True)
class BenchRow:
    function: str
    method: str
    level: int
    eval_count: int
    abs_error: float


@dataclass(frozen=True)
class BenchCase:
    f: Integrand
    interval: Interval
    exact: float


def _midpoint(f: Integrand, iv: Interval, evals: int) -> float:
    h = iv.width / evals
    return h * math.fsum(sample_nodes(f, iv.a + (np.arange(evals) + 0.5) * h))


def _trapezoid(f: Integrand, iv: Interval, evals: int) -> float:
    panels = evals - 1
    h = iv.width / panels
    y = sample_nodes(f, iv.a + np.arange(evals) * h)
    return h * math.fsum([0.5 * y[0], math.fsum(y[1:-1]), 0.5 * y[-1]])


def _simpson(f: Integrand, iv: Interval, evals: int) -> float:
    panels = evals - 1
    if panels % 2:
        raise ValueError("Simpson's rule needs an odd number of evaluations")
    h = iv.width / panels
    y = sample_nodes(f, iv.a + np.arange(evals) * h)
    return h / 3 * math.fsum([y[0], 4 * math.fsum(y[1:-1:2]), 2 * math.fsum(y[2:-1:2]), y[-1]])


def _exhaustion(f: Integrand, iv: Interval, level: int) -> tuple[float, int]:
    r = integrate(f, iv, QuadOptions.forced(level))
    return r.value, r.eval_count


def bench_matched_evals(
    f: Integrand | Callable,
    interval: Interval | Sequence[float],
    exact: float,
    methods: Sequence[str] = METHODS,
    levels: Sequence[int] = range(4, 19),
) -> list[BenchRow]:
    """Absolute errors of each method with ``2**N - 1`` integrand evaluations."""
    f = as_integrand(f)
    iv = Interval.of(interval)
    unknown = set(methods) - set(METHODS)
    if unknown:
        raise ValueError(f"unknown methods {sorted(unknown)}")
    rows = []
    for method in methods:
        for level in levels:
            evals = (1 << level) - 1
            if method == "exhaustion":
                value, evals = _exhaustion(f, iv, level)
            elif method == "midpoint":
                value = _midpoint(f, iv, evals)
            elif method == "trapezoid":
                value = _trapezoid(f, iv, evals)
            else:
                value = _simpson(f, iv, evals)
            rows.append(BenchRow(f.label, method, level, evals, abs(value - exact)))
    return rows


def default_suite() -> list[BenchCase]:
    """Smooth integrands whose endpoint values do not cancel."""

    def vec(fn, label):
        return Integrand(fn, label=label, vectorized=True)

    return [
        BenchCase(vec(np.exp, "exp(x)"), Interval(0.0, 1.0), math.e - 1),
        BenchCase(vec(lambda x: 1 / (1 + x * x), "1/(1+x^2)"), Interval(0.0, 1.0), math.pi / 4),
        BenchCase(vec(np.cos, "cos(x)"), Interval(0.0, 1.0), math.sin(1.0)),
        BenchCase(vec(lambda x: np.sqrt(1 + x), "sqrt(1+x)"), Interval(0.0, 1.0), (2 / 3) * (2**1.5 - 1)),
    ]


def poly_suite(seed: int, count: int = 4, degree: int = 6) -> list[BenchCase]:
    """Random polynomials on random intervals, exact values from the antiderivative."""
    rng = np.random.default_rng(seed)
    cases = []
    for i in range(count):
        coeffs = rng.uniform(-1, 1, degree + 1)
        a = float(rng.uniform(-2, 1))
        b = a + float(rng.uniform(0.5, 2))
        poly = np.polynomial.Polynomial(coeffs)
        anti = poly.integ()
        cases.append(BenchCase(Integrand(poly, label=f"poly{i}", vectorized=True), Interval(a, b), float(anti(b) - anti(a))))
    return cases


def run_suite(cases: Sequence[BenchCase], methods: Sequence[str] = METHODS, levels: Sequence[int] = range(4, 19)) -> list[BenchRow]:
    rows = []
    for case in cases:
        rows.extend(bench_matched_evals(case.f, case.interval, case.exact, methods, levels))
    return rows
