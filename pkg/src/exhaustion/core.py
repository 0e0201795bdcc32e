"""Alternating dyadic-sum quadrature with incremental refinement.

Level ``n`` adds the signed term

    A_n = 2**-n * sum_{m=1}^{2**n - 1} (-1)**(m+1) f(a + m (b - a) / 2**n)

and the integral is ``(b - a) * sum_n A_n``.  The partial sums telescope to
the interior Riemann sum ``(b - a) 2**-N U_N`` with
``U_N = sum_{m=1}^{2**N - 1} f(a + m (b - a) / 2**N)``, so refinement only
has to evaluate the ``2**(N-1)`` odd-indexed nodes that are new at each level.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterator, Sequence

import numpy as np

__all__ = [
    "CHUNK",
    "ConvergenceRow",
    "Integrand",
    "Interval",
    "LevelTerm",
    "NonFiniteSampleError",
    "QuadOptions",
    "QuadratureResult",
    "RefinementState",
    "Termination",
    "as_integrand",
    "convergence_report",
    "dyadic_node",
    "integrate",
    "integrate_from_zero",
    "integrate_symmetric",
    "level_term_naive",
    "refine",
    "sample_nodes",
    "dyadic_sum",
]

# Nodes are generated, evaluated and reduced in fixed-size blocks so that the
# reduction tree does not depend on thread count.
CHUNK = 1 << 18


class NonFiniteSampleError(ValueError):
    """The integrand returned inf or nan at a quadrature node."""

    def __init__(self, node: float, value: float, result: QuadratureResult | None = None):
        super().__init__(f"integrand is non-finite at x={node!r} (value {value!r})")
        self.node = node
        self.value = value
        self.result = result


class Termination(str, enum.Enum):
    TOLERANCE_MET = "tolerance_met"
    LEVEL_CAP = "level_cap"
    NON_FINITE_SAMPLE = "non_finite_sample"


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("interval bounds must be finite")
        if self.a > self.b:
            raise ValueError(f"interval requires a <= b, got [{self.a}, {self.b}]")

    @property
    def width(self) -> float:
        return self.b - self.a

    @classmethod
    def of(cls, obj: Interval | Sequence[float]) -> Interval:
        if isinstance(obj, Interval):
            return obj
        a, b = obj
        return cls(float(a), float(b))


@dataclass(frozen=True)
class Integrand:
    """A pure real function of one variable.

    ``eval`` must be deterministic and free of side effects; nodes within a
    level may be evaluated concurrently.  With ``vectorized=True`` it is called
    with a float64 array of nodes and must return an array (or scalar) of the
    same shape; otherwise it is called once per node with a Python float.
    """

    eval: Callable
    label: str = "f"
    known_domain: Interval | None = None
    vectorized: bool = False

    def __call__(self, x):
        return self.eval(x)


def as_integrand(f: Integrand | Callable) -> Integrand:
    if isinstance(f, Integrand):
        return f
    if not callable(f):
        raise TypeError("integrand must be callable")
    return Integrand(f, label=getattr(f, "__name__", "f"))


@dataclass(frozen=True)
class LevelTerm:
    n: int
    value: float
    new_node_count: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.new_node_count != 1 << (self.n - 1):
            raise ValueError(f"level {self.n} must introduce 2**(n-1) nodes")


@dataclass(frozen=True)
class RefinementState:
    """Running exhaustion sum through ``level`` (``partial`` includes the width)."""

    interval: Interval
    level: int = 0
    node_sum: float = 0.0
    partial: float = 0.0
    history: tuple[LevelTerm, ...] = ()
    eval_count: int = 0

    @classmethod
    def start(cls, interval: Interval | Sequence[float]) -> RefinementState:
        return cls(Interval.of(interval))


@dataclass(frozen=True)
class QuadOptions:
    tol: float = 1e-10
    max_level: int = 24
    min_level: int = 4

    def __post_init__(self) -> None:
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not 1 <= self.min_level <= self.max_level:
            raise ValueError("need 1 <= min_level <= max_level")

    @classmethod
    def forced(cls, level: int, tol: float = 1e-10) -> QuadOptions:
        """Options that always run exactly ``level`` levels."""
        return cls(tol=tol, max_level=level, min_level=level)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    levels_used: int
    eval_count: int
    converged: bool
    termination: Termination
    history: tuple[LevelTerm, ...] = field(default=(), repr=False)
    width: float = 1.0


def dyadic_node(interval: Interval | Sequence[float], n: int, m: int) -> float:
    interval = Interval.of(interval)
    if n <= 0:
        raise ValueError(f"level must be positive, got {n}")
    if not 1 <= m <= (1 << n) - 1:
        raise ValueError(f"node index {m} outside [1, {(1 << n) - 1}] at level {n}")
    return interval.a + m * interval.width / 2.0**n


def _threads() -> int:
    try:
        return max(0, int(os.environ.get("EXH_THREADS", "0")))
    except ValueError:
        return 0


def _index_chunks(start: int, stop: int, step: int) -> Iterator[np.ndarray]:
    count = len(range(start, stop, step))
    for lo in range(0, count, CHUNK):
        hi = min(count, lo + CHUNK)
        yield start + step * np.arange(lo, hi, dtype=np.float64)


def sample_nodes(f: Integrand, nodes: np.ndarray) -> np.ndarray:
    if f.vectorized:
        vals = np.asarray(f.eval(nodes), dtype=np.float64)
        vals = np.broadcast_to(vals, nodes.shape)
    else:
        vals = np.fromiter((f.eval(x) for x in nodes.tolist()), dtype=np.float64, count=nodes.size)
    bad = ~np.isfinite(vals)
    if bad.any():
        i = int(np.argmax(bad))
        raise NonFiniteSampleError(float(nodes[i]), float(vals[i]))
    return vals


def _map_chunks(fn: Callable[[np.ndarray], float], chunks: Iterator[np.ndarray], parallel: bool) -> list[float]:
    threads = _threads()
    if parallel and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, chunks))
    return [fn(c) for c in chunks]


def dyadic_sum(g: Callable[[np.ndarray], np.ndarray], start: int, stop: int, step: int = 1, parallel: bool = False) -> float:
    """Sum ``g(m)`` over ``m in range(start, stop, step)`` with a fixed reduction tree.

    ``g`` receives float64 arrays of indices.  Each block is reduced with
    numpy's pairwise summation and the block sums are combined with
    :func:`math.fsum`, so the result is independent of threading.
    """
    return math.fsum(_map_chunks(lambda m: float(np.sum(g(m))), _index_chunks(start, stop, step), parallel))


def _odd_node_sum(f: Integrand, interval: Interval, n: int) -> float:
    a, width, scale = interval.a, interval.width, 2.0**n
    return dyadic_sum(lambda m: sample_nodes(f, a + m * width / scale), 1, 1 << n, 2, parallel=f.vectorized)


def level_term_naive(f: Integrand | Callable, interval: Interval | Sequence[float], n: int) -> LevelTerm:
    """Literal level term: every node of level ``n`` with its alternating sign."""
    f = as_integrand(f)
    interval = Interval.of(interval)
    if n < 1:
        raise ValueError("level must be positive")
    a, width, scale = interval.a, interval.width, 2.0**n
    signed: list[float] = []
    for m in _index_chunks(1, 1 << n, 1):
        vals = sample_nodes(f, a + m * width / scale)
        signs = np.where(m % 2 == 1, 1.0, -1.0)
        signed.extend((signs * vals).tolist())
    return LevelTerm(n, math.fsum(signed) / scale, 1 << (n - 1))


def refine(state: RefinementState, f: Integrand | Callable) -> RefinementState:
    """Advance ``state`` one level, evaluating only the new odd-indexed nodes."""
    f = as_integrand(f)
    interval = state.interval
    n = state.level + 1
    new_sum = state.node_sum + _odd_node_sum(f, interval, n)
    term = new_sum / 2.0**n - state.node_sum / 2.0**state.level
    return replace(
        state,
        level=n,
        node_sum=new_sum,
        partial=interval.width * (new_sum / 2.0**n),
        history=state.history + (LevelTerm(n, term, 1 << (n - 1)),),
        eval_count=state.eval_count + (1 << (n - 1)),
    )


def _check_domain(f: Integrand, interval: Interval) -> None:
    dom = f.known_domain
    if dom is not None and (interval.a < dom.a or interval.b > dom.b):
        raise ValueError(f"[{interval.a}, {interval.b}] is outside the domain of {f.label}")


def _result(state: RefinementState, converged: bool, termination: Termination, sign: float = 1.0) -> QuadratureResult:
    width = state.interval.width
    last = state.history[-1].value if state.history else 0.0
    return QuadratureResult(
        value=sign * state.partial,
        error_estimate=abs(last) * width,
        levels_used=state.level,
        eval_count=state.eval_count,
        converged=converged,
        termination=termination,
        history=state.history,
        width=width,
    )


def integrate(
    f: Integrand | Callable,
    interval: Interval | Sequence[float],
    opts: QuadOptions | None = None,
) -> QuadratureResult:
    """Integrate ``f`` over ``interval`` by successive exhaustion levels.

    Stops once ``(b - a) |A_N| <= tol * max(1, |S_N|)`` holds on two
    consecutive levels (and ``N >= min_level``), or at ``max_level``.  A pair
    ``(a, b)`` with ``a > b`` integrates over ``[b, a]`` and negates.

    Raises :class:`NonFiniteSampleError` if any node evaluates to inf/nan;
    the exception's ``result`` holds the estimate from the last complete level.
    """
    f = as_integrand(f)
    opts = opts or QuadOptions()
    sign = 1.0
    if not isinstance(interval, Interval):
        a, b = (float(v) for v in interval)
        if a > b:
            a, b, sign = b, a, -1.0
        interval = Interval(a, b)
    state = RefinementState.start(interval)
    if interval.a == interval.b:
        return _result(state, True, Termination.TOLERANCE_MET, sign)
    _check_domain(f, interval)

    hits = 0
    while state.level < opts.max_level:
        try:
            state = refine(state, f)
        except NonFiniteSampleError as exc:
            exc.result = _result(state, False, Termination.NON_FINITE_SAMPLE, sign)
            raise
        tail = abs(state.history[-1].value) * interval.width
        hits = hits + 1 if tail <= opts.tol * max(1.0, abs(state.partial)) else 0
        if hits >= 2 and state.level >= opts.min_level:
            return _result(state, True, Termination.TOLERANCE_MET, sign)
    return _result(state, hits >= 2, Termination.TOLERANCE_MET if hits >= 2 else Termination.LEVEL_CAP, sign)


def integrate_from_zero(f: Integrand | Callable, b: float, opts: QuadOptions | None = None) -> QuadratureResult:
    return integrate(f, (0.0, float(b)), opts)


def integrate_symmetric(h: Integrand | Callable, b: float, opts: QuadOptions | None = None) -> QuadratureResult:
    """Integrate ``h`` over ``[-b, b]`` by pairing the nodes ``x`` and ``-x`` on ``[0, b]``.

    Odd integrands cancel node by node, so their value is exactly zero at
    every level.
    """
    if not b > 0:
        raise ValueError("half-width b must be positive")
    h = as_integrand(h)
    if h.known_domain is not None and (h.known_domain.a > -b or h.known_domain.b < b):
        raise ValueError(f"[-{b}, {b}] is outside the domain of {h.label}")
    ev = h.eval
    folded = Integrand(lambda x: ev(x) + ev(-x), label=f"{h.label}(x)+{h.label}(-x)", vectorized=h.vectorized)
    return integrate(folded, Interval(0.0, float(b)), opts)


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    a_n: float
    partial: float
    error_ratio: float | None


def convergence_report(
    f: Integrand | Callable,
    interval: Interval | Sequence[float],
    levels: int,
    exact: float | None = None,
) -> list[ConvergenceRow]:
    """Per-level table of scaled terms, partial sums and error ratios.

    Row ``n`` has ratio ``|I - S_{n+1}| / |I - S_n|`` when ``exact`` is given,
    else ``|A_{n+1} / A_n|``; one extra level is evaluated for the last row.
    A zero denominator gives ``None``.
    """
    if levels < 2:
        raise ValueError("convergence report needs at least 2 levels")
    f = as_integrand(f)
    state = RefinementState.start(interval)
    partials: list[float] = []
    for _ in range(levels + 1):
        state = refine(state, f)
        partials.append(state.partial)
    width = state.interval.width
    terms = [t.value * width for t in state.history]
    rows = []
    for i in range(levels):
        if exact is not None:
            num, den = abs(exact - partials[i + 1]), abs(exact - partials[i])
        else:
            num, den = abs(terms[i + 1]), abs(terms[i])
        rows.append(ConvergenceRow(i + 1, terms[i], partials[i], num / den if den else None))
    return rows
