"""Integrals over [0, inf) as a sum of exhaustion-integrated blocks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

from .core import (
    Integrand,
    Interval,
    NonFiniteSampleError,
    QuadOptions,
    QuadratureResult,
    Termination,
    as_integrand,
    integrate,
)

__all__ = ["TailPolicy", "iter_blocks", "integrate_semi_infinite"]


@dataclass(frozen=True)
class TailPolicy:
    """Block width and the rule for deciding the tail is negligible.

    Summation stops after ``consecutive_small`` successive blocks each have
    magnitude at most ``tail_tol``.
    """

    block_width: float = 1.0
    tail_tol: float = 1e-10
    max_blocks: int = 10_000
    consecutive_small: int = 2

    def __post_init__(self) -> None:
        if not self.block_width > 0:
            raise ValueError("block_width must be positive")
        if not self.tail_tol > 0:
            raise ValueError("tail_tol must be positive")
        if self.max_blocks < 1:
            raise ValueError("max_blocks must be >= 1")
        if self.consecutive_small < 2:
            raise ValueError("consecutive_small must be >= 2")


def iter_blocks(
    f: Integrand | Callable,
    block_width: float,
    opts: QuadOptions | None = None,
) -> Iterator[QuadratureResult]:
    """Exhaustion results for ``[0, b], [b, 2b], ...`` without end."""
    f = as_integrand(f)
    p = 0
    while True:
        yield integrate(f, Interval(p * block_width, (p + 1) * block_width), opts)
        p += 1


def integrate_semi_infinite(
    f: Integrand | Callable,
    policy: TailPolicy | None = None,
    opts: QuadOptions | None = None,
) -> QuadratureResult:
    """Sum ``integrate(f, [p b, (p+1) b])`` over ``p = 0, 1, ...`` until the tail is small.

    The error estimate is the magnitude of the last block plus the inner
    estimates.  ``converged`` requires the tail rule to fire and every block
    to converge.  Conditionally convergent integrands such as ``sin(x)/x``
    usually exhaust ``max_blocks`` and come back with ``converged=False``.
    """
    f = as_integrand(f)
    policy = policy or TailPolicy()
    b = policy.block_width
    blocks: list[float] = []
    inner_err = 0.0
    evals = 0
    levels = 0
    all_converged = True
    small = 0

    def partial(termination: Termination, converged: bool) -> QuadratureResult:
        return QuadratureResult(
            value=math.fsum(blocks),
            error_estimate=(abs(blocks[-1]) if blocks else 0.0) + inner_err,
            levels_used=levels,
            eval_count=evals,
            converged=converged,
            termination=termination,
            width=b,
        )

    blocks_iter = iter_blocks(f, b, opts)
    for _ in range(policy.max_blocks):
        try:
            block = next(blocks_iter)
        except NonFiniteSampleError as exc:
            exc.result = partial(Termination.NON_FINITE_SAMPLE, False)
            raise
        blocks.append(block.value)
        inner_err += block.error_estimate
        evals += block.eval_count
        levels = max(levels, block.levels_used)
        all_converged = all_converged and block.converged
        small = small + 1 if abs(block.value) <= policy.tail_tol else 0
        if small >= policy.consecutive_small:
            return partial(
                Termination.TOLERANCE_MET if all_converged else Termination.LEVEL_CAP,
                all_converged,
            )
    return partial(Termination.LEVEL_CAP, False)
