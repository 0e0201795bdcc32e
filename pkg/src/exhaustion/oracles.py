"""Reference integrators that share no code with the exhaustion engine."""

from __future__ import annotations

import math
from typing import Callable

__all__ = ["OracleError", "adaptive_simpson"]


class OracleError(RuntimeError):
    pass


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = 50,
) -> float:
    """Adaptive Simpson quadrature with Richardson correction.

    Raises :class:`OracleError` when a panel still fails the local test at
    ``max_depth`` or ``f`` returns a non-finite value.
    """
    if a == b:
        return 0.0
    if a > b:
        return -adaptive_simpson(f, b, a, tol, max_depth)

    def ev(x: float) -> float:
        y = float(f(x))
        if not math.isfinite(y):
            raise OracleError(f"non-finite integrand at x={x!r}")
        return y

    def simpson(fa: float, fm: float, fb: float, h: float) -> float:
        return h / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(lo, hi, flo, fmid, fhi, whole, eps, depth):
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = ev(lm), ev(rm)
        left = simpson(flo, flm, fmid, mid - lo)
        right = simpson(fmid, frm, fhi, hi - mid)
        delta = left + right - whole
        if abs(delta) <= 15.0 * eps:
            return left + right + delta / 15.0
        if depth >= max_depth:
            raise OracleError(f"adaptive Simpson hit depth {max_depth} near x={mid!r}")
        return recurse(lo, mid, flo, flm, fmid, left, eps / 2, depth + 1) + recurse(
            mid, hi, fmid, frm, fhi, right, eps / 2, depth + 1
        )

    fa, fm, fb = ev(a), ev(0.5 * (a + b)), ev(b)
    return recurse(a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, 0)
