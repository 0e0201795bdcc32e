import math

import numpy as np
import pytest

from exhaustion.core import Integrand

_criteria: list[tuple[str, bool, str]] = []


def literal_exhaustion(f, a, b, levels):
    """Signed double sum written out term by term, independent of the library."""
    terms = []
    for n in range(1, levels + 1):
        for m in range(1, 2**n):
            terms.append((-1) ** (m + 1) * 2.0**-n * f(a + m * (b - a) / 2**n))
    return (b - a) * math.fsum(terms)


def random_polynomials(seed, count, max_degree=6):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        degree = int(rng.integers(0, max_degree + 1))
        coeffs = rng.uniform(-1, 1, degree + 1)
        a = float(rng.uniform(-3, 3))
        b = a + float(rng.uniform(0.1, 4))
        out.append((np.polynomial.Polynomial(coeffs), a, b))
    return out


def poly_integrand(poly):
    return Integrand(poly, label="poly", vectorized=True)


class CountingIntegrand:
    def __init__(self, fn):
        self.fn = fn
        self.calls = 0

    def __call__(self, x):
        self.calls += 1
        return self.fn(x)


@pytest.fixture
def criterion():
    """Record one acceptance line; printed in the terminal summary."""

    def record(name, ok, detail=""):
        _criteria.append((name, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _criteria:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
