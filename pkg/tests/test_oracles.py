import math

import pytest

from exhaustion.oracles import OracleError, adaptive_simpson


def test_exact_on_quadratics():
    assert adaptive_simpson(lambda x: x * x, 0.0, 1.0) == 1 / 3


def test_exponential():
    assert abs(adaptive_simpson(math.exp, 0.0, 1.0, tol=1e-10) - (math.e - 1)) <= 1e-10


def test_sine():
    assert abs(adaptive_simpson(math.sin, 0.0, math.pi, tol=1e-10) - 2.0) <= 1e-10


def test_orientation_and_degenerate():
    assert adaptive_simpson(math.exp, 1.0, 0.0, tol=1e-10) == -adaptive_simpson(math.exp, 0.0, 1.0, tol=1e-10)
    assert adaptive_simpson(math.exp, 2.0, 2.0) == 0.0


def test_depth_cap():
    with pytest.raises(OracleError):
        adaptive_simpson(lambda x: math.sin(1 / x) if x else 0.0, 0.0, 1.0, tol=1e-14, max_depth=8)


def test_non_finite_integrand():
    with pytest.raises(OracleError):
        adaptive_simpson(lambda x: 1 / (x - 0.5) if x != 0.5 else math.inf, 0.0, 1.0)
