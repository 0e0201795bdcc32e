"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line through the ``criterion`` fixture; the
lines are printed in an "acceptance criteria" section at the end of the run.
Tolerances are the stated ones and are not loosened here.
"""

import math
import time

import numpy as np
from hypothesis import HealthCheck, assume, given, settings

from conftest import poly_integrand, random_polynomials
from exhaustion.bench import bench_matched_evals, default_suite
from exhaustion.core import Integrand, QuadOptions, RefinementState, convergence_report, refine
from exhaustion.diffraction import (
    FieldPoint,
    WaveParams,
    field_exhaustion,
    field_reference,
    helmholtz_residual,
    rect_aperture,
    unit_aperture,
)
from exhaustion.expr import eval_ast, parse, to_text
from exhaustion.improper import TailPolicy, integrate_semi_infinite
from exhaustion.oracles import adaptive_simpson
from exhaustion.series import eval_series, sinc_product, sinc_sum
from test_expr import asts, depth
from test_series import si_power_series


def incremental_partials(f, interval, levels):
    state = RefinementState.start(interval)
    out = []
    for _ in range(levels):
        state = refine(state, f)
        out.append(state.partial)
    return out


def literal_partials(poly, a, b, levels):
    """Partial sums of the signed double sum, each level summed from scratch."""
    terms = []
    out = []
    for n in range(1, levels + 1):
        m = np.arange(1, 2**n)
        signs = np.where(m % 2 == 1, 1.0, -1.0)
        terms.extend((signs * poly(a + m * (b - a) / 2**n) * 2.0**-n).tolist())
        out.append((b - a) * math.fsum(terms))
    return out


def test_c1_incremental_equals_literal(criterion):
    start = time.perf_counter()
    worst = 0.0
    for poly, a, b in random_polynomials(seed=2024, count=50):
        fast = incremental_partials(poly_integrand(poly), (a, b), 12)
        slow = literal_partials(poly, a, b, 12)
        for x, y in zip(fast, slow):
            worst = max(worst, abs(x - y) / max(abs(y), 1e-300))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 5.0
    criterion("1 incremental == literal, 50 polys, N<=12", ok, f"max rel {worst:.2e}, {elapsed:.2f}s")
    assert ok


def test_c2_exact_partial_sums(criterion):
    ident = incremental_partials(Integrand(lambda x: x, vectorized=True), (0.0, 1.0), 20)
    const = incremental_partials(Integrand(lambda x: np.ones_like(x), vectorized=True), (0.0, 1.0), 20)
    worst = max(
        max(abs(s - (1 - 2.0**-n) / 2) for n, s in enumerate(ident, 1)),
        max(abs(s - (1 - 2.0**-n)) for n, s in enumerate(const, 1)),
    )
    ok = worst <= 1e-14
    criterion("2 closed-form partial sums, N<=20", ok, f"max abs {worst:.2e}")
    assert ok


def test_c3_geometric_convergence(criterion):
    start = time.perf_counter()
    exp_rows = convergence_report(Integrand(np.exp, vectorized=True), (0.0, 1.0), 14, exact=math.e - 1)
    cancel_rows = convergence_report(Integrand(lambda x: x - x * x, vectorized=True), (0.0, 1.0), 14, exact=1 / 6)
    exp_ratios = [r.error_ratio for r in exp_rows if 8 <= r.n <= 14]
    cancel_ratios = [r.error_ratio for r in cancel_rows if 8 <= r.n <= 14]
    elapsed = time.perf_counter() - start
    ok = (
        all(0.45 <= q <= 0.55 for q in exp_ratios)
        and all(0.20 <= q <= 0.30 for q in cancel_ratios)
        and elapsed < 10.0
    )
    detail = (
        f"exp in [{min(exp_ratios):.4f}, {max(exp_ratios):.4f}], "
        f"x-x^2 in [{min(cancel_ratios):.4f}, {max(cancel_ratios):.4f}], {elapsed:.2f}s"
    )
    criterion("3 error ratios 1/2 and 1/4, N in [8,14]", ok, detail)
    assert ok


def test_c4_series_catalog(criterion):
    start = time.perf_counter()
    cases = [
        ("SIN(1)", "sin", 1.0, math.sin(1.0), 1e-5),
        ("COS(1)", "cos", 1.0, math.cos(1.0), 1e-5),
        ("LN(2)", "ln", 2.0, math.log(2.0), 1e-5),
        ("SINE_INTEGRAL(1,1)", "sine_integral", (1.0, 1.0), si_power_series(1.0), 1e-5),
        ("GAUSSIAN(1,2)", "gaussian", (1.0, 2.0), math.sqrt(math.pi) / 2 * math.erf(2.0), 1e-5),
        ("FACTORIAL(3)", "factorial", 3.0, 6.0, 1e-2),
    ]
    errors = {}
    ok = True
    for name, sid, params, expected, tol in cases:
        errors[name] = abs(eval_series(sid, params, 20) - expected)
        ok = ok and errors[name] <= tol
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 30.0
    detail = ", ".join(f"{k} {v:.1e}" for k, v in errors.items()) + f", {elapsed:.2f}s"
    criterion("4 series catalog at N=20", ok, detail)
    assert ok


def test_c5_proof_chain(criterion):
    rng = np.random.default_rng(7)
    worst = max(abs(sinc_product(a, 40) - sinc_sum(a, 20)) for a in rng.uniform(-10, 10, 100))
    ok = worst <= 1e-4
    criterion("5 product vs double-sum sinc, 100 random a", ok, f"max {worst:.2e}")
    assert ok


def test_c6_improper(criterion):
    # first-order convergence: 1e-6 needs about 21 levels per block, 1e-8 about 27
    policy = TailPolicy(block_width=1.0, tail_tol=1e-10)
    exp_r = integrate_semi_infinite(Integrand(lambda x: np.exp(-x), vectorized=True), policy, QuadOptions.forced(21))
    gauss_r = integrate_semi_infinite(Integrand(lambda x: np.exp(-x * x), vectorized=True), policy, QuadOptions.forced(27))
    exp_err = abs(exp_r.value - 1.0)
    gauss_err = abs(gauss_r.value - math.sqrt(math.pi) / 2)
    oracle = adaptive_simpson(lambda x: math.exp(-x), 0.0, 40.0, tol=1e-12)
    ok = exp_err <= 1e-6 and gauss_err <= 1e-8 and abs(oracle - 1.0) <= 1e-9
    criterion("6 improper e^-x and e^-x^2", ok, f"errors {exp_err:.1e}, {gauss_err:.1e}")
    assert ok


def test_c7a_unit_aperture_origin(criterion):
    value = field_exhaustion(unit_aperture(), FieldPoint(0, 0, 0), WaveParams.from_k(1.0), 10)
    err = abs(value - 2 / math.pi)
    ok = err <= 1e-3
    criterion("7a F=1 at origin -> 2/pi, N=P=10", ok, f"error {err:.3e} (closed form (2/pi)(1-2^-10)^2)")
    assert ok


def far_points(count, seed=0):
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(count):
        z = float(rng.uniform(20, 40))
        x, y = rng.uniform(-z / 2, z / 2, 2)
        pts.append(FieldPoint(float(x), float(y), z))
    return pts


def test_c7b_far_field_oracle(criterion):
    wave = WaveParams.from_k(1.0)
    start = time.perf_counter()
    worst = {}
    for name, ap in [("unit", unit_aperture()), ("rect", rect_aperture(2.0, 2.0))]:
        errs = []
        for pt in far_points(10):
            r = field_reference(ap, pt, wave, 512)
            errs.append(abs(field_exhaustion(ap, pt, wave, 8) - r) / abs(r))
        worst[name] = max(errs)
    elapsed = time.perf_counter() - start
    ok = max(worst.values()) <= 0.01 and elapsed < 60.0
    detail = ", ".join(f"{k} max rel {v:.2%}" for k, v in worst.items()) + f", {elapsed:.1f}s"
    criterion("7b far-field vs direct quadrature, N=P=8, grid 512", ok, detail)
    assert ok


def test_c7c_helmholtz_residual(criterion):
    wave = WaveParams.from_k(1.0)
    ap = unit_aperture()
    rng = np.random.default_rng(3)
    points = [FieldPoint(float(x), float(y), float(z)) for x, y, z in zip(
        rng.uniform(-3, 3, 5), rng.uniform(-3, 3, 5), rng.uniform(1, 15, 5))]
    field = lambda p: field_exhaustion(ap, p, wave, 8)
    worst = max(helmholtz_residual(field, p, wave.k) for p in points)
    ok = worst <= 1e-3
    criterion("7c Helmholtz residual at 5 random points", ok, f"max {worst:.2e}")
    assert ok


def test_c8_bench_decay(criterion):
    worst_ratio = (1.0, 0.0)
    monotone = True
    for case in default_suite():
        rows = bench_matched_evals(case.f, case.interval, case.exact, methods=["exhaustion"])
        errs = [r.abs_error for r in rows if r.level >= 8]
        monotone = monotone and all(b < a for a, b in zip(errs, errs[1:]))
        ratios = [b / a for a, b in zip(errs, errs[1:])]
        worst_ratio = (min(worst_ratio[0], *ratios), max(worst_ratio[1], *ratios))
    ok = monotone and 0.4 <= worst_ratio[0] and worst_ratio[1] <= 0.6
    criterion("8 bench exhaustion decay, N>=8", ok, f"ratios in [{worst_ratio[0]:.4f}, {worst_ratio[1]:.4f}]")
    assert ok


def test_c9_parser(criterion):
    goldens = {"2+3*4^2": 50.0, "2^3^2": 512.0, "-2^2": -4.0}
    golden_ok = all(eval_ast(parse(t), 0.0) == v for t, v in goldens.items())

    @settings(max_examples=300, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
    @given(asts())
    def round_trip(ast):
        assume(depth(ast) <= 6)
        assert parse(to_text(ast)) == ast

    try:
        round_trip()
        trip_ok = True
    except AssertionError:
        trip_ok = False
    ok = golden_ok and trip_ok
    criterion("9 parser goldens and round trip", ok, f"goldens {golden_ok}, round trip {trip_ok}")
    assert ok
