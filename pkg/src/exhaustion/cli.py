"""Command-line entry point: ``exhaustion <subcommand> ...``.

Exit codes: 0 converged, 2 estimate returned without convergence, 3 bad
input (including expression syntax errors), 4 non-finite integrand sample.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bench import BENCH_HEADER, default_suite, poly_suite, run_suite
from .core import NonFiniteSampleError, QuadOptions, integrate
from .diffraction import (
    FieldPoint,
    WaveParams,
    field_exhaustion,
    group_velocity_spectrum,
    rect_aperture,
    unit_aperture,
)
from .expr import ExprError, integrand_from_text
from .improper import TailPolicy, integrate_semi_infinite
from .report import dump_json, emit_report, write_csv
from .series import SeriesId, eval_series

log = logging.getLogger("exhaustion")

EXIT_OK, EXIT_NOT_CONVERGED, EXIT_INPUT, EXIT_NON_FINITE = 0, 2, 3, 4

GRAMMAR = """\
expression grammar (--fn):
  numbers (2, 0.5, 1e-3), the variable x, constants pi and e
  functions sin cos tan exp ln sqrt abs, one argument each
  operators + - * / ^ and unary minus; ^ is right-associative and binds
  tighter than unary minus, so -2^2 = -4 and 2^3^2 = 512
  1/0 and ln of non-positive values are non-finite and stop the run (exit 4)

environment:
  EXH_THREADS  threads for node evaluation (0 = serial, the default)
"""

FIELD_HEADER = ("x", "y", "z", "re_phi", "im_phi", "abs_phi")
SPECTRUM_HEADER = ("n", "m", "p", "q", "kx", "ky", "weight", "kz", "group_speed_z", "evanescent")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    fn_text: str | None = None
    bounds: tuple[float, float] | None = None
    tol: float = 1e-10
    max_level: int = 24
    output_format: str = "json"
    seed: int = 0


def _add_quad_flags(p: argparse.ArgumentParser, default_format: str = "json") -> None:
    p.add_argument("--tol", type=float, default=1e-10, help="relative stopping tolerance (default 1e-10)")
    p.add_argument("--max-level", type=int, default=24, help="level cap, 2^N - 1 nodes (default 24)")
    p.add_argument("--min-level", type=int, default=4, help="never stop before this level (default 4)")
    p.add_argument("--format", choices=("json", "csv"), default=default_format)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exhaustion",
        description="Dyadic exhaustion quadrature, series catalog and aperture diffraction.",
        epilog=GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized corpora")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("integrate", help="definite integral over [a, b]", epilog=GRAMMAR,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--fn", required=True, help="integrand in x")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    _add_quad_flags(p)

    p = sub.add_parser("improper", help="integral over [0, inf) by blocks", epilog=GRAMMAR,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--fn", required=True, help="integrand in x")
    p.add_argument("--block", type=float, default=1.0, help="block width (default 1)")
    p.add_argument("--tail-tol", type=float, default=1e-10)
    p.add_argument("--max-blocks", type=int, default=10_000)
    p.add_argument("--consecutive-small", type=int, default=2)
    _add_quad_flags(p)

    p = sub.add_parser("series", help="evaluate a catalog series")
    p.add_argument("--id", required=True, choices=[s.value for s in SeriesId], type=str.lower)
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--x", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--p", type=float)

    p = sub.add_parser("diffract", help="field slice and plane-wave spectrum behind an aperture")
    p.add_argument("--aperture", choices=("unit", "rect"), default="unit")
    p.add_argument("--wx", type=float, default=1.0)
    p.add_argument("--wy", type=float, default=1.0)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--c", type=float, default=1.0, help="phase speed (omega0 = k c)")
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--slice", default="z=20", help="plane of the slice, e.g. z=20")
    p.add_argument("--extent", type=float, default=10.0, help="slice covers [-extent, extent]^2")
    p.add_argument("--samples", type=int, default=11, help="samples per axis")
    p.add_argument("--levels", type=int, default=8)
    p.add_argument("--evanescent", choices=("decay", "zero"), default="decay")
    p.add_argument("--spectrum-out", help="also write the plane-wave spectrum CSV here")
    p.add_argument("--spectrum-levels", type=int, default=4)

    p = sub.add_parser("bench", help="matched-evaluation comparison table")
    p.add_argument("--suite", choices=("default", "poly"), default="default")
    p.add_argument("--min-level", type=int, default=4)
    p.add_argument("--max-level", type=int, default=18)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    return parser


def _quad_opts(args: argparse.Namespace) -> QuadOptions:
    return QuadOptions(tol=args.tol, max_level=args.max_level, min_level=min(args.min_level, args.max_level))


def _finish(result, args, out) -> int:
    out.write(emit_report(result, args.format))
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def _cmd_integrate(args, out) -> int:
    f = integrand_from_text(args.fn)
    return _finish(integrate(f, (args.a, args.b), _quad_opts(args)), args, out)


def _cmd_improper(args, out) -> int:
    f = integrand_from_text(args.fn)
    policy = TailPolicy(args.block, args.tail_tol, args.max_blocks, args.consecutive_small)
    return _finish(integrate_semi_infinite(f, policy, _quad_opts(args)), args, out)


def _cmd_series(args, out) -> int:
    sid = SeriesId.parse(args.id)
    if sid in (SeriesId.SINE_INTEGRAL, SeriesId.GAUSSIAN):
        names = ("a", "b")
    elif sid is SeriesId.FACTORIAL:
        names = ("p",)
    elif sid in (SeriesId.SINC_SUM, SeriesId.SINC_PRODUCT):
        names = ("a", "b") if args.b is not None and sid is SeriesId.SINC_SUM else ("a",)
    else:
        names = ("x",)
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ValueError(f"series {sid.value} needs --{' --'.join(missing)}")
    params = [getattr(args, n) for n in names]
    value = eval_series(sid, params, args.levels)
    out.write(dump_json({"id": sid.value, "params": dict(zip(names, params)), "levels": args.levels, "value": value}) + "\n")
    return EXIT_OK


def _cmd_diffract(args, out) -> int:
    axis, _, val = args.slice.partition("=")
    if axis.strip() != "z" or not val:
        raise ValueError("--slice must look like z=<value>")
    z = float(val)
    if args.samples < 1:
        raise ValueError("--samples must be positive")
    wave = WaveParams.from_k(args.k, args.c)
    ap = unit_aperture() if args.aperture == "unit" else rect_aperture(args.wx, args.wy)
    coords = np.linspace(-args.extent, args.extent, args.samples)
    rows = []
    for x in coords.tolist():
        for y in coords.tolist():
            phi = field_exhaustion(ap, FieldPoint(x, y, z, args.t), wave, args.levels, args.evanescent)
            rows.append((x, y, z, phi.real, phi.imag, abs(phi)))
    out.write(write_csv(FIELD_HEADER, rows))
    if args.spectrum_out:
        comps = group_velocity_spectrum(ap, wave, args.spectrum_levels)
        with open(args.spectrum_out, "w", encoding="utf-8") as fh:
            fh.write(write_csv(SPECTRUM_HEADER, (
                (c.n, c.m, c.p, c.q, c.kx, c.ky, c.weight, c.kz, c.group_speed_z, "true" if c.evanescent else "false")
                for c in comps
            )))
    return EXIT_OK


def _cmd_bench(args, out) -> int:
    cases = default_suite() if args.suite == "default" else poly_suite(args.seed)
    rows = run_suite(cases, levels=range(args.min_level, args.max_level + 1))
    if args.format == "csv":
        out.write(write_csv(BENCH_HEADER, ((r.function, r.method, r.level, r.eval_count, r.abs_error) for r in rows)))
    else:
        out.write(dump_json([dict(zip(BENCH_HEADER, (r.function, r.method, r.level, r.eval_count, r.abs_error))) for r in rows]) + "\n")
    return EXIT_OK


COMMANDS = {
    "integrate": _cmd_integrate,
    "improper": _cmd_improper,
    "series": _cmd_series,
    "diffract": _cmd_diffract,
    "bench": _cmd_bench,
}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.subcommand](args, out)
    except NonFiniteSampleError as exc:
        log.error("%s", exc)
        if exc.result is not None and hasattr(args, "format"):
            out.write(emit_report(exc.result, args.format))
        return EXIT_NON_FINITE
    except (ExprError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
