"""Command line: ``normedminimal {gen,check,verify}``.

Coefficient files are JSON objects::

    {"case": "trig", "b": 1.0, "p": [1, 1, 1], "q": [0, 1.41, 1.41], "r": [-2, 1.41, 1.41]}

``b`` may be omitted for ``"poly"``.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import homothetical as homo
from . import separable as sep
from . import translation as trans
from .curvature import DEFAULT_STEP
from .errors import SurfaceError
from .generate import EmptyDomain, generate_homothetical, generate_separable, generate_translation
from .mesh import write_mesh, write_report
from .verification import TIERS, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_EMPTY, EXIT_IO = 0, 1, 2, 3, 4
CHECK_TOL = 1e-10
CHECK_GRID = 401


class UsageError(Exception):
    pass


def load_coefficients(path) -> sep.CoefficientSet:
    """Parse a coefficient file; every failure surfaces as :class:`UsageError`."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read coefficient file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("coefficient file must hold a JSON object")
    unknown = set(data) - {"case", "b", "p", "q", "r"}
    if unknown:
        raise UsageError(f"unknown fields {sorted(unknown)}")
    try:
        return sep.CoefficientSet(data["case"], data["p"], data["q"], data["r"], data.get("b"))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"invalid coefficient set: {exc!r}") from exc


def default_windows(coeffs: sep.CoefficientSet):
    if coeffs.case == "trig":
        half = math.pi / coeffs.b
        return (-half, half), (-half, half)
    return (-10.0, 10.0), (-10.0, 10.0)


def _windows(values, fallback):
    if values is None:
        return fallback
    if len(values) == 2:
        return tuple(values), tuple(values)
    if len(values) == 4:
        return tuple(values[:2]), tuple(values[2:])
    raise UsageError("--window takes 2 numbers (lo hi) or 4 (ulo uhi vlo vhi)")


def _resolve_coefficients(args):
    if (args.preset is None) == (args.coeffs is None):
        raise UsageError("separable needs exactly one of --preset or --coeffs")
    if args.preset is not None:
        return sep.PRESETS[args.preset], sep.PRESET_WINDOWS[args.preset]
    coeffs = load_coefficients(args.coeffs)
    return coeffs, default_windows(coeffs)


def _generate(args):
    common = {"oracle": args.oracle, "step": args.step}
    if args.family == "translation":
        spec = trans.TranslationSpec(args.m, args.a)
        fraction = 1.0 - trans.DEFAULT_CLIP if args.fraction is None else args.fraction
        return generate_translation(spec, args.grid, fraction, **common)
    if args.family == "homothetical":
        spec = homo.HomotheticalSpec(args.m, args.a, args.b, args.c2, args.swapped)
        window = (-1.0, 1.0) if args.window is None else args.window
        if len(window) != 2:
            raise UsageError("--window takes 2 numbers for the homothetical family")
        fraction = 1.0 - homo.DEFAULT_CLIP if args.fraction is None else args.fraction
        return generate_homothetical(spec, args.grid, tuple(window), fraction, **common)
    coeffs, fallback = _resolve_coefficients(args)
    u_window, v_window = _windows(args.window, fallback)
    anchor = None if args.anchor is None else tuple(args.anchor)
    return generate_separable(coeffs, args.m, args.grid, u_window, v_window, anchor,
                              tuple(args.signs), **common)


def _validate_gen(args):
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    if not (args.step > 0 and math.isfinite(args.step)):
        raise UsageError("--step must be positive")
    if args.fraction is not None and not 0 < args.fraction < 1:
        raise UsageError("--fraction must lie in (0, 1)")
    if any(s not in (-1, 1) for s in args.signs):
        raise UsageError("--signs entries must be +1 or -1")
    for path in args.out_mesh or []:
        if Path(path).suffix.lower() not in (".obj", ".csv"):
            raise UsageError(f"mesh path {path} must end in .obj or .csv")


def _write_outputs(args, mesh, report):
    try:
        for path in args.out_mesh or []:
            write_mesh(mesh, path)
        if args.out_report:
            write_report(report, args.out_report)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return False
    return True


def cmd_gen(args) -> int:
    try:
        _validate_gen(args)
        mesh, report = _generate(args)
    except EmptyDomain as exc:
        print(exc.args[0], file=sys.stderr)
        if args.out_report:
            try:
                write_report(exc.args[1], args.out_report)
            except OSError as io:
                print(f"error: cannot write output: {io}", file=sys.stderr)
                return EXIT_IO
        return EXIT_EMPTY
    except (UsageError, ValueError, SurfaceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if not _write_outputs(args, mesh, report):
        return EXIT_IO
    worst = report["max_abs_H_analytic"]
    print(f"{report['family']} m={report['m']}: {len(mesh.vertices)} vertices, "
          f"{len(mesh.faces)} faces, skipped {report['skipped_vertices']}")
    print(f"max |H| analytic = {worst}")
    if report["max_abs_H_numeric"] is not None:
        print(f"max |H| numeric  = {report['max_abs_H_numeric']}")
    return EXIT_OK if worst is not None and worst < args.h_threshold else EXIT_FAIL


def cmd_check(args) -> int:
    try:
        coeffs = load_coefficients(args.file)
        u_window, v_window = _windows(args.window, default_windows(coeffs))
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    residuals = sep.check_constraints(coeffs)
    for i, r in enumerate(residuals, 1):
        print(f"residual[{i}] = {r:.3e}")
    ok = bool(np.all(np.abs(residuals) < CHECK_TOL))
    print("constraints: " + ("satisfied" if ok else "violated"))
    if not ok:
        return EXIT_FAIL
    pts = sep.positivity_domain(sep.build_xyz(coeffs), u_window, v_window, CHECK_GRID)
    if len(pts) == 0:
        print(f"positivity domain empty on u in {list(u_window)}, v in {list(v_window)}")
        return EXIT_FAIL
    print(f"positivity domain non-empty ({len(pts)} of {CHECK_GRID ** 2} samples)")
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_suite(args.tier, fault=args.inject_fault)
    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL'}  {r.seconds:7.2f}s  {r.detail}")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="normedminimal",
                                     description="Minimal surfaces in the 2m-norm.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="sample a surface family into a mesh")
    gen.add_argument("family", choices=("translation", "homothetical", "separable"))
    gen.add_argument("--m", type=int, default=2)
    gen.add_argument("--a", type=float, default=1.0)
    gen.add_argument("--b", type=float, default=0.0)
    gen.add_argument("--c2", type=float, default=1.0)
    gen.add_argument("--grid", type=int, default=50)
    gen.add_argument("--window", type=float, nargs="+", metavar="X",
                     help="parameter window: 2 numbers, or 4 for separable (u and v)")
    gen.add_argument("--fraction", type=float, default=None,
                     help="share of the maximal parameter range to sample")
    gen.add_argument("--swapped", action="store_true",
                     help="homothetical: put the linear factor on v")
    gen.add_argument("--preset", choices=sorted(sep.PRESETS))
    gen.add_argument("--coeffs", help="separable coefficient JSON file")
    gen.add_argument("--anchor", type=float, nargs=2, metavar=("U0", "V0"))
    gen.add_argument("--signs", type=int, nargs=3, default=[1, 1, 1])
    gen.add_argument("--out-mesh", action="append", metavar="PATH",
                     help=".obj or .csv; repeatable")
    gen.add_argument("--out-report", metavar="PATH")
    gen.add_argument("--h-threshold", type=float, default=1e-7)
    gen.add_argument("--oracle", action="store_true", help="also compute numeric H")
    gen.add_argument("--step", type=float, default=DEFAULT_STEP)
    gen.set_defaults(func=cmd_gen)

    check = sub.add_parser("check", help="check a separable coefficient file")
    check.add_argument("file")
    check.add_argument("--window", type=float, nargs="+", metavar="X")
    check.set_defaults(func=cmd_check)

    verify = sub.add_parser("verify", help="run the self-check suite")
    verify.add_argument("tier", choices=TIERS, nargs="?", default="fast")
    verify.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
