"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 analysis failure, 4 solver failure.
Every ``-o`` option accepts ``-`` for standard output.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import os
import sys
from typing import Iterator, List, Optional, TextIO

import numpy as np

from . import __version__
from .coefficients import INF, Family, coefficient_set, write_coefficients_csv, write_magnitude_csv
from .exceptions import AnalysisError, InvalidSpecError, SolverError, UnsupportedLimitError
from .stability import (
    DEFAULT_TRUNCATION,
    TimeIntegrator,
    critical_json,
    critical_lambda,
    stability_region,
    table_sweep,
    write_region_csv,
)
from .stencils import SchemeSpec, build_stencil, build_stencil_truncated, parse_scheme, write_stencil_csv
from .symbols import sigma, write_sigma_csv
from .transport import (
    AdvectConfig,
    advect,
    ghost_experiment,
    ghost_json,
    write_energy_csv,
    write_snapshots_csv,
)

EXIT_OK, EXIT_INVALID, EXIT_ANALYSIS, EXIT_SOLVER = 0, 2, 3, 4


# ---------------------------------------------------------------------------
# argument types

def _order(text: str):
    if text.lower() in ("inf", "infinity", "∞"):
        return INF
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"order must be a positive integer or 'inf', got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("order must be positive")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _positive_float(text: str) -> float:
    v = _float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("expected a positive number")
    return v


def _float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError("expected a finite number")
    return v


def _rk(text: str) -> int:
    v = _positive_int(text)
    if v > 7:
        raise argparse.ArgumentTypeError("integrator order must be in 1..7")
    return v


@contextlib.contextmanager
def _output(path: Optional[str]) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _family(args) -> Family:
    return Family.parse(args.family, staggered=getattr(args, "staggered", False))


# ---------------------------------------------------------------------------
# subcommands

def cmd_coeffs(args) -> int:
    fam = _family(args)
    if args.magnitude:
        if args.order == INF:
            raise InvalidSpecError("--magnitude needs a finite maximum order")
        with _output(args.output) as fh:
            write_magnitude_csv(fh, fam, args.order)
        return EXIT_OK
    cset = coefficient_set(fam, args.order)
    if cset.infinite:
        if args.terms is None:
            raise InvalidSpecError("infinite order needs --terms")
        vals = cset.take(args.terms)
        with _output(args.output) as fh:
            fh.write("family,order,j,numerator,denominator,float64\n")
            for j, v in enumerate(vals, start=1):
                exact = args.exact and not isinstance(v, float)
                num, den = (v.numerator, v.denominator) if exact else ("", "")
                fh.write(f"{fam.value},inf,{j},{num},{den},{float(v)!r}\n")
        return EXIT_OK
    method = args.float_method
    if method is not None and not fam.centred:
        raise InvalidSpecError("--float-method applies to the centred families only")
    with _output(args.output) as fh:
        write_coefficients_csv(fh, cset, exact=args.exact, float_method=method)
    return EXIT_OK


def cmd_stencil(args) -> int:
    spec = SchemeSpec(_family(args), args.order, args.derivative)
    if spec.infinite:
        if args.terms is None:
            raise InvalidSpecError("infinite order needs --terms")
        st = build_stencil_truncated(spec, args.terms)
    else:
        st = build_stencil(spec)
    with _output(args.output) as fh:
        write_stencil_csv(fh, st)
    return EXIT_OK


def cmd_sigma(args) -> int:
    spec = SchemeSpec(_family(args), args.order)
    kappa = np.linspace(-1.0, 1.0, args.samples) if args.samples > 1 else np.array([0.0])
    values = sigma(kappa, spec, terms=args.trunc)
    with _output(args.output) as fh:
        write_sigma_csv(fh, spec, kappa, values)
    return EXIT_OK


def cmd_stability(args) -> int:
    if args.action == "tables":
        return _stability_tables(args)
    if args.family is None or args.order is None:
        raise InvalidSpecError(f"stability {args.action} needs FAMILY and ORDER")
    spec = SchemeSpec(_family(args), args.order)
    trunc = args.trunc if spec.infinite else None
    p = args.rk[0]
    if args.action == "critical":
        value = critical_lambda(spec, p, tol=args.tol, truncation=trunc, lambda_cap=args.lambda_cap)
        with _output(args.output) as fh:
            fh.write(critical_json(spec, p, value, args.tol, trunc) + "\n")
        return EXIT_OK
    lo = args.lambda_min
    hi = args.lambda_max
    if not hi > lo:
        raise InvalidSpecError("--lambda-max must exceed --lambda-min")
    scan = stability_region(spec, p, (lo, hi), args.resolution, truncation=trunc)
    with _output(args.output) as fh:
        write_region_csv(fh, scan)
    return EXIT_OK


def _stability_tables(args) -> int:
    rks = args.rk
    sweep = table_sweep(rks, truncation=args.trunc, tol=args.tol)
    if len(rks) == 1:
        with _output(args.output) as fh:
            sweep.write_csv(fh, rks[0])
        return EXIT_OK
    if args.output in (None, "-"):
        for p in rks:
            sys.stdout.write(f"# {TimeIntegrator(p).name}\n")
            sweep.write_csv(sys.stdout, p)
        return EXIT_OK
    os.makedirs(args.output, exist_ok=True)
    for p in rks:
        with open(os.path.join(args.output, f"table_rk{p}.csv"), "w", newline="") as fh:
            sweep.write_csv(fh, p)
    return EXIT_OK


def cmd_advect(args) -> int:
    spec = parse_scheme(args.scheme)
    times = None
    if args.snapshot_times:
        times = [float(t) for t in args.snapshot_times]
    cfg = AdvectConfig(
        c=args.c,
        dx=args.dx,
        dt=args.dt,
        t_end=args.t_end,
        spec=spec,
        domain=(args.x_lo, args.x_hi),
        rk_order=args.rk,
        ic=args.ic,
        ic_width=args.ic_width,
        ic_center=args.ic_center,
        boundary=args.boundary,
        time_mode="implicit-euler" if args.implicit else "explicit",
        snapshot_times=times,
        truncation=args.trunc,
        seed=args.seed,
    )
    traj = advect(cfg)
    if args.snapshots_out is None and args.energy_out is None:
        args.energy_out = "-"
    if args.energy_out is not None:
        with _output(args.energy_out) as fh:
            write_energy_csv(fh, traj)
    if args.snapshots_out is not None:
        with _output(args.snapshots_out) as fh:
            write_snapshots_csv(fh, traj)
    return EXIT_OK


def cmd_ghost(args) -> int:
    res = ghost_experiment(args.scheme, points=args.points, lam=args.lam)
    with _output(args.output) as fh:
        fh.write(ghost_json(res) + "\n")
    if args.snapshots_out is not None:
        with _output(args.snapshots_out) as fh:
            write_snapshots_csv(fh, res.trajectory)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

_FAMILY_HELP = (
    "centred, centred-staggered, forward, backward, zigzag (= zigzag-forward-first), "
    "zigzag-backward-first, zigzag-staggered-forward-first, zigzag-staggered-backward-first"
)


def _add_scheme_args(p: argparse.ArgumentParser, optional: bool = False) -> None:
    nargs = "?" if optional else None
    p.add_argument("family", nargs=nargs, help=_FAMILY_HELP)
    p.add_argument("order", nargs=nargs, type=_order, help="formal order, or 'inf'")
    p.add_argument("--staggered", action="store_true", help="use the staggered sibling of FAMILY")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zigzagfd",
        description="Finite difference coefficients, symbols, stability numbers and advection runs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="coefficient table of one scheme (CSV)")
    _add_scheme_args(p)
    p.add_argument("--exact", action="store_true", help="fill the numerator/denominator columns")
    p.add_argument(
        "--float-method",
        choices=["direct", "gammaln", "log1p"],
        default=None,
        help="float path for centred families (default: rounded exact value)",
    )
    p.add_argument("--magnitude", action="store_true", help="|coefficient| for every order up to ORDER")
    p.add_argument("--terms", type=_positive_int, help="number of terms for ORDER=inf")
    p.add_argument("-o", "--output", default="-", help="output path, '-' for stdout")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("stencil", help="nodal stencil of one scheme (CSV)")
    _add_scheme_args(p)
    p.add_argument("--derivative", type=int, choices=[1, 2], default=1, help="derivative order")
    p.add_argument("--terms", type=_positive_int, help="number of terms for ORDER=inf")
    p.add_argument("-o", "--output", default="-", help="output path, '-' for stdout")
    p.set_defaults(func=cmd_stencil)

    p = sub.add_parser("sigma", help="sigma-factor sampled on [-1, 1] (CSV)")
    _add_scheme_args(p)
    p.add_argument("--samples", type=_positive_int, default=201, help="number of kappa samples")
    p.add_argument("--trunc", type=_positive_int, help="terms used for ORDER=inf without closed form")
    p.add_argument("-o", "--output", default="-", help="output path, '-' for stdout")
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("stability", help="critical stability number, region raster or full table")
    p.add_argument("action", choices=["critical", "region", "tables"], help="what to compute")
    _add_scheme_args(p, optional=True)
    p.add_argument("--rk", type=_rk, nargs="+", default=[3], help="integrator order(s), 1 = Euler")
    p.add_argument("--tol", type=_positive_float, default=1e-4, help="bisection tolerance on lambda")
    p.add_argument("--trunc", type=_positive_int, default=DEFAULT_TRUNCATION, help="order standing in for inf")
    p.add_argument("--lambda-cap", type=_positive_float, default=50.0,
                   help="critical: give up (exit 3) when no instability is found below this |lambda|")
    p.add_argument("--lambda-min", type=_float, default=-3.0, help="region: lower lambda")
    p.add_argument("--lambda-max", type=_float, default=3.0, help="region: upper lambda")
    p.add_argument("--resolution", type=_positive_int, default=256, help="grid points per axis (>= 64)")
    p.add_argument("-o", "--output", default="-", help="file, '-', or a directory for several --rk")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("advect", help="solve u_t + c u_x = 0")
    p.add_argument("--scheme", required=True, help="family:order, e.g. zigzag:2")
    p.add_argument("--rk", type=_rk, default=3, help="integrator order, 1 = Euler")
    p.add_argument("--c", type=_float, required=True, help="celerity")
    p.add_argument("--dx", type=_positive_float, required=True, help="grid spacing")
    p.add_argument("--dt", type=_positive_float, required=True, help="time step")
    p.add_argument("--t-end", type=_float, required=True, help="final time, a multiple of DT")
    p.add_argument("--x-lo", type=_float, default=-20.0, help="left end of the domain")
    p.add_argument("--x-hi", type=_float, default=20.0, help="right end of the domain")
    p.add_argument("--ic", choices=["erf", "gaussian", "bump", "random"], default="erf", help="initial condition")
    p.add_argument("--ic-width", type=_positive_float, help="width of the initial condition")
    p.add_argument("--ic-center", type=_float, help="centre of the initial condition")
    p.add_argument("--seed", type=int, default=0, help="seed of --ic random")
    p.add_argument("--boundary", choices=["periodic", "neumann"], default="periodic", help="boundary treatment")
    p.add_argument("--implicit", action="store_true", help="implicit Euler instead of explicit RK")
    p.add_argument("--trunc", type=_positive_int, help="terms for an infinite-order scheme")
    p.add_argument("--snapshot-times", type=_float, nargs="+", help="times to record, multiples of DT")
    p.add_argument("--energy-out", help="energy CSV (t,E)")
    p.add_argument("--snapshots-out", help="snapshot CSV (t,x,u)")
    p.set_defaults(func=cmd_advect)

    p = sub.add_parser("ghost", help="outflow test with Neumann boundaries and implicit Euler")
    p.add_argument("--scheme", default="zigzag-backward-first:2", help="family:order")
    p.add_argument("--points", type=_positive_int, default=1000, help="grid points on [0, 1]")
    p.add_argument("--lam", type=_positive_float, default=0.1, help="c dt / dx")
    p.add_argument("-o", "--output", default="-", help="metric JSON")
    p.add_argument("--snapshots-out", help="snapshot CSV (t,x,u)")
    p.set_defaults(func=cmd_ghost)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidSpecError, UnsupportedLimitError, ValueError) as exc:
        print(f"zigzagfd: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except AnalysisError as exc:
        print(f"zigzagfd: analysis failure: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except SolverError as exc:
        print(f"zigzagfd: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except BrokenPipeError:
        # downstream reader closed early, e.g. `| head`
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    sys.exit(main())
