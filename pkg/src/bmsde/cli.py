"""Command-line front end: thresholds, potential curves, saturation runs,
and density file utilities.  Emits CSV/JSON for external plotting."""

import argparse
import csv
import json
import sys

import numpy as np

from .channels import ChannelFamily, density_for_entropy, density_of
from .coupled_system import run_saturation
from .ensembles import from_edge_perspective
from .errors import (
    GridMismatch,
    InvalidArgument,
    InvalidMeasure,
    NoChannelSolution,
    Unsupported,
)
from .grid import DEFAULT_HALF_RANGE, DEFAULT_SPACING, GridSpec
from .measures import Density, delta_inf, entropy, moment_mk
from .single_system import bp_threshold, potential, potential_threshold

_USAGE_ERRORS = (
    InvalidArgument,
    InvalidMeasure,
    GridMismatch,
    NoChannelSolution,
    Unsupported,
    ValueError,
)


def parse_dd(text):
    """Parse "deg:coeff[,deg:coeff...]/deg:coeff[,...]" into a
    DegreeDistribution.  Degrees are node degrees; the edge-perspective
    exponent is degree-1."""
    parts = text.split("/")
    if len(parts) != 2:
        raise InvalidArgument(
            "degree distribution must be 'lambda-side/rho-side', got %r" % text
        )

    def side(chunk, name):
        coeffs = {}
        for pair in chunk.split(","):
            bits = pair.split(":")
            if len(bits) != 2:
                raise InvalidArgument("bad %s term %r" % (name, pair))
            try:
                deg, coeff = int(bits[0]), float(bits[1])
            except ValueError:
                raise InvalidArgument("bad %s term %r" % (name, pair)) from None
            if deg < 1:
                raise InvalidArgument("%s degree must be >= 1, got %d" % (name, deg))
            coeffs[deg - 1] = coeffs.get(deg - 1, 0.0) + coeff
        out = np.zeros(max(coeffs) + 1)
        for k, v in coeffs.items():
            out[k] = v
        return out

    return from_edge_perspective(side(parts[0], "lambda"), side(parts[1], "rho"))


def _grid(args):
    return GridSpec(spacing=args.grid_spacing, half_range=args.grid_range)


def _family(args, grid):
    return ChannelFamily(args.channel, grid)


def _dump_json(obj, stream):
    json.dump(obj, stream, indent=2)
    stream.write("\n")


def cmd_threshold(args):
    grid = _grid(args)
    family = _family(args, grid)
    dd = parse_dd(args.dd)
    if args.kind == "bp":
        tol = args.tol if args.tol is not None else 1e-4
        res = bp_threshold(family, dd, tol=tol)
    else:
        tol = args.tol if args.tol is not None else 1e-3
        res = potential_threshold(family, dd, tol=tol)
    _dump_json(
        {
            "kind": args.kind,
            "h_threshold": res.h_threshold,
            "bracket": list(res.bracket),
            "iterations": res.iterations,
        },
        sys.stdout,
    )
    return 0


def _probe_density(family, h):
    if h < 1e-9:
        return delta_inf(family.grid)
    return density_for_entropy(family, h)


def cmd_potential_curve(args):
    grid = _grid(args)
    family = _family(args, grid)
    dd = parse_dd(args.dd)
    if args.h_list:
        h_values = [float(t) for t in args.h_list.split(",")]
    elif args.h is not None:
        h_values = [args.h]
    else:
        raise InvalidArgument("potential-curve needs --h or --h-list")
    probe_family = ChannelFamily(args.probe_family, grid)
    probes = np.linspace(0.0, args.probe_max, args.probe_points)
    with open(args.out, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["h_channel", "h_x_probe", "U_value"])
        for h in h_values:
            c = density_for_entropy(family, h)
            for hp in probes:
                x = _probe_density(probe_family, float(hp))
                writer.writerow([repr(float(h)), repr(float(hp)),
                                 repr(potential(x, c, dd))])
    return 0


def cmd_sc_run(args):
    grid = _grid(args)
    family = _family(args, grid)
    dd = parse_dd(args.dd)
    if args.h is None:
        raise InvalidArgument("sc-run needs --h")
    run = run_saturation(
        family,
        dd,
        args.h,
        args.N,
        args.w,
        tol=args.tol if args.tol is not None else 1e-8,
        max_sweeps=args.max_sweeps,
        gamma=args.gamma,
    )
    trace_path = args.out + ".trace.csv"
    report_path = args.out + ".report.json"
    with open(trace_path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["sweep", "position", "entropy"])
        for sweep, entropies in enumerate(run.trace):
            for pos, value in enumerate(entropies, start=1):
                writer.writerow([sweep, pos, repr(value)])
    with open(report_path, "w") as handle:
        _dump_json(run.report, handle)
    print(
        "converged=%s sweeps=%d trace=%s report=%s"
        % (run.report["converged"], run.report["sweeps"], trace_path, report_path)
    )
    return 0


def cmd_density_tool(args):
    grid = _grid(args)
    if args.action == "make":
        if args.h is None:
            raise InvalidArgument("density-tool make needs --h")
        family = _family(args, grid)
        x = density_for_entropy(family, args.h)
        payload = json.loads(x.to_json())
        if args.out:
            with open(args.out, "w") as handle:
                _dump_json(payload, handle)
        else:
            _dump_json(payload, sys.stdout)
        return 0
    with open(args.path) as handle:
        x = Density.from_json(handle.read())
    _dump_json(
        {
            "spacing": x.grid.spacing,
            "half_range": x.grid.half_range,
            "total_mass": x.total_mass,
            "inf_mass": x.inf_mass,
            "entropy": entropy(x),
            "symmetry_residual": x.symmetry_residual(),
            "moments": {"m%d" % k: moment_mk(x, k) for k in (1, 2, 3)},
        },
        sys.stdout,
    )
    return 0


def _add_common(parser, channel_required=True):
    parser.add_argument(
        "--channel",
        choices=("bec", "bsc", "bawgnc"),
        required=channel_required,
        help="channel family; parameters are given as entropy values",
    )
    parser.add_argument(
        "--grid-spacing",
        type=float,
        default=DEFAULT_SPACING,
        help="LLR grid spacing (default %g)" % DEFAULT_SPACING,
    )
    parser.add_argument(
        "--grid-range",
        type=float,
        default=DEFAULT_HALF_RANGE,
        help="LLR grid half range (default %g)" % DEFAULT_HALF_RANGE,
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bmsde",
        description="Density evolution, potentials, and spatially coupled "
        "chains for LDPC ensembles over BMS channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("threshold", help="BP or potential threshold by bisection")
    p.add_argument("kind", choices=("bp", "potential"))
    _add_common(p)
    p.add_argument("--dd", required=True, help="degree distribution, e.g. 3:1.0/6:1.0")
    p.add_argument(
        "--tol",
        type=float,
        default=None,
        help="bisection tolerance on h (default 1e-4 bp, 1e-3 potential)",
    )
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser(
        "potential-curve",
        help="sweep U(x; c) over probe densities, one curve per channel entropy",
    )
    _add_common(p)
    p.add_argument("--dd", required=True, help="degree distribution, e.g. 3:1.0/6:1.0")
    p.add_argument("--h", type=float, default=None, help="single channel entropy")
    p.add_argument("--h-list", default=None, help="comma-separated channel entropies")
    p.add_argument(
        "--probe-family",
        choices=("bec", "bsc", "bawgnc"),
        default="bawgnc",
        help="family the x-probe densities are drawn from (default bawgnc)",
    )
    p.add_argument(
        "--probe-points",
        type=int,
        default=49,
        help="number of probe entropies from 0 to --probe-max (default 49)",
    )
    p.add_argument(
        "--probe-max",
        type=float,
        default=0.98,
        help="largest probe entropy (default 0.98)",
    )
    p.add_argument("--out", required=True, help="CSV output path")
    p.set_defaults(func=cmd_potential_curve)

    p = sub.add_parser(
        "sc-run", help="spatially coupled run: trace CSV plus report JSON"
    )
    _add_common(p)
    p.add_argument("--dd", required=True, help="degree distribution, e.g. 3:1.0/6:1.0")
    p.add_argument("--h", type=float, default=None, help="channel entropy")
    p.add_argument("--N", type=int, required=True, help="half chain length")
    p.add_argument("--w", type=int, required=True, help="coupling window")
    p.add_argument("--gamma", type=float, default=1.0, help="K constant scale")
    p.add_argument(
        "--tol", type=float, default=None, help="sweep convergence tolerance"
    )
    p.add_argument("--max-sweeps", type=int, default=5000)
    p.add_argument(
        "--out", required=True, help="output prefix for .trace.csv and .report.json"
    )
    p.set_defaults(func=cmd_sc_run)

    p = sub.add_parser("density-tool", help="serialize or inspect density files")
    tool_sub = p.add_subparsers(dest="action", required=True)
    mk = tool_sub.add_parser("make", help="write a channel density as JSON")
    _add_common(mk)
    mk.add_argument("--h", type=float, default=None, help="channel entropy")
    mk.add_argument("--out", default=None, help="output path (default stdout)")
    mk.set_defaults(func=cmd_density_tool)
    ins = tool_sub.add_parser("inspect", help="summarize a density JSON file")
    _add_common(ins, channel_required=False)
    ins.add_argument("path", help="density JSON file")
    ins.set_defaults(func=cmd_density_tool)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
