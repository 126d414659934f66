"""Command-line front end.

Subcommands: seq-analyze, seq-member, fn-analyze, fn-profile, gallery-list.
Reports are JSON documents (schema ``neocalc/1``, shipped at
docs/report.schema.json) written to stdout or ``--out``.  Exit status: 0 on
success (analysis verdicts such as "unbounded" are reported in-band), 2 on
invalid requests, 3 on unparseable input files.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import reports
from .derivatives import ApproachMode, ScaleLadder
from .functions import oracle_from_samples, parse_gallery_spec
from .reports import InputError, ParseError
from .sequences import DEFAULT_STABILITY_TOL, DEFAULT_TAIL_FRACTION


def _parse_check(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(
            f"expected A:R (point:radius), got {text!r}")
    try:
        a, r = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    return a, r


def _parse_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"expected start:end:count, got {text!r}")
    try:
        start, end, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if count < 2:
        raise argparse.ArgumentTypeError("grid count must be >= 2")
    if end < start:
        raise argparse.ArgumentTypeError("grid end must be >= start")
    step = (end - start) / (count - 1)
    return [start + i * step for i in range(count)]


def _add_ladder_options(parser: argparse.ArgumentParser):
    parser.add_argument("--ladder-base", type=float, default=0.1,
                        help="coarsest relative scale (default 0.1)")
    parser.add_argument("--ladder-floor", type=float, default=1e-7,
                        help="finest relative scale (default 1e-7)")
    parser.add_argument("--ladder-count", type=int, default=41,
                        help="maximum number of scales (default 41)")
    parser.add_argument("--ladder-band", type=int, default=4,
                        help="scales per band (default 4)")


def _ladder_from(args) -> ScaleLadder:
    return ScaleLadder(base=args.ladder_base, floor=args.ladder_floor,
                       count=args.ladder_count, band=args.ladder_band)


def _add_fn_source(parser: argparse.ArgumentParser):
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--in", dest="input_path", metavar="PATH",
                        help="CSV of x,y samples sorted by x")
    source.add_argument("--builtin", metavar="SPEC",
                        help="gallery spec, e.g. abs, linear:3,1, "
                             "skew_tent:0.5,0, vdw:8, spike33")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neocalc",
        description="Convergence-defect and derivative-defect analysis of "
                    "finite numerical data.")
    sub = parser.add_subparsers(dest="command", required=True)

    seq = sub.add_parser("seq-analyze",
                         help="r-limit sets and measure of convergence")
    seq.add_argument("--in", dest="input_path", metavar="PATH", required=True,
                     help="CSV with one value per line")
    seq.add_argument("--r", dest="r_values", type=float, action="append",
                     default=[], help="radius of a requested r-limit set "
                                      "(repeatable)")
    seq.add_argument("--check", dest="checks", type=_parse_check,
                     action="append", default=[], metavar="A:R",
                     help="query whether A is an R-limit (repeatable)")
    seq.add_argument("--tail-fraction", type=float,
                     default=DEFAULT_TAIL_FRACTION)
    seq.add_argument("--tolerance", type=float, default=DEFAULT_STABILITY_TOL)
    seq.add_argument("--oracle", action="store_true", help=argparse.SUPPRESS)
    seq.add_argument("--out", metavar="PATH")

    mem = sub.add_parser("seq-member", help="fuzzy-limit membership grades")
    mem.add_argument("--in", dest="input_path", metavar="PATH", required=True)
    mem.add_argument("--a", dest="points", type=float, action="append",
                     required=True, help="candidate limit point (repeatable)")
    mem.add_argument("--tail-fraction", type=float,
                     default=DEFAULT_TAIL_FRACTION)
    mem.add_argument("--tolerance", type=float, default=DEFAULT_STABILITY_TOL)
    mem.add_argument("--out", metavar="PATH")

    fn = sub.add_parser("fn-analyze",
                        help="derivative envelopes and sets at a point")
    _add_fn_source(fn)
    fn.add_argument("--x", type=float, required=True)
    fn.add_argument("--mode", default="centered",
                    choices=["centered", "left", "right", "two-sided"])
    fn.add_argument("--r", dest="r_values", type=float, action="append",
                    default=[], help="radius of a requested derivative set "
                                     "(repeatable)")
    _add_ladder_options(fn)
    fn.add_argument("--out", metavar="PATH")

    prof = sub.add_parser("fn-profile",
                          help="strong set, defect and membership band "
                               "along a grid")
    _add_fn_source(prof)
    prof.add_argument("--grid", type=_parse_grid, required=True,
                      metavar="START:END:COUNT")
    prof.add_argument("--r", type=float, required=True)
    prof.add_argument("--plot-data", metavar="PATH",
                      help="also write tab-separated x, lo, hi, defect rows")
    _add_ladder_options(prof)
    prof.add_argument("--out", metavar="PATH")

    gal = sub.add_parser("gallery-list", help="list built-in functions")
    gal.add_argument("--out", metavar="PATH")

    return parser


def _request_echo(args) -> dict:
    skip = {"out", "plot_data"}
    echo = {}
    for key, value in sorted(vars(args).items()):
        if key in skip or value is None:
            continue
        if key == "checks":
            value = [[a, r] for a, r in value]
        echo[key.replace("_", "-")] = value
    return echo


def _fn_oracle(args):
    if args.builtin is not None:
        return parse_gallery_spec(args.builtin)
    xs, ys = reports.read_samples_csv(args.input_path)
    return oracle_from_samples(xs, ys, name=Path(args.input_path).name)


def _emit(text: str, out_path):
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def run(args) -> int:
    request = _request_echo(args)
    if args.command == "seq-analyze":
        seq = reports.read_sequence_csv(args.input_path)
        doc = reports.sequence_report(
            seq, request, r_values=args.r_values, checks=args.checks,
            tail_fraction=args.tail_fraction, tolerance=args.tolerance,
            with_oracle=args.oracle)
    elif args.command == "seq-member":
        seq = reports.read_sequence_csv(args.input_path)
        doc = reports.sequence_report(
            seq, request, membership_points=args.points,
            tail_fraction=args.tail_fraction, tolerance=args.tolerance)
    elif args.command == "fn-analyze":
        oracle = _fn_oracle(args)
        doc = reports.derivative_report(
            oracle, args.x, request, mode=ApproachMode.parse(args.mode),
            r_values=args.r_values, ladder=_ladder_from(args))
    elif args.command == "fn-profile":
        oracle = _fn_oracle(args)
        doc = reports.profile_report(oracle, args.grid, args.r, request,
                                     ladder=_ladder_from(args))
        if args.plot_data:
            Path(args.plot_data).write_text(reports.profile_plot_rows(doc),
                                            encoding="utf-8")
    else:
        doc = reports.gallery_report(request)
    _emit(reports.to_json(doc), getattr(args, "out", None))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except ParseError as exc:
        print(f"neocalc: parse error: {exc}", file=sys.stderr)
        return 3
    except (InputError, ValueError) as exc:
        print(f"neocalc: invalid request: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
