"""Command line entry point: ``python -m ccs_tunneling <command> ...``.

Exit status is 0 on success, 1 for usage or configuration errors and 2 when
a propagation aborts numerically.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys

from .ccs import CCSSolveError, NormDriftError
from .harness import (
    ConfigError,
    classify_energies,
    fmt,
    load_config,
    make_grid,
    run_scenario,
    write_grid_csv,
    write_separatrix_csv,
)
from .model import WellParams
from .reference import SplittingNotConverged, tunneling_splitting

EXIT_USAGE = 1
EXIT_NUMERICAL = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 by default; 2 is reserved for numerical aborts
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _positive_float(text):
    v = float(text)
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def build_parser():
    parser = _Parser(prog="ccs-tunneling", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("run", help="run a scenario config and write CSV output")
    p.add_argument("config")

    p = sub.add_parser("splitting", help="print E1, E2, Delta and the tunneling period")
    p.add_argument("--D", type=_positive_float, default=1.0)
    p.add_argument("--L", type=_positive_float, default=10.0)
    p.add_argument("--N", type=int, default=512)
    p.add_argument("--dt", type=_positive_float, default=1e-3)

    p = sub.add_parser("grid", help="write the initial grid and its classification as CSV")
    p.add_argument("config")

    p = sub.add_parser("separatrix", help="write separatrix points as CSV")
    p.add_argument("--D", type=_positive_float, default=1.0)
    p.add_argument("--ordered", action="store_true", help="normal-ordered variant")
    p.add_argument("--n", type=int, default=401, help="number of q sweep points")
    return parser


def _cmd_run(args):
    config = load_config(args.config)
    result = run_scenario(config)
    print(
        f"scenario {config.scenario}: M={result.labels0.size}, "
        f"max |c_ccs| = {abs(result.c_ccs).max():.6f}, "
        f"max ||c_ccs| - |c_ref|| = {result.max_deviation:.6f}, "
        f"norm in [{result.norm.min():.6f}, {result.norm.max():.6f}]"
    )
    for name, path in result.paths.items():
        print(f"wrote {name}: {path}")


def _cmd_splitting(args):
    e1, e2, delta = tunneling_splitting(WellParams(args.D), grid=(args.L, args.N), dt=args.dt)
    print(f"E1 = {fmt(e1)}")
    print(f"E2 = {fmt(e2)}")
    print(f"Delta = {fmt(delta)}")
    print(f"T_t = {fmt(2.0 * math.pi / delta)}")


def _cmd_grid(args):
    config = load_config(args.config)
    labels, occupied = make_grid(config.grid_for_well())
    write_grid_csv(sys.stdout, labels, occupied, config.params)
    region = classify_energies(labels, config.params)
    below = int((region == "below").sum())
    print(
        f"{labels.size} labels: {below} below, {labels.size - below} above "
        "the ordered separatrix energy",
        file=sys.stderr,
    )


def _cmd_separatrix(args):
    if args.n < 2:
        raise _UsageError("--n must be at least 2")
    variant = "ordered" if args.ordered else "plain"
    write_separatrix_csv(sys.stdout, WellParams(args.D), n=args.n, variants=(variant,))


_COMMANDS = {
    "run": _cmd_run,
    "splitting": _cmd_splitting,
    "grid": _cmd_grid,
    "separatrix": _cmd_separatrix,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="[%(name)s] %(message)s")
    try:
        _COMMANDS[args.command](args)
    except (_UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NormDriftError, CCSSolveError, SplittingNotConverged) as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
