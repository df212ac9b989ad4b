"""Command-line front end.

Subcommands ``series``, ``sweep2d``, ``verify`` and ``preset`` mirror the
configuration keys as ``--`` flags; flag values override file values.  Exit
codes: 0 success, 1 usage/configuration error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, parse_config
from .sweep import SweepError, run

__all__ = ["main", "main_entry"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors are exit 1
        raise _UsageError(message)


OVERRIDE_KEYS = (
    "delta",
    "m",
    "l",
    "p",
    "cg",
    "motion",
    "gt_max_over_pi",
    "points",
    "tail_eps",
    "sweep_param",
    "sweep_values",
    "output",
)


def _add_common_flags(parser):
    parser.add_argument("--config", help="configuration file with key = value lines")
    for key in OVERRIDE_KEYS:
        parser.add_argument(f"--{key}", dest=key, help=argparse.SUPPRESS)
    parser.add_argument(
        "--workers", type=int, default=1,
        help="worker processes; the output bytes do not depend on this",
    )


def _build_parser() -> _Parser:
    parser = _Parser(prog="mpjcm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("series", "negativity over a time grid, written as CSV"),
        ("sweep2d", "negativity over (sweep value, time), written as CSV"),
        ("verify", "cross-check closed forms against the brute-force oracle"),
    ):
        _add_common_flags(sub.add_parser(name, help=text))
    preset = sub.add_parser("preset", help="run a predefined figure parameter set")
    preset.add_argument("name", help="preset name, e.g. fig2b or fig4")
    _add_common_flags(preset)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    overrides = {}
    for key in OVERRIDE_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if args.command == "preset":
        overrides["mode"] = "preset"
        overrides["preset"] = args.name
    else:
        overrides["mode"] = args.command
    text = ""
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"error: cannot read config file: {exc}", file=sys.stderr)
            return 1
    try:
        spec = parse_config(text, overrides=overrides)
        return run(spec, workers=args.workers)
    except (ConfigError, SweepError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
