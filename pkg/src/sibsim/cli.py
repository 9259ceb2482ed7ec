"""Command line entry point.

Exit codes: 0 all assertions passed, 1 an assertion failed, 2 invalid
configuration or violated hypothesis, 3 numerical abort (non-finite values
or a non-contracting fixed-point iteration).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import experiments
from .config import load_config
from .dynamics import BlowupError, PicardDivergenceError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sibsim",
        description=(
            "Pseudospectral simulator and verification harness for the "
            "coupled Schrodinger / improved-Boussinesq system and its "
            "Zakharov limit on a Dirichlet rectangle."
        ),
    )
    parser.add_argument(
        "--config",
        metavar="PATH",
        help="INI configuration file; omitted means the standard preset",
    )
    parser.add_argument(
        "--out", metavar="DIR", help="output directory (overrides [output] dir)"
    )
    parser.add_argument(
        "--quiet", action="store_true", help="suppress progress and verdict lines"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("run", help="integrate one configuration, assert invariants")

    p = sub.add_parser(
        "sweep-eps",
        help="compare eps > 0 runs to the Zakharov (eps = 0) reference",
    )
    p.add_argument(
        "--eps-list",
        nargs="+",
        type=float,
        metavar="EPS",
        help="override [sweep] eps_list",
    )

    p = sub.add_parser(
        "sweep-n", help="regularization sweep against the unregularized run"
    )
    p.add_argument(
        "--n-list", nargs="+", type=int, metavar="N", help="override [sweep] n_list"
    )

    p = sub.add_parser("check", help="operator identity and inequality suite")
    p.add_argument(
        "--inject-fault",
        choices=("yosida",),
        help="corrupt one symbol value on purpose (harness self-test)",
    )

    sub.add_parser(
        "estimate-c0", help="estimate the sharp Gagliardo-Nirenberg constant"
    )

    p = sub.add_parser("order-test", help="measure the integrator convergence order")
    p.add_argument(
        "--dt-list",
        nargs="+",
        type=float,
        metavar="DT",
        help="override [sweep] dt_list (halving progression, at least 3)",
    )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.out:
            config = replace(config, out_dir=args.out)
        if args.command == "run":
            return experiments.cmd_run(config, quiet=args.quiet)
        if args.command == "sweep-eps":
            return experiments.cmd_sweep_eps(
                config, eps_list=args.eps_list, quiet=args.quiet
            )
        if args.command == "sweep-n":
            return experiments.cmd_sweep_n(config, n_list=args.n_list, quiet=args.quiet)
        if args.command == "check":
            return experiments.cmd_check(
                config, quiet=args.quiet, inject_fault=args.inject_fault
            )
        if args.command == "estimate-c0":
            return experiments.cmd_estimate_c0(config, quiet=args.quiet)
        if args.command == "order-test":
            return experiments.cmd_order_test(
                config, dt_list=args.dt_list, quiet=args.quiet
            )
        raise AssertionError(f"unhandled command {args.command}")
    except ValueError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 2
    except (BlowupError, PicardDivergenceError) as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
