"""Command line entry point.

Exit codes: 0 success, 1 configuration error, 2 runtime error.  Progress goes
to stderr; the list of written files goes to stdout.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from typing import Optional, Sequence

from .config import Scenario, load_config
from .errors import ConfigError
from .runner import (
    RUN_SCHEMES,
    export_artifact,
    run_gue_sweep,
    run_nt_sweep,
    run_oracle,
    run_schemes,
)

log = logging.getLogger("uavtilt")


def _float_list(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _scheme_list(text: str) -> list:
    names = [v.strip() for v in text.split(",") if v.strip()]
    for n in names:
        if n not in RUN_SCHEMES:
            raise argparse.ArgumentTypeError(f"unknown scheme {n!r}; choose from {', '.join(RUN_SCHEMES)}")
    return names


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON scenario file (defaults apply when omitted)")
    common.add_argument("--seed", type=int, help="master seed")
    common.add_argument("--out", default="out", help="output directory (default: out)")
    common.add_argument("--threads", type=int, default=1, help="fitness evaluation threads")
    common.add_argument("--isd", type=float, help="inter-site distance, m")
    common.add_argument("--uav-height", type=float, help="UAV altitude, m")
    common.add_argument("--nt", type=int, help="array elements per sector")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    p = argparse.ArgumentParser(prog="uavtilt", description="UAV booster-cell uptilt simulator")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="run one scheme")
    run.add_argument("--scheme", required=True, choices=RUN_SCHEMES)

    cmp_ = sub.add_parser("compare", parents=[common], help="run a set of schemes")
    cmp_.add_argument("--schemes", type=_scheme_list, default=list(RUN_SCHEMES),
                      help="comma-separated schemes (default: all)")

    nt = sub.add_parser("sweep-nt", parents=[common], help="hybrid GA per array size")
    nt.add_argument("--nt-list", type=_int_list, default=[4, 8, 16])

    gue = sub.add_parser("sweep-gue", parents=[common], help="ground-user duty-cycle and downtilt sweep")
    gue.add_argument("--beta-list", type=_float_list, default=[0.25, 0.5, 0.75])
    gue.add_argument("--phi-dt-list", type=_float_list, default=[0.0, -6.0, -12.0])
    gue.add_argument("--ut-tilt", type=float, help="common UT uptilt for every site, degrees")

    orc = sub.add_parser("oracle", parents=[common], help="exhaustive optimum on a truncated layout")
    orc.add_argument("--sites", type=_int_list, default=[0, 1, 2], help="site indices to keep")
    orc.add_argument("--quantum", type=float, default=5.0, help="tilt lattice step, degrees")
    orc.add_argument("--no-heuristics", action="store_true", help="skip hybrid GA and PSO")
    return p


def _scenario(args) -> Scenario:
    scenario = load_config(args.config) if args.config else Scenario()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.isd is not None:
        overrides["isd"] = args.isd
    if args.uav_height is not None:
        overrides["uav_height"] = args.uav_height
    if args.nt is not None:
        overrides["n_elements"] = args.nt
    return replace(scenario, **overrides) if overrides else scenario


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        scenario = _scenario(args)
        if args.threads < 1:
            raise ConfigError("threads", "must be at least 1")
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return 1
    try:
        if args.command == "run":
            art = run_schemes(scenario, [args.scheme], threads=args.threads)
        elif args.command == "compare":
            art = run_schemes(scenario, args.schemes, threads=args.threads)
        elif args.command == "sweep-nt":
            art = run_nt_sweep(scenario, args.nt_list, threads=args.threads)
        elif args.command == "sweep-gue":
            tilts = None
            if args.ut_tilt is not None:
                tilts = [args.ut_tilt] * 19
            art = run_gue_sweep(scenario, args.beta_list, args.phi_dt_list, tilts=tilts)
        else:
            art = run_oracle(scenario, args.sites, args.quantum,
                             with_heuristics=not args.no_heuristics, threads=args.threads)
        for path in export_artifact(art, args.out):
            print(path)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return 1
    except Exception as exc:  # noqa: BLE001 - every other failure maps to exit code 2
        log.error("%s: %s", type(exc).__name__, exc)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
