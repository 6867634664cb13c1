"""Command line entry point: ``isoprimes quadratic D`` or ``isoprimes galois FILE``."""
from __future__ import annotations

import argparse
import logging
import sys

from .bounds_generic import AuxStrategy
from .errors import DATA_FILE_CODES, IsoprimesError
from .orchestrator import RunConfig, run_combined
from .type_one import DEFAULT_TYPE1_AUX

EXIT_OK, EXIT_ERROR, EXIT_INVALID_FIELD, EXIT_DATA_FILE = 0, 1, 2, 3
INVALID_FIELD_CODES = frozenset({"INVALID_FIELD", "REJECT_INFINITE", "UNSUPPORTED_DEGREE"})


def _prime_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="isoprimes",
                                 description="Compute a finite superset of the isogeny primes of a number field.")
    common = argparse.ArgumentParser(add_help=False)
    aux = common.add_mutually_exclusive_group()
    aux.add_argument("--aux-bound", type=int, metavar="N", help="use all aux primes of norm <= N")
    aux.add_argument("--auto-stop", type=int, metavar="K", default=4,
                     help="add split primes until the bound is stable K times in a row (default 4)")
    common.add_argument("--type1-aux", type=_prime_list, default=DEFAULT_TYPE1_AUX, metavar="q1,q2,...",
                        help="odd rational primes for the Type 1 bound")
    common.add_argument("--type2-cap", type=int, default=10 ** 6, metavar="P", help="scan Type 2 primes up to P")
    common.add_argument("--shards", type=int, default=1, metavar="N", help="worker processes for the Type 2 scan")
    common.add_argument("--resume", metavar="PATH", help="checkpoint file for the Type 2 scan")
    common.add_argument("--semistable", action="store_true",
                        help="restrict to semistable isogeny primes (unconditional, no Type 2 scan)")
    common.add_argument("--no-ice", action="store_true", help="skip isogeny character enumeration")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--bfi-cache", metavar="PATH", help="formal immersion data file (created if absent)")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    q = sub.add_parser("quadratic", parents=[common], help="the quadratic field Q(sqrt(D))")
    q.add_argument("D", type=int)
    g = sub.add_parser("galois", parents=[common], help="a Galois field given by a JSON field-data file")
    g.add_argument("path")
    return ap


def config_from_args(args) -> RunConfig:
    strategy = AuxStrategy.norm_bound(args.aux_bound) if args.aux_bound is not None \
        else AuxStrategy.auto_stop(args.auto_stop)
    return RunConfig(
        kind=args.command,
        D=getattr(args, "D", None),
        path=getattr(args, "path", None),
        aux=strategy,
        type1_aux=tuple(args.type1_aux),
        type2_cap=args.type2_cap,
        shards=args.shards,
        resume=args.resume,
        semistable=args.semistable,
        ice=not args.no_ice,
        bfi_cache=args.bfi_cache,
    )


def exit_code_for(err: IsoprimesError) -> int:
    if err.code in DATA_FILE_CODES:
        return EXIT_DATA_FILE
    if err.code in INVALID_FIELD_CODES:
        return EXIT_INVALID_FIELD
    return EXIT_ERROR


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        report = run_combined(config_from_args(args))
    except IsoprimesError as err:
        print(f"error: {err}", file=sys.stderr)
        return exit_code_for(err)
    text = report.to_json() if args.format == "json" else report.to_text()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
