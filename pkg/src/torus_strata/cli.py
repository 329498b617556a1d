"""Command line entry point: ``torus-strata strata`` and ``torus-strata frobenius``.

Exit codes: 0 success, 1 invalid input, 2 the checked property is false
(coverage fails for ``--m``, or the Frobenius check fails for ``--verify``).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .arrangement import NonSpanningError, coverage, divisibility_minimal, stratify, working_denominators
from .schema import (
    ArrangementInput,
    FanInput,
    InputError,
    divisor_json,
    dumps,
    lift_json,
    load_json,
    strata_report,
)
from .svg import render_svg
from .toric import (
    InvalidFanError,
    corollary_m,
    frobenius_summands,
    thomsen_collection,
    validate_fan,
)

EXIT_OK, EXIT_INVALID, EXIT_FALSE = 0, 1, 2


def _fail(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_INVALID


def _emit(report: dict, path: Optional[str]) -> None:
    if path is None:
        return
    text = dumps(report)
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_strata(args: argparse.Namespace) -> int:
    try:
        inp = ArrangementInput.from_json(load_json(args.input))
        A = inp.vector_set()
        A.require_spanning()
    except (InputError, NonSpanningError) as exc:
        return _fail(str(exc))
    if args.svg and A.n != 2:
        return _fail("--svg needs n = 2")
    if args.m is not None and args.m < 1:
        return _fail("--m must be positive")
    if args.limit is not None and args.limit < 1:
        return _fail("--limit must be positive")

    S = stratify(A)
    print(f"n={A.n} k={A.k} D_A={S.D_A} theorem bound={(A.n + 1) * S.D_A}")
    counts = ", ".join(f"dim {d}: {c}" for d, c in S.counts_by_dim.items())
    print(f"strata: {S.total} ({counts})")

    cov = coverage(A, args.m, S) if args.m is not None else None
    if cov is not None:
        print(f"L_{cov.m} meets every stratum: {'yes' if cov.covered else 'no'}")
        for s in cov.missing:
            key = lift_json(s.canonical_lift)
            print(f"  missing: dim {s.dim} I={key['I']} u={key['u']}")

    minimal = None
    if args.minimal:
        limit = args.limit if args.limit is not None else 2 * (A.n + 1) * S.D_A
        working = working_denominators(A, limit, S)
        least = working[:1]
        minimal = {
            "limit": limit,
            "working": working,
            "minimal_working_set": least,
            "divisibility_minimal": divisibility_minimal(working),
        }
        shown = "{" + ", ".join(map(str, least)) + "}"
        print(f"minimal working m (limit {limit}): {shown}")
        print(f"working m: {working}")

    _emit(strata_report(inp, S, cov, minimal), args.json)
    if args.svg:
        render_svg(S, args.m, args.svg)
    if cov is not None and not cov.covered:
        return EXIT_FALSE
    return EXIT_OK


def cmd_frobenius(args: argparse.Namespace) -> int:
    try:
        inp = FanInput.from_json(load_json(args.input))
    except InputError as exc:
        return _fail(str(exc))
    F = inp.fan()
    diag = validate_fan(F)
    if not diag.valid:
        return _fail("invalid fan: " + "; ".join(diag.problems))

    if args.verify:
        ell = args.ell if args.ell is not None else F.n + 1
        try:
            m = corollary_m(F, ell)
        except (ValueError, InvalidFanError) as exc:
            return _fail(str(exc))
    else:
        if args.m is None:
            return _fail("give --m INT or --verify")
        if args.m < 1:
            return _fail("--m must be positive")
        m, ell = args.m, None

    summands = frobenius_summands(F, m)
    print(f"m={m}: {len(summands)} summand classes, total multiplicity {sum(summands.values())}")
    for cls, mult in summands.items():
        print(f"  {divisor_json(cls)} x{mult}")
    report = {
        "input": inp.to_json(),
        "m": m,
        "summands": [
            {"class": divisor_json(c), "multiplicity": k} for c, k in summands.items()
        ],
        "rank": sum(summands.values()),
    }
    code = EXIT_OK
    if args.verify:
        thomsen = sorted(thomsen_collection(F))
        absent = [c for c in thomsen if c not in summands]
        holds = not absent and set(summands) == set(thomsen)
        report.update(
            ell=ell,
            thomsen=[divisor_json(c) for c in thomsen],
            absent=[divisor_json(c) for c in absent],
            holds=holds,
        )
        print(f"Thomsen collection: {len(thomsen)} classes; all present: {'yes' if holds else 'no'}")
        code = EXIT_OK if holds else EXIT_FALSE
    _emit(report, args.json)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torus-strata",
        description="Strata of toric hyperplane arrangements and toric Frobenius summands.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("strata", help="stratify the torus and check rational grids")
    p.add_argument("-i", "--input", required=True, help="arrangement JSON file")
    p.add_argument("--m", type=int, help="check that L_m meets every stratum")
    p.add_argument("--minimal", action="store_true", help="search for the least working m")
    p.add_argument("--limit", type=int, help="search limit for --minimal")
    p.add_argument("--json", metavar="PATH", help="write the report ('-' for stdout)")
    p.add_argument("--svg", metavar="PATH", help="draw the arrangement (n = 2)")
    p.set_defaults(func=cmd_strata)

    f = sub.add_parser("frobenius", help="toric Frobenius summands of a smooth fan")
    f.add_argument("-i", "--input", required=True, help="fan JSON file")
    f.add_argument("--m", type=int, help="degree of the Frobenius map")
    f.add_argument("--verify", action="store_true", help="check that m = ell * D_A gives every summand")
    f.add_argument("--ell", type=int, help="multiplier for --verify (default dim + 1)")
    f.add_argument("--json", metavar="PATH", help="write the report ('-' for stdout)")
    f.set_defaults(func=cmd_frobenius)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
