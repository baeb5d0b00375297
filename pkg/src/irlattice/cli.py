"""Command-line front end: ``irlattice <command> [flags]``.

Exit codes: 0 success, 2 usage error, 3 budget exceeded, 4 selftest failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .acceptance import format_table, run_acceptance
from .errors import BudgetExceeded, InvalidRun, InvalidScale, KindMismatch, NotDistributive
from .lattice import NotALattice, analyze, export_hasse, structure_for
from .measures import ClassificationReport, classify, eval_measure, make_measure
from .orders import Ordering
from .runs import DEFAULT_BUDGET, RunKind, enumerate_runs, make_scale, parse_run, to_fraction
from .valuation import distance, natural_valuation

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_SELFTEST = 0, 2, 3, 4
NO_POSITIVE_VALUATION = "no positive valuation; use --measure for pseudo-distance"


class UsageError(Exception):
    pass


def dump_json(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _rational(text: str) -> Fraction:
    return to_fraction(text.strip())


def _scale(args):
    gains = None if args.gains is None else [g for g in args.gains.split(",")]
    return make_scale(args.c, gains)


def _ordering(args, required: bool = True) -> Optional[Ordering]:
    if args.ordering is None:
        if required:
            raise UsageError("--ordering is required")
        return None
    return Ordering(args.ordering)


def _kind(args) -> RunKind:
    ordering = _ordering(args, required=False)
    if args.kind is not None:
        kind = RunKind(args.kind)
        if ordering is not None and ordering.kind is not kind:
            raise UsageError(f"{ordering.value} is defined on {ordering.kind.value}-based runs")
        return kind
    return ordering.kind if ordering is not None else RunKind.RANK


def _measure(args, scale):
    if args.measure is None:
        return None
    return make_measure(args.measure, scale,
                        rb=None if args.rb is None else _rational(args.rb),
                        p=None if args.p is None else _rational(args.p),
                        b=args.b)


def _text_dict(d: dict) -> str:
    return "".join(f"{k}: {d[k]}\n" for k in sorted(d))


def cmd_enumerate(args) -> str:
    space = enumerate_runs(_scale(args), args.n, _kind(args), args.budget)
    lits = [r.literal for r in space]
    if args.format == "json":
        return dump_json(lits)
    if args.format == "csv":
        return _csv([("run",)] + [(x,) for x in lits])
    return "".join(x + "\n" for x in lits)


def cmd_analyze(args) -> str:
    ordering = _ordering(args)
    _kind(args)
    _scale(args)
    poset, _ = structure_for(args.c, args.n, ordering, args.budget)
    verdict = analyze(poset).to_dict()
    if args.format == "text":
        return _text_dict(verdict)
    if args.format == "csv":
        keys = sorted(verdict)
        return _csv([keys, [verdict[k] for k in keys]])
    if args.format == "dot":
        return export_hasse(poset)
    return dump_json(verdict)


def _classify_text(rep: ClassificationReport) -> str:
    mark = {True: "yes", False: "NO"}
    lines = [f"{rep.measure.name} on {rep.ordering.value} (c={rep.measure.scale.c}, N={rep.n})",
             f"  valuation: {mark[rep.is_valuation]}",
             f"  isotone:   {mark[rep.is_isotone]}",
             f"  positive:  {mark[rep.is_positive]}"]
    for prop, (a, b) in rep.witnesses.items():
        lines.append(f"  {prop} witness: {a} , {b}")
    for note in (rep.threshold_note, rep.note):
        if note:
            lines.append(f"  note: {note}")
    return "\n".join(lines) + "\n"


def cmd_classify(args) -> str:
    scale = _scale(args)
    spec = _measure(args, scale)
    if spec is None:
        raise UsageError("--measure is required")
    rep = classify(spec, _ordering(args), args.n, args.budget)
    if args.format == "csv":
        return _csv([ClassificationReport.CSV_HEADER, rep.csv_row()])
    if args.format == "text":
        return _classify_text(rep)
    return dump_json(rep.to_dict())


def cmd_distance(args) -> str:
    ordering = _ordering(args)
    scale = _scale(args)
    if len(args.runs) != 2:
        raise UsageError("distance needs exactly two runs")
    x, y = (parse_run(lit, ordering.kind, scale) for lit in args.runs)
    if len(x) != args.n or len(y) != args.n:
        raise UsageError(f"runs must have length N={args.n}")
    poset, tables = structure_for(args.c, args.n, ordering, args.budget)
    spec = _measure(args, scale)
    if spec is None:
        if isinstance(tables, NotALattice) or not tables.verdict.is_distributive:
            raise UsageError(NO_POSITIVE_VALUATION)
        value = distance(natural_valuation(tables, _rational(args.k)), x, y)
        source = f"natural(k={args.k})"
    else:
        if isinstance(tables, NotALattice):
            raise UsageError(f"{ordering.value} is not a lattice here: {tables.describe(poset)}")
        join, meet = poset.run(tables.join_of(x, y)), poset.run(tables.meet_of(x, y))
        value = eval_measure(spec, join) - eval_measure(spec, meet)
        source = spec.name
    if args.format == "json":
        return dump_json({"ordering": ordering.value, "valuation": source,
                          "runs": [x.literal, y.literal], "distance": str(value)})
    return f"{value}\n"


def cmd_hasse(args) -> str:
    ordering = _ordering(args)
    _scale(args)
    poset, _ = structure_for(args.c, args.n, ordering, args.budget)
    return export_hasse(poset)


def cmd_selftest(args) -> tuple[str, int]:
    _scale(args)
    results = run_acceptance(args.budget, args.seed, args.workers)
    if args.format == "json":
        body = dump_json([{"criterion": r.number, "title": r.title, "passed": r.passed,
                           "details": list(r.details)} for r in results])
    else:
        body = format_table(results) + "\n"
    return body, EXIT_OK if all(r.passed for r in results) else EXIT_SELFTEST


COMMANDS = {
    "enumerate": cmd_enumerate,
    "analyze": cmd_analyze,
    "classify": cmd_classify,
    "distance": cmd_distance,
    "hasse": cmd_hasse,
    "selftest": cmd_selftest,
}
DEFAULT_FORMAT = {"enumerate": "text", "analyze": "json", "classify": "json",
                  "distance": "text", "hasse": "dot", "selftest": "text"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=4, help="run length N")
    common.add_argument("--c", type=int, default=2, help="number of non-zero relevance degrees")
    common.add_argument("--gains", help="comma-separated gains, e.g. 0,1,3 or 0,1/2,1")
    common.add_argument("--kind", choices=[k.value for k in RunKind])
    common.add_argument("--ordering", choices=[o.value for o in Ordering])
    common.add_argument("--format", choices=["json", "csv", "dot", "text"])
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="largest space to enumerate")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--measure", choices=["gp", "gr", "grbp", "dcg"])
    common.add_argument("--rb", help="recall base for gR (default N)")
    common.add_argument("--p", help="persistence for gRBP, as num/den")
    common.add_argument("--b", type=int, help="log base for DCG (default 2)")
    common.add_argument("--k", default="1", help="constant join-irreducible weight")

    parser = argparse.ArgumentParser(prog="irlattice", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "distance":
            p.add_argument("runs", nargs="*", metavar="RUN")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    args.format = args.format or DEFAULT_FORMAT[args.command]
    try:
        out = COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, InvalidScale, InvalidRun, KindMismatch, NotDistributive, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    code = EXIT_OK
    if isinstance(out, tuple):
        out, code = out
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
