"""Command-line interface.

Subcommands: check-triples, check-pairs, feasible, synthesize, scenario,
search, lemma.  A "violated" verdict is a result, not a failure; exit
codes are 0 for success, 1 for data errors, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

from . import experiments, io, representability
from .core import CorrelationTriple, correlations_from_pairs, correlations_from_triples
from .engine import boole_margins, exhaustive_lemma
from .io import ParseError


def _target_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(
            f"invalid correlation {text!r} (use a decimal like 0.5 or a ratio like 1/3)"
        ) from None


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="master seed (default 42)")
    common.add_argument(
        "--format",
        choices=("json", "csv", "text"),
        default="json",
        help="report format (default json)",
    )
    common.add_argument("--out", default=None, help="output path (default stdout)")

    parser = argparse.ArgumentParser(
        prog="boolekit",
        description=(
            "Exact Boole-inequality analysis for dichotomic data: check datasets, "
            "decide representability, synthesize witnesses, and run contextual scenarios."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-triples", parents=[common], help="check a triple-collection CSV")
    p.add_argument("file", help="triples CSV (header: alpha,a1,a2,a3)")

    p = sub.add_parser("check-pairs", parents=[common], help="check a pair-collection CSV")
    p.add_argument("file", help="pairs CSV (header: group,alpha,t_first,t_second,out_first,out_second)")

    p = sub.add_parser(
        "feasible", parents=[common], help="decide joint-distribution feasibility of targets"
    )
    p.add_argument("--f12", type=_target_fraction, required=True)
    p.add_argument("--f13", type=_target_fraction, required=True)
    p.add_argument("--f23", type=_target_fraction, required=True)

    p = sub.add_parser(
        "synthesize", parents=[common], help="emit a triple dataset realizing rational targets"
    )
    p.add_argument("--f12", type=_target_fraction, required=True)
    p.add_argument("--f13", type=_target_fraction, required=True)
    p.add_argument("--f23", type=_target_fraction, required=True)
    p.add_argument("--m", type=int, required=True, help="number of runs")

    p = sub.add_parser("scenario", parents=[common], help="run a built-in scenario")
    p.add_argument("kind", choices=("doctors", "telegraph", "context-free"))
    p.add_argument("--dates", type=int, default=3, help="doctors: number of dates (multiple of 3)")
    p.add_argument("--patients", type=int, default=1, help="doctors: patients per date")
    p.add_argument("--gamma", type=float, default=0.1, help="telegraph: flip rate")
    p.add_argument("--dt", type=float, default=0.5, help="telegraph: time spacing")
    p.add_argument("--m", type=int, default=1000, help="runs per group")
    p.add_argument("--trials", type=int, default=10, help="context-free: number of random models")
    p.add_argument(
        "--schedule",
        choices=("identity", "flip-g23"),
        default="flip-g23",
        help="telegraph: apparatus sign schedule (default flip-g23)",
    )
    p.add_argument("--data-out", default=None, help="also write the generated pair dataset CSV here")

    sub.add_parser("search", parents=[common], help="exhaustive deterministic-strategy search")
    sub.add_parser("lemma", parents=[common], help="print the 32-row per-sample proof table")

    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        return _dispatch(args)
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args: argparse.Namespace) -> int:
    fmt = args.format

    if args.command == "check-triples":
        ds = io.load_triples(args.file)
        correlations = correlations_from_triples(ds)
        doc = io.report_document(
            correlations,
            boole_margins(correlations),
            io.triple_counts(ds),
            scenario="check-triples",
            seed=None,
        )
        _emit(io.render_document(doc, fmt), args.out)
        return 0

    if args.command == "check-pairs":
        ds = io.load_pairs(args.file)
        correlations = correlations_from_pairs(ds)
        doc = io.report_document(
            correlations,
            boole_margins(correlations),
            io.pair_counts(ds),
            scenario="check-pairs",
            seed=None,
        )
        _emit(io.render_document(doc, fmt), args.out)
        return 0

    if args.command == "feasible":
        targets = (args.f12, args.f13, args.f23)
        c = CorrelationTriple(*targets)
        result = representability.find_joint_distribution(c)
        doc = io.feasibility_document(
            targets,
            boole_margins(c),
            result.distribution.weights if result.feasible else None,
            None if result.feasible else result.certificate.key,
        )
        _emit(io.render_document(doc, fmt), args.out)
        return 0

    if args.command == "synthesize":
        c = CorrelationTriple(args.f12, args.f13, args.f23)
        ds = representability.synthesize_triples(c, args.m)
        _emit(io.triples_to_csv(ds), args.out)
        return 0

    if args.command == "scenario":
        return _run_scenario(args)

    if args.command == "search":
        full = experiments.violation_search_deterministic()
        context_free = experiments.violation_search_deterministic(context_free_only=True)
        orbits = {frozenset({s, tuple(tuple(-v for v in pair) for pair in s)}) for s in full.maximizers}
        doc = io.search_document(
            best_strategy=full.best_strategy,
            violation_amount=full.violation_amount,
            num_maximizers=len(full.maximizers),
            num_flip_orbits=len(orbits),
            context_free_max=context_free.violation_amount,
            searched=full.searched,
        )
        _emit(io.render_document(doc, fmt), args.out)
        return 0

    if args.command == "lemma":
        doc = io.lemma_document(exhaustive_lemma())
        if fmt == "csv":
            lines = ["a1,a2,a3,pattern,value"]
            lines += [
                f"{io.format_outcome(r['a1'])},{io.format_outcome(r['a2'])},"
                f"{io.format_outcome(r['a3'])},{r['pattern']},{r['value']}"
                for r in doc["rows"]
            ]
            _emit("\n".join(lines) + "\n", args.out)
        else:
            _emit(io.render_document(doc, fmt), args.out)
        return 0

    raise ValueError(f"unknown command {args.command!r}")


def _run_scenario(args: argparse.Namespace) -> int:
    fmt = args.format

    if args.kind == "doctors":
        ds, report = experiments.doctors_scenario(args.dates, args.patients)
        doc = io.report_document(
            report.correlations,
            report.boole,
            io.pair_counts(ds),
            scenario="doctors",
            seed=None,
        )
    elif args.kind == "telegraph":
        signs = (
            experiments.identity_signs()
            if args.schedule == "identity"
            else experiments.g23_flip_signs()
        )
        ds, report = experiments.telegraph_scenario(
            args.gamma, args.dt, signs, args.m, args.seed
        )
        doc = io.report_document(
            report.correlations,
            report.boole,
            io.pair_counts(ds),
            scenario=f"telegraph ({args.schedule})",
            seed=args.seed,
        )
    else:  # context-free
        worst = experiments.context_free_property_run(None, args.m, args.trials, args.seed)
        bound = -5.0 * math.sqrt(3.0) / math.sqrt(args.m)
        doc = io.sweep_document(worst, bound, args.trials, args.m, args.seed)
        _emit(io.render_document(doc, fmt), args.out)
        return 0

    if args.data_out is not None:
        io.dump_pairs(ds, args.data_out)
    _emit(io.render_document(doc, fmt), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
