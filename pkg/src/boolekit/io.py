"""Dataset file formats and report documents.

CSV formats (headers are bit-exact):

* triples — ``alpha,a1,a2,a3`` with outcomes as the literals "+1"/"-1"
  and alpha contiguous from 1;
* pairs — ``group,alpha,t_first,t_second,out_first,out_second`` with
  group one of "12"/"13"/"23", alpha contiguous per group, and times
  either both present (decimal) or both empty per row.

Reports are plain dicts with a fixed key order so identical arguments
always render byte-identically.  Every exact quantity is emitted both as
integers (sum/count or num/den) and as a decimal string with 15
significant digits; the decimal is always reconstructible from the
integers.
"""

from __future__ import annotations

import json
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from ._version import __version__
from .core import (
    CorrelationTriple,
    ExactCorrelation,
    GroupLabel,
    PairDataset,
    PairRun,
    TripleDataset,
    TripleRun,
)
from .engine import PATTERNS, BooleReport, LemmaRow

__all__ = [
    "TRIPLE_HEADER",
    "PAIR_HEADER",
    "ParseError",
    "format_outcome",
    "fraction_decimal",
    "sign_key",
    "triples_to_csv",
    "pairs_to_csv",
    "parse_triples_text",
    "parse_pairs_text",
    "load_triples",
    "load_pairs",
    "dump_triples",
    "dump_pairs",
    "report_document",
    "feasibility_document",
    "lemma_document",
    "search_document",
    "sweep_document",
    "render_document",
]

TRIPLE_HEADER = "alpha,a1,a2,a3"
PAIR_HEADER = "group,alpha,t_first,t_second,out_first,out_second"

DECIMAL_SIGNIFICANT_DIGITS = 15


class ParseError(ValueError):
    """Malformed dataset file; message carries the offending line number."""


def format_outcome(value: int) -> str:
    return "+1" if value == 1 else "-1"


def _parse_outcome(text: str, source: str, line_no: int, column: str) -> int:
    if text == "+1":
        return 1
    if text == "-1":
        return -1
    raise ParseError(
        f"{source}:{line_no}: invalid outcome {text!r} in column {column} "
        f'(must be "+1" or "-1")'
    )


def _parse_int(text: str, source: str, line_no: int, column: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"{source}:{line_no}: invalid integer {text!r} in column {column}") from None


# --------------------------------------------------------------------------
# Triple CSV
# --------------------------------------------------------------------------

def triples_to_csv(ds: TripleDataset) -> str:
    lines = [TRIPLE_HEADER]
    for run in ds.runs:
        lines.append(
            f"{run.alpha},{format_outcome(run.a1)},{format_outcome(run.a2)},{format_outcome(run.a3)}"
        )
    return "\n".join(lines) + "\n"


def parse_triples_text(text: str, source: str = "<string>") -> TripleDataset:
    lines = text.splitlines()
    if not lines or lines[0] != TRIPLE_HEADER:
        raise ParseError(f"{source}:1: expected header {TRIPLE_HEADER!r}")
    runs = []
    expected_alpha = 1
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != 4:
            raise ParseError(f"{source}:{line_no}: expected 4 fields, got {len(fields)}")
        alpha = _parse_int(fields[0], source, line_no, "alpha")
        if alpha != expected_alpha:
            raise ParseError(
                f"{source}:{line_no}: non-contiguous runs: expected alpha "
                f"{expected_alpha}, got {alpha}"
            )
        a1 = _parse_outcome(fields[1], source, line_no, "a1")
        a2 = _parse_outcome(fields[2], source, line_no, "a2")
        a3 = _parse_outcome(fields[3], source, line_no, "a3")
        runs.append(TripleRun(alpha, a1, a2, a3))
        expected_alpha += 1
    if not runs:
        raise ParseError(f"{source}: empty sample: no data rows")
    return TripleDataset.from_runs(runs)


def load_triples(path: str | Path) -> TripleDataset:
    path = Path(path)
    return parse_triples_text(path.read_text(encoding="utf-8"), source=str(path))


def dump_triples(ds: TripleDataset, path: str | Path) -> None:
    Path(path).write_text(triples_to_csv(ds), encoding="utf-8")


# --------------------------------------------------------------------------
# Pair CSV
# --------------------------------------------------------------------------

def _format_time(t: float | None) -> str:
    return "" if t is None else repr(float(t))


def pairs_to_csv(ds: PairDataset) -> str:
    lines = [PAIR_HEADER]
    for block in ds.groups:
        for run in block.runs():
            lines.append(
                f"{run.group.value},{run.alpha},{_format_time(run.t_first)},"
                f"{_format_time(run.t_second)},{format_outcome(run.out_first)},"
                f"{format_outcome(run.out_second)}"
            )
    return "\n".join(lines) + "\n"


def parse_pairs_text(text: str, source: str = "<string>") -> PairDataset:
    lines = text.splitlines()
    if not lines or lines[0] != PAIR_HEADER:
        raise ParseError(f"{source}:1: expected header {PAIR_HEADER!r}")
    by_value = {g.value: g for g in GroupLabel}
    runs = []
    next_alpha = {g: 1 for g in GroupLabel}
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != 6:
            raise ParseError(f"{source}:{line_no}: expected 6 fields, got {len(fields)}")
        group_text, alpha_text, t1_text, t2_text, o1_text, o2_text = fields
        group = by_value.get(group_text)
        if group is None:
            raise ParseError(
                f'{source}:{line_no}: invalid group {group_text!r} (must be "12", "13", or "23")'
            )
        alpha = _parse_int(alpha_text, source, line_no, "alpha")
        if alpha != next_alpha[group]:
            raise ParseError(
                f"{source}:{line_no}: non-contiguous runs in group {group.value}: "
                f"expected alpha {next_alpha[group]}, got {alpha}"
            )
        if (t1_text == "") != (t2_text == ""):
            raise ParseError(f"{source}:{line_no}: incomplete timestamps")
        if t1_text == "":
            t1: float | None = None
            t2: float | None = None
        else:
            try:
                t1, t2 = float(t1_text), float(t2_text)
            except ValueError:
                raise ParseError(f"{source}:{line_no}: invalid timestamp") from None
        out_first = _parse_outcome(o1_text, source, line_no, "out_first")
        out_second = _parse_outcome(o2_text, source, line_no, "out_second")
        try:
            runs.append(PairRun(group, alpha, out_first, out_second, t1, t2))
        except ValueError as exc:
            raise ParseError(f"{source}:{line_no}: {exc}") from None
        next_alpha[group] += 1
    try:
        return PairDataset.from_runs(runs)
    except ValueError as exc:
        raise ParseError(f"{source}: {exc}") from None


def load_pairs(path: str | Path) -> PairDataset:
    path = Path(path)
    return parse_pairs_text(path.read_text(encoding="utf-8"), source=str(path))


def dump_pairs(ds: PairDataset, path: str | Path) -> None:
    Path(path).write_text(pairs_to_csv(ds), encoding="utf-8")


# --------------------------------------------------------------------------
# Report documents
# --------------------------------------------------------------------------

def fraction_decimal(value: Fraction, sig: int = DECIMAL_SIGNIFICANT_DIGITS) -> str:
    """Plain decimal rendering with a fixed count of significant digits."""
    if value == 0:
        return "0." + "0" * (sig - 1)
    with localcontext() as ctx:
        ctx.prec = sig + 5
        d = Decimal(value.numerator) / Decimal(value.denominator)
        quantum = Decimal(1).scaleb(d.adjusted() - (sig - 1))
        q = d.quantize(quantum, rounding=ROUND_HALF_EVEN)
    return format(q, "f")


def sign_key(triple: tuple[int, int, int]) -> str:
    """Sign triple as a compact string, e.g. (1, -1, 1) -> "+-+"."""
    return "".join("+" if a == 1 else "-" for a in triple)


def _fraction_entry(value: Fraction) -> dict[str, Any]:
    return {
        "num": value.numerator,
        "den": value.denominator,
        "decimal": fraction_decimal(value),
    }


def _correlation_entry(value: ExactCorrelation) -> dict[str, Any]:
    return {
        "sum": value.sum,
        "count": value.count,
        "decimal": fraction_decimal(value.value),
    }


def report_document(
    correlations: CorrelationTriple,
    boole: BooleReport,
    counts: Mapping[str, int],
    scenario: str,
    seed: int | tuple[int, ...] | None,
) -> dict[str, Any]:
    """The standard check/scenario report; correlations must be exact."""
    comps = {}
    for name, comp in zip(("f12", "f13", "f23"), correlations.components):
        if not isinstance(comp, ExactCorrelation):
            raise TypeError(f"report correlations must be ExactCorrelation, got {name}={comp!r}")
        comps[name] = _correlation_entry(comp)
    return {
        "correlations": comps,
        "margins": {p.key: _fraction_entry(boole.margins[p]) for p in PATTERNS},
        "verdict": boole.verdict,
        "violation_amount": _fraction_entry(boole.violation_amount),
        "counts": dict(counts),
        "scenario": scenario,
        "seed": list(seed) if isinstance(seed, tuple) else seed,
        "tool_version": __version__,
    }


def triple_counts(ds: TripleDataset) -> dict[str, int]:
    return {"m": ds.m}


def pair_counts(ds: PairDataset) -> dict[str, int]:
    return {"m12": ds.m1, "m13": ds.m2, "m23": ds.m3}


def feasibility_document(
    targets: tuple[Fraction, Fraction, Fraction],
    boole: BooleReport,
    weights: Mapping[tuple[int, int, int], Fraction] | None,
    certificate_key: str | None,
) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "targets": {
            name: _fraction_entry(value)
            for name, value in zip(("f12", "f13", "f23"), targets)
        },
        "margins": {p.key: _fraction_entry(boole.margins[p]) for p in PATTERNS},
        "feasible": weights is not None,
    }
    if weights is not None:
        doc["distribution"] = {sign_key(t): _fraction_entry(w) for t, w in weights.items()}
        doc["certificate"] = None
    else:
        doc["distribution"] = None
        doc["certificate"] = certificate_key
    doc["tool_version"] = __version__
    return doc


def lemma_document(rows: tuple[LemmaRow, ...]) -> dict[str, Any]:
    return {
        "rows": [
            {"a1": r.a1, "a2": r.a2, "a3": r.a3, "pattern": r.pattern.key, "value": r.value}
            for r in rows
        ],
        "tool_version": __version__,
    }


def search_document(
    best_strategy: tuple[tuple[int, int], ...],
    violation_amount: Fraction,
    num_maximizers: int,
    num_flip_orbits: int,
    context_free_max: Fraction,
    searched: int,
) -> dict[str, Any]:
    return {
        "max_violation": _fraction_entry(violation_amount),
        "best_strategy": {
            "g12": list(best_strategy[0]),
            "g13": list(best_strategy[1]),
            "g23": list(best_strategy[2]),
        },
        "num_maximizers": num_maximizers,
        "num_flip_orbits": num_flip_orbits,
        "context_free_max_violation": _fraction_entry(context_free_max),
        "strategies_searched": searched,
        "tool_version": __version__,
    }


def sweep_document(
    worst_margin: Fraction,
    bound: float,
    trials: int,
    m_per_group: int,
    seed: int,
) -> dict[str, Any]:
    return {
        "worst_margin": _fraction_entry(worst_margin),
        "statistical_bound": repr(bound),
        "within_bound": float(worst_margin) >= bound,
        "trials": trials,
        "m_per_group": m_per_group,
        "seed": seed,
        "scenario": "context-free",
        "tool_version": __version__,
    }


# --------------------------------------------------------------------------
# Rendering
# --------------------------------------------------------------------------

def _flatten(doc: Any, prefix: str, rows: list[tuple[str, str]]) -> None:
    if isinstance(doc, Mapping):
        for key, value in doc.items():
            _flatten(value, f"{prefix}.{key}" if prefix else str(key), rows)
    elif isinstance(doc, list):
        for idx, value in enumerate(doc):
            _flatten(value, f"{prefix}[{idx}]", rows)
    else:
        rows.append((prefix, json.dumps(doc)))


def render_document(doc: Mapping[str, Any], fmt: str = "json") -> str:
    """Deterministic rendering: json (canonical), csv (flat key,value), text."""
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        rows: list[tuple[str, str]] = []
        _flatten(doc, "", rows)
        return "key,value\n" + "\n".join(f"{k},{v}" for k, v in rows) + "\n"
    if fmt == "text":
        rows = []
        _flatten(doc, "", rows)
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows) + "\n"
    raise ValueError(f"unknown format {fmt!r} (choose json, csv, or text)")
