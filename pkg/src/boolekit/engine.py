"""The four-facet form of the Boole inequality and its per-sample proof.

The two absolute-value constraints |F12 +/- F13| <= 1 +/- F23 expand into
four linear facets

    s12*F12 + s13*F13 + s23*F23 <= 1,    s12*s13*s23 = -1,

one per admissible sign pattern.  The facet margin 1 - (s . F) is the
first-class certificate: all four nonnegative means satisfied, and the
most negative one names the violated inequality.

Two exact facts carry the whole theory and are enforced by construction:

* facet-sum identity — the four margins always sum to exactly 4, because
  each correlation enters twice with + and twice with -;
* per-sample lemma — for any single (+/-1) triple, s12*a1*a2 + s13*a1*a3
  + s23*a2*a3 is either 1 or -3, never anything else.  Averaging over
  complete triples therefore can never push a facet sum above 1, which is
  why triple-collected data cannot violate the inequality.  Pair-collected
  group averages have no such per-run identity linking them, and are not
  constrained.

Margins are computed in exact rational arithmetic for every input
representation (floats convert losslessly to dyadic rationals); only the
satisfied/violated verdict applies a tolerance, and only for approximate
inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Mapping, NamedTuple

from .core import (
    CorrelationTriple,
    PairDataset,
    TripleDataset,
    TripleRun,
    correlations_from_pairs,
    correlations_from_triples,
)

__all__ = [
    "SignPattern",
    "PATTERNS",
    "SIGN_TRIPLES",
    "BooleReport",
    "LemmaRow",
    "VERDICT_TOL",
    "boole_margins",
    "per_sample_form",
    "exhaustive_lemma",
    "check_triple_dataset",
    "check_pair_dataset",
]

# Verdict tolerance for approximate (float) inputs; exact inputs use 0.
VERDICT_TOL = Fraction(1e-12)

# All 8 sign triples in plus-first lexicographic order.
SIGN_TRIPLES: tuple[tuple[int, int, int], ...] = tuple(itertools.product((1, -1), repeat=3))


class SignPattern(Enum):
    """One facet of the inequality: signs (s12, s13, s23) with product -1."""

    PPM = ("ppm", 1, 1, -1)
    PMP = ("pmp", 1, -1, 1)
    MPP = ("mpp", -1, 1, 1)
    MMM = ("mmm", -1, -1, -1)

    def __init__(self, key: str, s12: int, s13: int, s23: int) -> None:
        self.key = key
        self.s12 = s12
        self.s13 = s13
        self.s23 = s23

    @property
    def signs(self) -> tuple[int, int, int]:
        return (self.s12, self.s13, self.s23)

    @classmethod
    def from_signs(cls, s12: int, s13: int, s23: int) -> "SignPattern":
        if s12 * s13 * s23 != -1:
            raise ValueError(f"inadmissible sign pattern {(s12, s13, s23)}: product must be -1")
        return _PATTERN_BY_SIGNS[(s12, s13, s23)]

    @classmethod
    def from_key(cls, key: str) -> "SignPattern":
        for pattern in cls:
            if pattern.key == key:
                return pattern
        raise ValueError(f"unknown facet key {key!r}")


PATTERNS: tuple[SignPattern, ...] = (
    SignPattern.PPM,
    SignPattern.PMP,
    SignPattern.MPP,
    SignPattern.MMM,
)
_PATTERN_BY_SIGNS = {p.signs: p for p in SignPattern}


@dataclass(frozen=True)
class BooleReport:
    """The four facet margins plus verdict for one correlation triple.

    margins are exact rationals; `exact` records whether the underlying
    correlations were exact (verdict compared against 0) or approximate
    (verdict compared against -VERDICT_TOL, ties count as satisfied).
    """

    margins: Mapping[SignPattern, Fraction]
    verdict: str
    violation_amount: Fraction
    worst_pattern: SignPattern
    exact: bool

    @property
    def satisfied(self) -> bool:
        return self.verdict == "satisfied"

    @property
    def min_margin(self) -> Fraction:
        return self.margins[self.worst_pattern]


def boole_margins(c: CorrelationTriple) -> BooleReport:
    """Evaluate all four facets of the inequality on one correlation triple.

    Works on a single common denominator, so for exact inputs every margin
    is an exact rational with denominator dividing lcm of the counts.
    """
    fracs = c.fractions()
    den = lcm(fracs[0].denominator, fracs[1].denominator, fracs[2].denominator)
    n12, n13, n23 = (int(f.numerator * (den // f.denominator)) for f in fracs)

    margin_nums = [
        den - (p.s12 * n12 + p.s13 * n13 + p.s23 * n23) for p in PATTERNS
    ]
    margins = {p: Fraction(num, den) for p, num in zip(PATTERNS, margin_nums)}

    worst_idx = min(range(4), key=lambda i: margin_nums[i])
    worst = PATTERNS[worst_idx]
    min_margin = margins[worst]
    violation = max(Fraction(0), -min_margin)
    tol = Fraction(0) if c.exact else VERDICT_TOL
    verdict = "satisfied" if min_margin >= -tol else "violated"
    return BooleReport(
        margins=margins,
        verdict=verdict,
        violation_amount=violation,
        worst_pattern=worst,
        exact=c.exact,
    )


def per_sample_form(run: TripleRun, s: SignPattern) -> int:
    """s12*a1*a2 + s13*a1*a3 + s23*a2*a3 for a single run; always 1 or -3."""
    return (
        s.s12 * run.a1 * run.a2
        + s.s13 * run.a1 * run.a3
        + s.s23 * run.a2 * run.a3
    )


class LemmaRow(NamedTuple):
    a1: int
    a2: int
    a3: int
    pattern: SignPattern
    value: int


def exhaustive_lemma() -> tuple[LemmaRow, ...]:
    """All 32 evaluations of the per-sample form: 8 triples x 4 facets.

    Every value lands in {1, -3}, so each facet's dataset average is at
    most 1 no matter what the triples are.  This is the constructive proof
    that complete-triple data cannot violate the inequality.
    """
    rows = []
    for a1, a2, a3 in SIGN_TRIPLES:
        run = TripleRun(1, a1, a2, a3)
        for pattern in PATTERNS:
            rows.append(LemmaRow(a1, a2, a3, pattern, per_sample_form(run, pattern)))
    return tuple(rows)


def check_triple_dataset(ds: TripleDataset) -> BooleReport:
    """Margins of a complete-triple dataset, computed (not assumed) exactly.

    The per-sample lemma guarantees the verdict is always "satisfied"; the
    margins are evaluated anyway so the theorem stays testable.
    """
    return boole_margins(correlations_from_triples(ds))


def check_pair_dataset(ds: PairDataset) -> BooleReport:
    """Margins of the three group averages; either verdict can occur."""
    return boole_margins(correlations_from_pairs(ds))
