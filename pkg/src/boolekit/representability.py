"""Which correlation targets are realizable by complete-triple data.

A target triple (f12, f13, f23) is realizable by a joint distribution on
{+1,-1}^3 (equivalently, by a dataset of complete triples) exactly when
all four facet margins are nonnegative.  The forward direction is the
per-sample lemma; the converse is constructive via the product-correction
mixture

    w(a1, a2, a3) = (1 + f12*a1*a2 + f13*a1*a3 + f23*a2*a3) / 8,

whose eight cell weights are precisely facet-margin/8 (each facet twice,
once per global sign), so nonnegativity of the weights *is* nonnegativity
of the margins, and the induced pairwise correlations reproduce the
targets identically.  Single-variable marginals are left free; only the
pairwise correlations are constrained.

Everything here is exact: weights are rationals, synthesis rounds them to
integer multiplicities deterministically, and a brute-force enumeration
over all 8^m assignments serves as the validation oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .core import CorrelationTriple, ExactCorrelation, TripleDataset
from .engine import PATTERNS, SIGN_TRIPLES, BooleReport, SignPattern, boole_margins

__all__ = [
    "JointDistribution",
    "FeasibilityResult",
    "InfeasibleTargetsError",
    "FLOAT_FEASIBILITY_TOL",
    "is_triple_representable",
    "find_joint_distribution",
    "synthesize_triples",
    "parity_compatible",
    "achievable_set_bruteforce",
]

# Boundary tolerance for approximate (float) targets; exact targets use 0.
FLOAT_FEASIBILITY_TOL = 1e-9

# The two cells of a class share a1a2, a1a3 and hence the same weight; the
# class of (a1,a2,a3) maps to the facet with signs (-a1a2, -a1a3, -a2a3).
_CLASS_PATTERN = {
    triple: SignPattern.from_signs(
        -triple[0] * triple[1], -triple[0] * triple[2], -triple[1] * triple[2]
    )
    for triple in SIGN_TRIPLES
}


class InfeasibleTargetsError(ValueError):
    """Raised when targets violate a facet; carries the violated facet."""

    def __init__(self, certificate: SignPattern, margin: Fraction) -> None:
        self.certificate = certificate
        self.margin = margin
        super().__init__(
            f"targets are not triple-representable: facet {certificate.key} "
            f"has margin {margin}"
        )


@dataclass(frozen=True)
class JointDistribution:
    """A probability distribution on the 8 sign triples, exact weights."""

    weights: Mapping[tuple[int, int, int], Fraction]

    def __post_init__(self) -> None:
        missing = [t for t in SIGN_TRIPLES if t not in self.weights]
        if missing:
            raise ValueError(f"weights missing sign triples: {missing}")
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("weights must be nonnegative")
        total = sum(self.weights.values())
        if total != 1:
            raise ValueError(f"weights must sum to 1, got {total}")

    def correlation(self, i: int, j: int) -> Fraction:
        """Induced pairwise average sum_a w(a) * a_i * a_j (1-based i < j)."""
        return sum(
            (w * (t[i - 1] * t[j - 1]) for t, w in self.weights.items()),
            start=Fraction(0),
        )

    def correlations(self) -> CorrelationTriple:
        return CorrelationTriple(
            self.correlation(1, 2), self.correlation(1, 3), self.correlation(2, 3)
        )


@dataclass(frozen=True)
class FeasibilityResult:
    """Either a realizing distribution or the violated facet, never both."""

    distribution: JointDistribution | None = None
    certificate: SignPattern | None = None

    def __post_init__(self) -> None:
        if (self.distribution is None) == (self.certificate is None):
            raise ValueError("exactly one of distribution/certificate must be set")

    @property
    def feasible(self) -> bool:
        return self.distribution is not None


def is_triple_representable(c: CorrelationTriple, tol: float = 0.0) -> bool:
    """True iff all four facet margins are >= -tol."""
    report = boole_margins(c)
    bound = -Fraction(tol) if tol else Fraction(0)
    return report.min_margin >= bound


def _mixture_weights(report: BooleReport) -> dict[tuple[int, int, int], Fraction]:
    return {t: report.margins[_CLASS_PATTERN[t]] / 8 for t in SIGN_TRIPLES}


def find_joint_distribution(
    c: CorrelationTriple, tol: float | None = None
) -> FeasibilityResult:
    """Construct a realizing distribution, or certify which facet forbids one.

    tol widens the feasible side for approximate targets (default 0 for
    exact inputs, FLOAT_FEASIBILITY_TOL for floats); margins inside
    [-tol, 0) are clamped to zero and the weights renormalized, which
    perturbs the reproduced correlations by at most a few multiples of tol.
    """
    if tol is None:
        tol = 0.0 if c.exact else FLOAT_FEASIBILITY_TOL
    report = boole_margins(c)
    if report.min_margin >= 0:
        return FeasibilityResult(distribution=JointDistribution(_mixture_weights(report)))
    if report.min_margin >= -Fraction(tol):
        weights = {t: max(Fraction(0), w) for t, w in _mixture_weights(report).items()}
        total = sum(weights.values())
        weights = {t: w / total for t, w in weights.items()}
        return FeasibilityResult(distribution=JointDistribution(weights))
    return FeasibilityResult(certificate=report.worst_pattern)


def _class_order_key(triple: tuple[int, int, int]) -> tuple[int, ...]:
    # plus-first lexicographic: +1 sorts before -1
    return tuple(0 if a == 1 else 1 for a in triple)


def _class_counts(report: BooleReport, m: int) -> dict[tuple[int, int, int], int]:
    """Largest-remainder rounding of m * class weight over the 4 cell classes.

    Rounding over the equal-weight classes (rather than the 8 raw cells)
    bounds every correlation error by 2/m: the errors sum to zero, and the
    topped-up classes hold the largest remainders.  Ties break in
    lexicographic order of the class representative (the a1 = +1 cell).
    """
    reps = [t for t in SIGN_TRIPLES if t[0] == 1]
    reps.sort(key=_class_order_key)
    targets = [m * report.margins[_CLASS_PATTERN[rep]] / 4 for rep in reps]
    floors = [int(t) for t in targets]  # targets are nonnegative
    remainders = [t - f for t, f in zip(targets, floors)]
    leftover = m - sum(floors)
    order = sorted(range(4), key=lambda i: (-remainders[i], i))
    for i in order[:leftover]:
        floors[i] += 1
    return dict(zip(reps, floors))


def synthesize_triples(c: CorrelationTriple, m: int) -> TripleDataset:
    """A deterministic m-run dataset whose correlations approximate c.

    Targets must be exact rationals and representable.  Empirical
    correlations land within 2/m of the targets, and exactly on them when
    m times every facet margin is a multiple of 4 (integer class counts).
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if not c.exact:
        raise ValueError("synthesis requires exact rational targets")
    report = boole_margins(c)
    if report.min_margin < 0:
        raise InfeasibleTargetsError(report.worst_pattern, report.min_margin)

    counts = _class_counts(report, m)
    rows: list[tuple[int, int, int]] = []
    multiplicity = {t: 0 for t in SIGN_TRIPLES}
    for rep, n in counts.items():
        partner = (-rep[0], -rep[1], -rep[2])
        multiplicity[rep] = n - n // 2  # lexicographically smaller cell gets the extra
        multiplicity[partner] = n // 2
    for triple in sorted(SIGN_TRIPLES, key=_class_order_key):
        rows.extend([triple] * multiplicity[triple])
    return TripleDataset(np.array(rows, dtype=np.int8))


def parity_compatible(c: CorrelationTriple, m: int) -> bool:
    """True iff m times every facet margin is a multiple of 4.

    Exactly then do the mixture's class counts come out integral and
    synthesis reproduces the targets with no rounding at all.  Every
    triple achievable with m runs satisfies this: m * margin equals 4
    times the number of runs in the facet's value -3 class.
    """
    report = boole_margins(c)
    for margin in report.margins.values():
        scaled = m * margin
        if scaled.denominator != 1 or scaled.numerator % 4 != 0:
            return False
    return True


def achievable_set_bruteforce(m: int) -> frozenset[CorrelationTriple]:
    """All exact correlation triples reachable by some m-run triple dataset.

    Enumerates all 8^m outcome assignments (m <= 6, at most 262144), the
    validation oracle for the facet criterion.
    """
    if not 1 <= m <= 6:
        raise ValueError(f"m must be in 1..6, got {m}")
    n = 8**m
    digits = np.empty((n, m), dtype=np.int64)
    idx = np.arange(n)
    for k in range(m):
        digits[:, m - 1 - k] = (idx // (8**k)) % 8
    triples = np.array(SIGN_TRIPLES, dtype=np.int8)
    outcomes = triples[digits]  # (n, m, 3)
    s12 = (outcomes[:, :, 0] * outcomes[:, :, 1]).sum(axis=1, dtype=np.int64)
    s13 = (outcomes[:, :, 0] * outcomes[:, :, 2]).sum(axis=1, dtype=np.int64)
    s23 = (outcomes[:, :, 1] * outcomes[:, :, 2]).sum(axis=1, dtype=np.int64)
    sums = np.unique(np.stack([s12, s13, s23], axis=1), axis=0)
    return frozenset(
        CorrelationTriple(
            ExactCorrelation(int(a), m),
            ExactCorrelation(int(b), m),
            ExactCorrelation(int(cc), m),
        )
        for a, b, cc in sums
    )
