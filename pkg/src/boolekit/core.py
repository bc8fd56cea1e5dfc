"""Domain types and exact correlation arithmetic for dichotomic (+/-1) data.

Two collection regimes are modeled:

* triple collection — every run alpha = 1..M records all three outcomes
  (a1, a2, a3), so the three pairwise averages F12, F13, F23 are computed
  from the same M runs;
* pair collection — runs are split into three groups labeled by the pair
  of settings measured together (12, 13, 23), and each average comes from
  its own group only.

All dataset-level correlations are kept as exact integer (sum, count)
pairs.  Division happens only on demand, as a `fractions.Fraction`, so no
floating-point rounding can ever manufacture or hide an inequality margin.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

__all__ = [
    "GroupLabel",
    "TripleRun",
    "TripleDataset",
    "PairRun",
    "GroupRuns",
    "PairDataset",
    "ExactCorrelation",
    "CorrelationTriple",
    "CorrelationValue",
    "validate_outcome",
    "pair_correlation",
    "correlations_from_triples",
    "correlations_from_pairs",
]

APPROX_RANGE_TOL = 1e-12


def validate_outcome(value: int) -> int:
    """Check that a measurement outcome is exactly +1 or -1."""
    if value != 1 and value != -1:
        raise ValueError(f"invalid outcome: {value!r} (must be +1 or -1)")
    return int(value)


def _validate_outcome_array(arr: np.ndarray, what: str) -> np.ndarray:
    arr = np.asarray(arr)
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.isin(arr, (-1, 1))):
            raise ValueError(f"invalid outcome in {what}: entries must be +1 or -1")
    elif not np.all((arr == 1) | (arr == -1)):
        raise ValueError(f"invalid outcome in {what}: entries must be +1 or -1")
    out = arr.astype(np.int8, copy=True)
    out.setflags(write=False)
    return out


class GroupLabel(Enum):
    """Which pair of settings a group of runs measures together."""

    G12 = "12"
    G13 = "13"
    G23 = "23"

    @property
    def settings(self) -> tuple[int, int]:
        """The two setting indices, lower first."""
        return _GROUP_SETTINGS[self]

    @property
    def index(self) -> int:
        """Stable position (0, 1, 2) used for ordering and random substreams."""
        return _GROUP_ORDER.index(self)


_GROUP_SETTINGS = {
    GroupLabel.G12: (1, 2),
    GroupLabel.G13: (1, 3),
    GroupLabel.G23: (2, 3),
}
_GROUP_ORDER = (GroupLabel.G12, GroupLabel.G13, GroupLabel.G23)


@dataclass(frozen=True)
class TripleRun:
    """One run of the triple-collection regime: all three outcomes present."""

    alpha: int
    a1: int
    a2: int
    a3: int

    def __post_init__(self) -> None:
        if self.alpha < 1:
            raise ValueError(f"run index must be >= 1, got {self.alpha}")
        for a in (self.a1, self.a2, self.a3):
            validate_outcome(a)

    @property
    def outcomes(self) -> tuple[int, int, int]:
        return (self.a1, self.a2, self.a3)


@dataclass(frozen=True, eq=False)
class TripleDataset:
    """An ordered list of complete triples, indexed alpha = 1..m.

    Backed by an (m, 3) int8 array; `runs` materializes TripleRun records
    on demand.  Immutable after construction.
    """

    outcomes: np.ndarray

    def __post_init__(self) -> None:
        arr = np.atleast_2d(np.asarray(self.outcomes))
        if arr.ndim != 2 or arr.shape[1] != 3:
            raise ValueError(f"triple outcomes must have shape (m, 3), got {arr.shape}")
        if arr.shape[0] < 1:
            raise ValueError("empty sample: a triple dataset needs at least one run")
        object.__setattr__(self, "outcomes", _validate_outcome_array(arr, "triple dataset"))

    @classmethod
    def from_runs(cls, runs: Iterable[TripleRun]) -> "TripleDataset":
        runs = list(runs)
        if not runs:
            raise ValueError("empty sample: a triple dataset needs at least one run")
        for pos, run in enumerate(runs, start=1):
            if run.alpha != pos:
                raise ValueError(
                    f"non-contiguous runs: expected alpha {pos}, got {run.alpha}"
                )
        return cls(np.array([run.outcomes for run in runs], dtype=np.int8))

    @property
    def m(self) -> int:
        return self.outcomes.shape[0]

    @cached_property
    def runs(self) -> tuple[TripleRun, ...]:
        return tuple(
            TripleRun(alpha, int(row[0]), int(row[1]), int(row[2]))
            for alpha, row in enumerate(self.outcomes, start=1)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TripleDataset):
            return NotImplemented
        return np.array_equal(self.outcomes, other.outcomes)

    def __repr__(self) -> str:
        return f"TripleDataset(m={self.m})"


@dataclass(frozen=True)
class PairRun:
    """One run of the pair-collection regime.

    Outcomes are ordered by ascending setting index within the group, so
    for group 13 `out_first` belongs to setting 1.  Time stamps are either
    both absent or both present with t_first <= t_second.
    """

    group: GroupLabel
    alpha: int
    out_first: int
    out_second: int
    t_first: float | None = None
    t_second: float | None = None

    def __post_init__(self) -> None:
        if self.alpha < 1:
            raise ValueError(f"run index must be >= 1, got {self.alpha}")
        validate_outcome(self.out_first)
        validate_outcome(self.out_second)
        if (self.t_first is None) != (self.t_second is None):
            raise ValueError("incomplete timestamps: t_first and t_second must both be set or both be absent")
        if self.t_first is not None and not (self.t_first <= self.t_second):
            raise ValueError(f"timestamps out of order: {self.t_first} > {self.t_second}")


@dataclass(frozen=True, eq=False)
class GroupRuns:
    """The runs of one group: an (m, 2) outcome array plus optional times."""

    group: GroupLabel
    outcomes: np.ndarray
    times: np.ndarray | None = None

    def __post_init__(self) -> None:
        arr = np.atleast_2d(np.asarray(self.outcomes))
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError(f"pair outcomes must have shape (m, 2), got {arr.shape}")
        if arr.shape[0] < 1:
            raise ValueError(f"empty group: {self.group.value}")
        object.__setattr__(
            self, "outcomes", _validate_outcome_array(arr, f"group {self.group.value}")
        )
        if self.times is not None:
            t = np.asarray(self.times, dtype=np.float64)
            if t.shape != self.outcomes.shape:
                raise ValueError(
                    f"times shape {t.shape} does not match outcomes shape {self.outcomes.shape}"
                )
            if not np.all(t[:, 0] <= t[:, 1]):
                raise ValueError("timestamps out of order: t_first > t_second")
            t = t.copy()
            t.setflags(write=False)
            object.__setattr__(self, "times", t)

    @property
    def m(self) -> int:
        return self.outcomes.shape[0]

    @property
    def products(self) -> np.ndarray:
        return self.outcomes[:, 0].astype(np.int64) * self.outcomes[:, 1]

    def runs(self) -> tuple[PairRun, ...]:
        out = []
        for alpha in range(1, self.m + 1):
            o = self.outcomes[alpha - 1]
            if self.times is None:
                out.append(PairRun(self.group, alpha, int(o[0]), int(o[1])))
            else:
                t = self.times[alpha - 1]
                out.append(
                    PairRun(self.group, alpha, int(o[0]), int(o[1]), float(t[0]), float(t[1]))
                )
        return tuple(out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupRuns):
            return NotImplemented
        if self.group is not other.group:
            return False
        if not np.array_equal(self.outcomes, other.outcomes):
            return False
        if (self.times is None) != (other.times is None):
            return False
        return self.times is None or np.array_equal(self.times, other.times)


@dataclass(frozen=True, eq=False)
class PairDataset:
    """Group-labeled pair runs: the laboratory collection regime.

    The three groups may have different sizes; each average only ever sees
    its own group's runs.
    """

    g12: GroupRuns
    g13: GroupRuns
    g23: GroupRuns

    def __post_init__(self) -> None:
        for attr, label in (("g12", GroupLabel.G12), ("g13", GroupLabel.G13), ("g23", GroupLabel.G23)):
            block = getattr(self, attr)
            if block.group is not label:
                raise ValueError(f"group mismatch: field {attr} holds group {block.group.value}")

    @classmethod
    def from_runs(cls, runs: Iterable[PairRun]) -> "PairDataset":
        by_group: dict[GroupLabel, list[PairRun]] = {g: [] for g in GroupLabel}
        for run in runs:
            block = by_group[run.group]
            if run.alpha != len(block) + 1:
                raise ValueError(
                    f"non-contiguous runs in group {run.group.value}: "
                    f"expected alpha {len(block) + 1}, got {run.alpha}"
                )
            block.append(run)
        blocks = {}
        for group, block in by_group.items():
            if not block:
                raise ValueError(f"empty group: {group.value}")
            timed = [r.t_first is not None for r in block]
            if any(timed) and not all(timed):
                raise ValueError(f"mixed timestamps in group {group.value}")
            outcomes = np.array([(r.out_first, r.out_second) for r in block], dtype=np.int8)
            times = (
                np.array([(r.t_first, r.t_second) for r in block], dtype=np.float64)
                if all(timed)
                else None
            )
            blocks[group] = GroupRuns(group, outcomes, times)
        return cls(blocks[GroupLabel.G12], blocks[GroupLabel.G13], blocks[GroupLabel.G23])

    def group(self, label: GroupLabel) -> GroupRuns:
        return {GroupLabel.G12: self.g12, GroupLabel.G13: self.g13, GroupLabel.G23: self.g23}[label]

    @property
    def groups(self) -> tuple[GroupRuns, GroupRuns, GroupRuns]:
        return (self.g12, self.g13, self.g23)

    @property
    def m1(self) -> int:
        return self.g12.m

    @property
    def m2(self) -> int:
        return self.g13.m

    @property
    def m3(self) -> int:
        return self.g23.m

    @property
    def counts(self) -> tuple[int, int, int]:
        return (self.m1, self.m2, self.m3)

    @property
    def runs_12(self) -> tuple[PairRun, ...]:
        return self.g12.runs()

    @property
    def runs_13(self) -> tuple[PairRun, ...]:
        return self.g13.runs()

    @property
    def runs_23(self) -> tuple[PairRun, ...]:
        return self.g23.runs()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PairDataset):
            return NotImplemented
        return self.g12 == other.g12 and self.g13 == other.g13 and self.g23 == other.g23

    def __repr__(self) -> str:
        return f"PairDataset(m1={self.m1}, m2={self.m2}, m3={self.m3})"


@dataclass(frozen=True)
class ExactCorrelation:
    """A pairwise average held exactly as (sum of +/-1 products, count).

    Invariants: |sum| <= count, sum and count share parity, count >= 1.
    """

    sum: int
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        if abs(self.sum) > self.count:
            raise ValueError(f"|sum| = {abs(self.sum)} exceeds count = {self.count}")
        if (self.sum - self.count) % 2 != 0:
            raise ValueError(
                f"parity violation: sum {self.sum} and count {self.count} must agree mod 2"
            )

    @property
    def value(self) -> Fraction:
        return Fraction(self.sum, self.count)

    def __float__(self) -> float:
        return self.sum / self.count


CorrelationValue = Union[ExactCorrelation, Fraction, float]


def _component_fraction(value: CorrelationValue) -> Fraction:
    """Exact rational form of one correlation component.

    Floats are dyadic rationals, so the conversion is lossless; margins
    derived from it are exact for every input representation.
    """
    if isinstance(value, ExactCorrelation):
        return value.value
    if isinstance(value, Fraction):
        return value
    return Fraction(*float(value).as_integer_ratio())


@dataclass(frozen=True)
class CorrelationTriple:
    """The three pairwise averages (f12, f13, f23).

    Components are ExactCorrelation or Fraction (exact) or float
    (approximate, e.g. externally supplied targets).  The triple counts as
    exact only if every component is exact.
    """

    f12: CorrelationValue
    f13: CorrelationValue
    f23: CorrelationValue

    def __post_init__(self) -> None:
        for name, comp in (("f12", self.f12), ("f13", self.f13), ("f23", self.f23)):
            if isinstance(comp, bool) or not isinstance(comp, (ExactCorrelation, Fraction, int, float)):
                raise TypeError(
                    f"{name} must be ExactCorrelation, Fraction, or float, got {type(comp).__name__}"
                )
            if isinstance(comp, int):
                # plain ints (0, 1, -1) are exact targets
                object.__setattr__(self, name, Fraction(comp))
                comp = getattr(self, name)
            exact = isinstance(comp, (ExactCorrelation, Fraction))
            limit = Fraction(1) if exact else 1 + Fraction(APPROX_RANGE_TOL)
            if abs(_component_fraction(comp)) > limit:
                raise ValueError(f"correlation out of range: {name} = {comp}")

    @property
    def exact(self) -> bool:
        return all(
            isinstance(c, (ExactCorrelation, Fraction)) for c in (self.f12, self.f13, self.f23)
        )

    @property
    def representation(self) -> str:
        return "exact" if self.exact else "approximate"

    @property
    def components(self) -> tuple[CorrelationValue, CorrelationValue, CorrelationValue]:
        return (self.f12, self.f13, self.f23)

    def fractions(self) -> tuple[Fraction, Fraction, Fraction]:
        """All three components as exact rationals (lossless for floats)."""
        return (
            _component_fraction(self.f12),
            _component_fraction(self.f13),
            _component_fraction(self.f23),
        )


def pair_correlation(products: Sequence[int] | np.ndarray) -> ExactCorrelation:
    """Exact average of a nonempty list of +/-1 outcome products."""
    arr = np.asarray(products)
    if arr.size == 0:
        raise ValueError("empty sample")
    if arr.ndim != 1:
        raise ValueError(f"products must be one-dimensional, got shape {arr.shape}")
    if not np.all((arr == 1) | (arr == -1)):
        raise ValueError("invalid outcome: products must be +1 or -1")
    return ExactCorrelation(int(arr.astype(np.int64).sum()), int(arr.size))


def correlations_from_triples(ds: TripleDataset) -> CorrelationTriple:
    """F12, F13, F23 from the same M complete runs (exact)."""
    o = ds.outcomes.astype(np.int64)
    return CorrelationTriple(
        pair_correlation(o[:, 0] * o[:, 1]),
        pair_correlation(o[:, 0] * o[:, 2]),
        pair_correlation(o[:, 1] * o[:, 2]),
    )


def correlations_from_pairs(ds: PairDataset) -> CorrelationTriple:
    """Group averages: each component computed from its own group only."""
    return CorrelationTriple(
        pair_correlation(ds.g12.products),
        pair_correlation(ds.g13.products),
        pair_correlation(ds.g23.products),
    )
