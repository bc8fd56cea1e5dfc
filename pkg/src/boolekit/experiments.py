"""Pair-collection protocols under context-free and contextual models.

A measurement model is a hidden-variable strategy: every run draws a
fresh preparation state lam, and each measured setting i in {1, 2, 3}
maps (i, lam) to a +/-1 outcome.  The `context_free` flag is the
operational encoding of preparation-only physics ("outcomes depend only
on the preparation"): when it is set, the protocol never hands the
outcome rule the group label or the measurement time, so the rule cannot
depend on them even in principle.

Context-free models, run in pair-collection mode, reproduce inequality-
satisfying correlations up to sampling noise (restoring the one-to-one
correspondence regime statistically).  Contextual models are free to
violate, and two concrete constructions here do so maximally:

* the doctors scenario — three examiners, examination date decides which
  pair examines, and one examiner's verdict is a deterministic function
  of the date.  Everything is a plain function of (examiner, date), yet
  the group averages come out (1, 1, -1): violation amount 2, the
  algebraic maximum.
* the telegraph scenario — the source emits a random telegraph process
  (flip rate gamma, so correlation exp(-2*gamma*tau) over a gap tau),
  settings map to times (i-1)*delta, and the apparatus imprints a
  per-group sign on the outcome.  Flipping a single sign in group 23
  turns expected correlations (x, x^2, x) into (x, x^2, -x), which
  violates the inequality whenever x > sqrt(2) - 1.

All randomness is reproducible: each group draws from its own substream
of the master seed, so datasets and reports are bit-identical across
runs for equal arguments.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

import numpy as np

from .core import (
    CorrelationTriple,
    GroupLabel,
    GroupRuns,
    PairDataset,
    TripleDataset,
    correlations_from_pairs,
    correlations_from_triples,
)
from .engine import BooleReport, boole_margins, check_pair_dataset

__all__ = [
    "MeasurementModel",
    "Schedule",
    "ExperimentReport",
    "SearchResult",
    "Strategy",
    "run_pair_protocol",
    "run_triple_protocol",
    "doctor_outcome",
    "doctors_scenario",
    "identity_signs",
    "g23_flip_signs",
    "telegraph_model",
    "telegraph_expected_correlations",
    "telegraph_scenario",
    "violation_search_deterministic",
    "strategy_is_context_free",
    "random_context_free_model",
    "context_free_property_run",
]

GROUP_ORDER = (GroupLabel.G12, GroupLabel.G13, GroupLabel.G23)

# Substream salts: groups use 0..2, triple mode 3, model construction 97.
_TRIPLE_STREAM = 3
_MODEL_STREAM = 97

Strategy = tuple[tuple[int, int], tuple[int, int], tuple[int, int]]


def _entropy(seed) -> tuple[int, ...]:
    if isinstance(seed, (tuple, list)):
        return tuple(int(s) for s in seed)
    return (int(seed),)


def _substream(seed, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(_entropy(seed) + (index,)))


@dataclass(frozen=True)
class MeasurementModel:
    """A hidden-variable strategy: preparation sampler plus outcome rule.

    sample_hidden(rng, n) draws n fresh preparation states as an array
    (any per-run encoding; rows are runs).  outcome_rule(setting, hidden)
    returns +/-1 outcomes vectorized over runs; contextual models (with
    context_free=False) additionally receive keyword arguments `group`
    and `times`.  Context-free rules never see those arguments at all.
    """

    context_free: bool
    sample_hidden: Callable[[np.random.Generator, int], np.ndarray]
    outcome_rule: Callable[..., np.ndarray]
    description: str = ""


@dataclass(frozen=True)
class Schedule:
    """Per-run group assignment with optional measurement times.

    Each entry is (group, t_first, t_second); times are both present or
    both absent, ordered.  A run's alpha is its position within its group.
    """

    entries: tuple[tuple[GroupLabel, float | None, float | None], ...]

    def __post_init__(self) -> None:
        seen_times: dict[GroupLabel, bool] = {}
        for group, t1, t2 in self.entries:
            if (t1 is None) != (t2 is None):
                raise ValueError("incomplete timestamps in schedule entry")
            if t1 is not None and not (t1 <= t2):
                raise ValueError(f"timestamps out of order: {t1} > {t2}")
            timed = t1 is not None
            if seen_times.setdefault(group, timed) != timed:
                raise ValueError(f"mixed timestamps in group {group.value}")

    @classmethod
    def uniform(
        cls,
        m_per_group: int,
        times: Mapping[GroupLabel, tuple[float, float]] | None = None,
    ) -> "Schedule":
        if m_per_group < 1:
            raise ValueError(f"m_per_group must be >= 1, got {m_per_group}")
        entries = []
        for group in GROUP_ORDER:
            t1, t2 = times[group] if times is not None else (None, None)
            entries.extend([(group, t1, t2)] * m_per_group)
        return cls(tuple(entries))

    def group_count(self, group: GroupLabel) -> int:
        return sum(1 for g, _, _ in self.entries if g is group)

    def group_times(self, group: GroupLabel) -> np.ndarray | None:
        rows = [(t1, t2) for g, t1, t2 in self.entries if g is group]
        if not rows or rows[0][0] is None:
            return None
        return np.array(rows, dtype=np.float64)

    @property
    def counts(self) -> tuple[int, int, int]:
        return tuple(self.group_count(g) for g in GROUP_ORDER)


@dataclass(frozen=True)
class ExperimentReport:
    """Exact correlations and inequality margins of one protocol run."""

    correlations: CorrelationTriple
    boole: BooleReport
    counts: tuple[int, ...]
    description: str
    seed: int | tuple[int, ...] | None

    @property
    def violation_amount(self) -> Fraction:
        return self.boole.violation_amount


def _rule_outcomes(
    model: MeasurementModel,
    setting: int,
    hidden: np.ndarray,
    n: int,
    group: GroupLabel,
    times: np.ndarray | None,
) -> np.ndarray:
    if model.context_free:
        raw = model.outcome_rule(setting, hidden)
    else:
        raw = model.outcome_rule(setting, hidden, group=group, times=times)
    out = np.broadcast_to(np.asarray(raw), (n,))
    if not np.all((out == 1) | (out == -1)):
        raise ValueError(f"invalid outcome from rule for setting {setting}")
    return out.astype(np.int8)


def run_pair_protocol(
    model: MeasurementModel, schedule: Schedule, seed
) -> tuple[PairDataset, ExperimentReport]:
    """Run the pair-collection protocol: fresh lam per run, two settings each.

    Every group draws from its own substream of `seed`, so results are
    deterministic and independent of the order groups are processed in.
    """
    blocks = {}
    for group in GROUP_ORDER:
        n = schedule.group_count(group)
        if n < 1:
            raise ValueError(f"empty group: {group.value}")
        times = schedule.group_times(group)
        rng = _substream(seed, group.index)
        hidden = np.asarray(model.sample_hidden(rng, n))
        if hidden.shape[0] != n:
            raise ValueError(
                f"hidden sampler returned {hidden.shape[0]} rows, expected {n}"
            )
        i, j = group.settings
        t1 = times[:, 0] if times is not None else None
        t2 = times[:, 1] if times is not None else None
        out_first = _rule_outcomes(model, i, hidden, n, group, t1)
        out_second = _rule_outcomes(model, j, hidden, n, group, t2)
        blocks[group] = GroupRuns(group, np.stack([out_first, out_second], axis=1), times)
    ds = PairDataset(blocks[GroupLabel.G12], blocks[GroupLabel.G13], blocks[GroupLabel.G23])
    correlations = correlations_from_pairs(ds)
    report = ExperimentReport(
        correlations=correlations,
        boole=boole_margins(correlations),
        counts=ds.counts,
        description=model.description,
        seed=seed if isinstance(seed, int) else tuple(seed),
    )
    return ds, report


def run_triple_protocol(
    model: MeasurementModel, m: int, seed
) -> tuple[TripleDataset, ExperimentReport]:
    """Run the complete-triple protocol: one lam per run, all three settings.

    Only meaningful for context-free models (there is no group context to
    hand a contextual rule).
    """
    if not model.context_free:
        raise ValueError("triple-collection protocol requires a context-free model")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    rng = _substream(seed, _TRIPLE_STREAM)
    hidden = np.asarray(model.sample_hidden(rng, m))
    columns = [
        _rule_outcomes(model, i, hidden, m, GroupLabel.G12, None) for i in (1, 2, 3)
    ]
    ds = TripleDataset(np.stack(columns, axis=1))
    correlations = correlations_from_triples(ds)
    report = ExperimentReport(
        correlations=correlations,
        boole=boole_margins(correlations),
        counts=(m,),
        description=model.description,
        seed=seed if isinstance(seed, int) else tuple(seed),
    )
    return ds, report


# --------------------------------------------------------------------------
# Doctors scenario
# --------------------------------------------------------------------------

def doctor_outcome(doctor: int, date: int) -> int:
    """Examination verdict: a deterministic function of (doctor, date) only.

    Doctors 1 and 3 always find +1.  Doctor 2 finds +1 on dates assigned
    to pair 12 and -1 on dates assigned to pair 23 (the local, everyday
    kind of date dependence: nothing else enters).
    """
    if doctor not in (1, 2, 3):
        raise ValueError(f"doctor must be 1, 2, or 3, got {doctor}")
    if doctor == 2 and date % 3 == 2:
        return -1
    return 1


_DATE_GROUP = {0: GroupLabel.G12, 1: GroupLabel.G13, 2: GroupLabel.G23}


def doctors_scenario(
    num_dates: int, m_per_date: int
) -> tuple[PairDataset, ExperimentReport]:
    """Pair collection by examination date with date-dependent verdicts.

    Date d is examined by pair 12, 13, or 23 according to d mod 3; every
    date sees m_per_date patients.  The verdicts are local functions of
    (doctor, date), yet the three group averages are exactly (1, 1, -1):
    the inequality is violated by the algebraic maximum 2.
    """
    if num_dates < 3 or num_dates % 3 != 0:
        raise ValueError(f"num_dates must be a positive multiple of 3, got {num_dates}")
    if m_per_date < 1:
        raise ValueError(f"m_per_date must be >= 1, got {m_per_date}")
    rows: dict[GroupLabel, list[tuple[int, int]]] = {g: [] for g in GROUP_ORDER}
    for date in range(1, num_dates + 1):
        group = _DATE_GROUP[date % 3]
        i, j = group.settings
        pair = (doctor_outcome(i, date), doctor_outcome(j, date))
        rows[group].extend([pair] * m_per_date)
    blocks = {
        g: GroupRuns(g, np.array(rows[g], dtype=np.int8)) for g in GROUP_ORDER
    }
    ds = PairDataset(blocks[GroupLabel.G12], blocks[GroupLabel.G13], blocks[GroupLabel.G23])
    correlations = correlations_from_pairs(ds)
    report = ExperimentReport(
        correlations=correlations,
        boole=boole_margins(correlations),
        counts=ds.counts,
        description=f"doctors scenario: {num_dates} dates, {m_per_date} patients per date",
        seed=None,
    )
    return ds, report


# --------------------------------------------------------------------------
# Telegraph scenario
# --------------------------------------------------------------------------

SignSchedule = Mapping[GroupLabel, tuple[int, int]]


def identity_signs() -> dict[GroupLabel, tuple[int, int]]:
    """Apparatus signs that leave every outcome untouched."""
    return {g: (1, 1) for g in GROUP_ORDER}


def g23_flip_signs() -> dict[GroupLabel, tuple[int, int]]:
    """Apparatus signs flipping exactly one outcome: setting 3 in group 23."""
    signs = identity_signs()
    signs[GroupLabel.G23] = (1, -1)
    return signs


def telegraph_model(
    gamma: float, delta: float, sign_schedule: SignSchedule
) -> MeasurementModel:
    """Random-telegraph source with a per-group apparatus sign imprint.

    The hidden state of a run is the process sampled at the three setting
    times (i-1)*delta: uniform initial sign, then independent Poisson flip
    counts over each delta-length segment.  The outcome for setting i in
    group g is sign_schedule[g][position] * lam(t_i); consulting g is what
    makes the model contextual.
    """
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    if delta <= 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    signs = {g: tuple(sign_schedule[g]) for g in GROUP_ORDER}
    for g, pair in signs.items():
        if any(s not in (1, -1) for s in pair):
            raise ValueError(f"sign schedule for group {g.value} must be +/-1, got {pair}")

    def sample_hidden(rng: np.random.Generator, n: int) -> np.ndarray:
        lam0 = (rng.integers(0, 2, n, dtype=np.int8) * 2 - 1).astype(np.int8)
        flips1 = np.where(rng.poisson(gamma * delta, n) % 2 == 0, 1, -1).astype(np.int8)
        flips2 = np.where(rng.poisson(gamma * delta, n) % 2 == 0, 1, -1).astype(np.int8)
        v1 = lam0
        v2 = v1 * flips1
        v3 = v2 * flips2
        return np.stack([v1, v2, v3], axis=1)

    def outcome_rule(setting, hidden, *, group, times):
        position = group.settings.index(setting)
        return signs[group][position] * hidden[:, setting - 1]

    return MeasurementModel(
        context_free=False,
        sample_hidden=sample_hidden,
        outcome_rule=outcome_rule,
        description=f"telegraph model: gamma={gamma}, delta={delta}",
    )


def telegraph_expected_correlations(
    gamma: float, delta: float, sign_schedule: SignSchedule
) -> tuple[float, float, float]:
    """Analytic group averages: sign product times exp(-2*gamma*gap)."""
    out = []
    for group in GROUP_ORDER:
        i, j = group.settings
        gap = (j - i) * delta
        s1, s2 = sign_schedule[group]
        out.append(s1 * s2 * math.exp(-2.0 * gamma * gap))
    return tuple(out)


def telegraph_scenario(
    gamma: float,
    delta: float,
    sign_schedule: SignSchedule,
    m_per_group: int,
    seed,
) -> tuple[PairDataset, ExperimentReport]:
    """Pair collection on the telegraph model with time-stamped runs."""
    model = telegraph_model(gamma, delta, sign_schedule)
    times = {
        g: ((g.settings[0] - 1) * delta, (g.settings[1] - 1) * delta)
        for g in GROUP_ORDER
    }
    schedule = Schedule.uniform(m_per_group, times=times)
    ds, report = run_pair_protocol(model, schedule, seed)
    return ds, report


# --------------------------------------------------------------------------
# Deterministic strategy search
# --------------------------------------------------------------------------

_PAIR_ASSIGNMENTS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


@dataclass(frozen=True)
class SearchResult:
    """Outcome of the exhaustive deterministic-strategy search."""

    best_strategy: Strategy
    violation_amount: Fraction
    maximizers: tuple[Strategy, ...]
    searched: int


def _strategy_dataset(strategy: Strategy) -> PairDataset:
    blocks = {
        g: GroupRuns(g, np.array([strategy[g.index]], dtype=np.int8))
        for g in GROUP_ORDER
    }
    return PairDataset(blocks[GroupLabel.G12], blocks[GroupLabel.G13], blocks[GroupLabel.G23])


def strategy_is_context_free(strategy: Strategy) -> bool:
    """True iff every setting gets one value across both groups measuring it."""
    g12, g13, g23 = strategy
    return g12[0] == g13[0] and g12[1] == g23[0] and g13[1] == g23[1]


def violation_search_deterministic(context_free_only: bool = False) -> SearchResult:
    """Exhaustively search deterministic group-contextual strategies.

    A strategy lets each group independently assign +/-1 to its two
    settings (4^3 = 64 in total); each one induces a single-run-per-group
    pair dataset.  The maximum violation amount is exactly 2.  Restricted
    to the 8 strategies constant across groups (the context-free
    subfamily), the maximum is exactly 0: that restriction recreates
    complete triples, where the per-sample lemma applies.
    """
    if context_free_only:
        strategies: Iterable[Strategy] = (
            ((a1, a2), (a1, a3), (a2, a3))
            for a1, a2, a3 in itertools.product((1, -1), repeat=3)
        )
    else:
        strategies = itertools.product(_PAIR_ASSIGNMENTS, repeat=3)

    best_strategy: Strategy | None = None
    best_amount = Fraction(-1)
    maximizers: list[Strategy] = []
    searched = 0
    for strategy in strategies:
        searched += 1
        report = check_pair_dataset(_strategy_dataset(strategy))
        amount = report.violation_amount
        if amount > best_amount:
            best_amount = amount
            best_strategy = strategy
            maximizers = [strategy]
        elif amount == best_amount:
            maximizers.append(strategy)
    return SearchResult(
        best_strategy=best_strategy,
        violation_amount=best_amount,
        maximizers=tuple(maximizers),
        searched=searched,
    )


# --------------------------------------------------------------------------
# Context-free model sweeps
# --------------------------------------------------------------------------

def random_context_free_model(seed, trial: int) -> MeasurementModel:
    """A random finite-alphabet table model, deterministic in (seed, trial).

    Alphabet size 2..8, Dirichlet-uniform preparation distribution, and a
    uniformly random +/-1 outcome table indexed by (lam, setting).
    """
    rng = _substream(_entropy(seed) + (trial,), _MODEL_STREAM)
    alphabet = int(rng.integers(2, 9))
    weights = rng.dirichlet(np.ones(alphabet))
    table = (rng.integers(0, 2, size=(alphabet, 3), dtype=np.int8) * 2 - 1).astype(np.int8)

    def sample_hidden(r: np.random.Generator, n: int) -> np.ndarray:
        return r.choice(alphabet, size=n, p=weights)

    def outcome_rule(setting: int, hidden: np.ndarray) -> np.ndarray:
        return table[hidden, setting - 1]

    return MeasurementModel(
        context_free=True,
        sample_hidden=sample_hidden,
        outcome_rule=outcome_rule,
        description=f"random table model: alphabet size {alphabet}, trial {trial}",
    )


def context_free_property_run(
    model: MeasurementModel | None,
    m_per_group: int,
    trials: int,
    seed,
) -> Fraction:
    """Worst facet margin over pair-protocol runs of context-free models.

    With model=None a fresh random table model is drawn per trial; with a
    model given, that model is rerun with per-trial hidden-variable
    streams.  Context-free models satisfy the inequality in expectation,
    so the worst margin obeys the -5*sqrt(3)/sqrt(m_per_group) sampling
    bound (three independent group averages, each with variance <= 1/m).
    """
    if model is not None and not model.context_free:
        raise ValueError("property run requires a context-free model")
    if m_per_group < 100:
        raise ValueError(f"m_per_group must be >= 100, got {m_per_group}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    schedule = Schedule.uniform(m_per_group)
    worst: Fraction | None = None
    for trial in range(trials):
        current = model if model is not None else random_context_free_model(seed, trial)
        _, report = run_pair_protocol(current, schedule, _entropy(seed) + (trial,))
        trial_min = report.boole.min_margin
        if worst is None or trial_min < worst:
            worst = trial_min
    return worst
