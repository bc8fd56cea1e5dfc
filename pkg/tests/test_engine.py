"""Four-facet evaluation, the per-sample lemma, and dataset checks."""

import itertools
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boolekit.core import (
    CorrelationTriple,
    GroupLabel,
    GroupRuns,
    PairDataset,
    TripleDataset,
    TripleRun,
)
from boolekit.engine import (
    PATTERNS,
    SIGN_TRIPLES,
    SignPattern,
    boole_margins,
    check_pair_dataset,
    check_triple_dataset,
    exhaustive_lemma,
    per_sample_form,
)

correlation_floats = st.floats(min_value=-1.0, max_value=1.0)


def margins_oracle(f12, f13, f23):
    """Independent facet arithmetic on exact rationals."""
    return {
        p: 1 - (p.s12 * Fraction(f12) + p.s13 * Fraction(f13) + p.s23 * Fraction(f23))
        for p in PATTERNS
    }


def absolute_value_oracle(f12, f13, f23):
    """Direct encoding of the two absolute-value inequalities."""
    f12, f13, f23 = Fraction(f12), Fraction(f13), Fraction(f23)
    return abs(f12 + f13) <= 1 + f23 and abs(f12 - f13) <= 1 - f23


class TestSignPattern:
    def test_exactly_four(self):
        assert len(PATTERNS) == 4
        assert {p.signs for p in PATTERNS} == {(1, 1, -1), (1, -1, 1), (-1, 1, 1), (-1, -1, -1)}

    def test_product_is_minus_one(self):
        for p in PATTERNS:
            assert p.s12 * p.s13 * p.s23 == -1

    def test_inadmissible_rejected(self):
        with pytest.raises(ValueError, match="inadmissible"):
            SignPattern.from_signs(1, 1, 1)

    def test_keys(self):
        assert [p.key for p in PATTERNS] == ["ppm", "pmp", "mpp", "mmm"]


class TestBooleMargins:
    def test_center(self):
        r = boole_margins(CorrelationTriple(0, 0, 0))
        assert all(m == 1 for m in r.margins.values())
        assert r.verdict == "satisfied"
        assert r.violation_amount == 0

    def test_perfectly_correlated_boundary(self):
        r = boole_margins(CorrelationTriple(1, 1, 1))
        assert sorted(r.margins.values()) == [0, 0, 0, 4]
        assert r.verdict == "satisfied"

    def test_pair_regime_point(self):
        r = boole_margins(CorrelationTriple(1, 1, -1))
        assert r.worst_pattern is SignPattern.PPM
        assert r.margins[SignPattern.PPM] == -2
        assert r.verdict == "violated"
        assert r.violation_amount == 2

    def test_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            boole_margins(CorrelationTriple(Fraction(5, 4), 0, 0))

    @given(correlation_floats, correlation_floats, correlation_floats)
    def test_facet_sum_identity(self, f12, f13, f23):
        r = boole_margins(CorrelationTriple(f12, f13, f23))
        assert sum(r.margins.values()) == 4

    @given(correlation_floats, correlation_floats, correlation_floats)
    def test_matches_margin_oracle(self, f12, f13, f23):
        r = boole_margins(CorrelationTriple(f12, f13, f23))
        assert r.margins == margins_oracle(f12, f13, f23)

    @given(correlation_floats, correlation_floats, correlation_floats)
    def test_equivalent_to_absolute_value_form(self, f12, f13, f23):
        r = boole_margins(CorrelationTriple(f12, f13, f23))
        all_nonnegative = all(m >= 0 for m in r.margins.values())
        assert all_nonnegative == absolute_value_oracle(f12, f13, f23)

    def test_exact_boundary_not_flapping(self):
        # margin exactly 0 is lawful: satisfied, exact comparison
        r = boole_margins(CorrelationTriple(Fraction(1), Fraction(1), Fraction(1)))
        assert r.exact and r.verdict == "satisfied"


class TestPerSampleForm:
    def test_all_plus(self):
        assert per_sample_form(TripleRun(1, 1, 1, 1), SignPattern.PPM) == 1

    def test_enumeration_examples(self):
        # oracle: recompute from products independently
        def oracle(a1, a2, a3, s):
            return s.s12 * (a1 * a2) + s.s13 * (a1 * a3) + s.s23 * (a2 * a3)

        run = TripleRun(1, 1, -1, -1)
        assert per_sample_form(run, SignPattern.PPM) == oracle(1, -1, -1, SignPattern.PPM) == -3
        run = TripleRun(1, -1, 1, -1)
        assert per_sample_form(run, SignPattern.MMM) == oracle(-1, 1, -1, SignPattern.MMM) == 1

    def test_range_exhaustive(self):
        for (a1, a2, a3), p in itertools.product(SIGN_TRIPLES, PATTERNS):
            assert per_sample_form(TripleRun(1, a1, a2, a3), p) in (1, -3)


class TestExhaustiveLemma:
    def test_row_count(self):
        assert len(exhaustive_lemma()) == 32

    def test_value_multiset_per_pattern(self):
        rows = exhaustive_lemma()
        for p in PATTERNS:
            values = Counter(r.value for r in rows if r.pattern is p)
            assert values == Counter({1: 6, -3: 2})

    def test_extremes(self):
        values = [r.value for r in exhaustive_lemma()]
        assert max(values) == 1
        assert min(values) == -3

    def test_covers_all_triples(self):
        rows = exhaustive_lemma()
        assert {(r.a1, r.a2, r.a3) for r in rows} == set(SIGN_TRIPLES)


class TestCheckTripleDataset:
    def test_single_run(self):
        r = check_triple_dataset(TripleDataset(np.array([(1, 1, 1)], dtype=np.int8)))
        assert r.verdict == "satisfied"
        assert r.min_margin == 0

    def test_hand_computed(self):
        ds = TripleDataset(np.array([(1, 1, -1), (-1, 1, 1)], dtype=np.int8))
        r = check_triple_dataset(ds)
        # correlations (0, -1, 0); margins multiset {0, 0, 2, 2}
        assert sorted(r.margins.values()) == [0, 0, 2, 2]
        assert r.verdict == "satisfied"

    @given(st.lists(st.sampled_from(SIGN_TRIPLES), min_size=1, max_size=100))
    def test_theorem_property(self, rows):
        r = check_triple_dataset(TripleDataset(np.array(rows, dtype=np.int8)))
        assert r.verdict == "satisfied"
        assert r.min_margin >= 0

    @settings(max_examples=25)
    @given(
        st.lists(st.sampled_from(SIGN_TRIPLES), min_size=1, max_size=50),
        st.lists(st.sampled_from(SIGN_TRIPLES), min_size=1, max_size=50),
    )
    def test_monotone_aggregation(self, rows_a, rows_b):
        """Concatenation margin is the run-count-weighted mean of the parts."""
        ra = check_triple_dataset(TripleDataset(np.array(rows_a, dtype=np.int8)))
        rb = check_triple_dataset(TripleDataset(np.array(rows_b, dtype=np.int8)))
        rc = check_triple_dataset(TripleDataset(np.array(rows_a + rows_b, dtype=np.int8)))
        na, nb = len(rows_a), len(rows_b)
        for p in PATTERNS:
            expected = (na * ra.margins[p] + nb * rb.margins[p]) / (na + nb)
            assert rc.margins[p] == expected


class TestCheckPairDataset:
    def test_unconstrained_point(self):
        ds = PairDataset(
            GroupRuns(GroupLabel.G12, np.array([(1, 1)], dtype=np.int8)),
            GroupRuns(GroupLabel.G13, np.array([(1, 1)], dtype=np.int8)),
            GroupRuns(GroupLabel.G23, np.array([(1, -1)], dtype=np.int8)),
        )
        r = check_pair_dataset(ds)
        assert r.verdict == "violated"
        assert r.violation_amount == 2

    @given(st.lists(st.sampled_from(SIGN_TRIPLES), min_size=1, max_size=40))
    def test_triple_marginals_satisfy(self, rows):
        """Pair groups copied from one triple dataset reduce to the theorem."""
        arr = np.array(rows, dtype=np.int8)
        ds = PairDataset(
            GroupRuns(GroupLabel.G12, arr[:, (0, 1)]),
            GroupRuns(GroupLabel.G13, arr[:, (0, 2)]),
            GroupRuns(GroupLabel.G23, arr[:, (1, 2)]),
        )
        r = check_pair_dataset(ds)
        assert r.verdict == "satisfied"
