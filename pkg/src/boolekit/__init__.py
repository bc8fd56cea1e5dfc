"""Exact Boole-inequality analysis for dichotomic (+/-1) data.

The library separates two data-collection regimes for three two-valued
observables: complete triples (one run yields all three outcomes, which
provably cannot violate |F12 +/- F13| <= 1 +/- F23) and group-labeled
pairs (the laboratory regime, unconstrained — up to the algebraic
maximum violation of 2).  It decides which correlation targets are
realizable by a joint distribution, synthesizes witness datasets, and
simulates pair-collection protocols under context-free and contextual
measurement models.
"""

from ._version import __version__
from .core import (
    CorrelationTriple,
    ExactCorrelation,
    GroupLabel,
    GroupRuns,
    PairDataset,
    PairRun,
    TripleDataset,
    TripleRun,
    correlations_from_pairs,
    correlations_from_triples,
    pair_correlation,
)
from .engine import (
    PATTERNS,
    SIGN_TRIPLES,
    BooleReport,
    LemmaRow,
    SignPattern,
    boole_margins,
    check_pair_dataset,
    check_triple_dataset,
    exhaustive_lemma,
    per_sample_form,
)
from .experiments import (
    ExperimentReport,
    MeasurementModel,
    Schedule,
    SearchResult,
    context_free_property_run,
    doctor_outcome,
    doctors_scenario,
    g23_flip_signs,
    identity_signs,
    random_context_free_model,
    run_pair_protocol,
    run_triple_protocol,
    telegraph_expected_correlations,
    telegraph_model,
    telegraph_scenario,
    violation_search_deterministic,
)
from .representability import (
    FeasibilityResult,
    InfeasibleTargetsError,
    JointDistribution,
    achievable_set_bruteforce,
    find_joint_distribution,
    is_triple_representable,
    parity_compatible,
    synthesize_triples,
)

__all__ = [
    "__version__",
    "CorrelationTriple",
    "ExactCorrelation",
    "GroupLabel",
    "GroupRuns",
    "PairDataset",
    "PairRun",
    "TripleDataset",
    "TripleRun",
    "correlations_from_pairs",
    "correlations_from_triples",
    "pair_correlation",
    "PATTERNS",
    "SIGN_TRIPLES",
    "BooleReport",
    "LemmaRow",
    "SignPattern",
    "boole_margins",
    "check_pair_dataset",
    "check_triple_dataset",
    "exhaustive_lemma",
    "per_sample_form",
    "ExperimentReport",
    "MeasurementModel",
    "Schedule",
    "SearchResult",
    "context_free_property_run",
    "doctor_outcome",
    "doctors_scenario",
    "g23_flip_signs",
    "identity_signs",
    "random_context_free_model",
    "run_pair_protocol",
    "run_triple_protocol",
    "telegraph_expected_correlations",
    "telegraph_model",
    "telegraph_scenario",
    "violation_search_deterministic",
    "FeasibilityResult",
    "InfeasibleTargetsError",
    "JointDistribution",
    "achievable_set_bruteforce",
    "find_joint_distribution",
    "is_triple_representable",
    "parity_compatible",
    "synthesize_triples",
]
