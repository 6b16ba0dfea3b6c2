"""Streaming k-center clustering under per-group center caps.

One-pass solvers at a fixed radius guess (general two-group streams and
group-sorted streams), a geometric radius-guess ladder that removes the
known-radius assumption, and verification tooling: an exhaustive oracle, a
farthest-first baseline, and a planted-dataset generator with a known
optimum.
"""

from .core import (
    EUCLIDEAN,
    CenterSet,
    Dataset,
    DistanceMetric,
    FairnessSpec,
    Point,
    Violation,
    check_fairness,
    clustering_cost,
    distance,
)
from .independent import IndependentSet, OfferResult, OfferStatus
from .ladder import Ladder, LadderResult, run_known
from .oracle import (
    GenerationError,
    OracleResult,
    PlantedDataset,
    SizeGuardError,
    brute_force_opt,
    candidate_radii,
    generate_planted,
    gonzalez,
)
from .semi import SemiInstance, StreamOrderError
from .solver import (
    CrossGroupGraph,
    InfeasibleReason,
    SolveOutcome,
    StreamInstance,
    build_cross_graph,
    select_with_both_groups_over,
    select_with_one_group_over,
)

__all__ = [
    "EUCLIDEAN",
    "CenterSet",
    "CrossGroupGraph",
    "Dataset",
    "DistanceMetric",
    "FairnessSpec",
    "GenerationError",
    "IndependentSet",
    "InfeasibleReason",
    "Ladder",
    "LadderResult",
    "OfferResult",
    "OfferStatus",
    "OracleResult",
    "PlantedDataset",
    "Point",
    "SemiInstance",
    "SizeGuardError",
    "SolveOutcome",
    "StreamInstance",
    "StreamOrderError",
    "Violation",
    "brute_force_opt",
    "build_cross_graph",
    "candidate_radii",
    "check_fairness",
    "clustering_cost",
    "distance",
    "generate_planted",
    "gonzalez",
    "run_known",
    "select_with_both_groups_over",
    "select_with_one_group_over",
]
