"""profilekit: pointwise learning profiles over checkpointed evaluation logs.

The library turns per-checkpoint softmax logs into per-point profiles on a
shared global-accuracy axis, scores and classifies their monotonicity,
compares training procedures through profile distances, mines evaluation
subsets whose accuracy moves against the reference model's, and ships small
closed-form learner models whose profile behavior can be verified exactly.
"""

from .logstore import (
    Checkpoint,
    LogFormatError,
    RunCollection,
    RunLog,
    build_runlog,
    compute_global_accuracy,
    load_log,
    merge_runs,
    save_log,
)
from .profiles import (
    AccuracyGrid,
    ProfileCurve,
    SoftmaxProfile,
    accuracy_profile,
    default_grid,
    entropy_profile,
    reparameterize,
    shared_grid,
    smooth_and_grid,
    soft_accuracy_profile,
    softmax_profile,
)
from .scoring import TaxonomyConfig, TaxonomyLabel, classify, decompose, nmono, nmono_values
from .similarity import (
    DistributionMetric,
    dist,
    pairwise_matrix,
    pointwise_gap,
    profile_distance,
)
from .negset import (
    CorrelationReport,
    NegSetManifest,
    build_negset,
    evaluate_correlation,
    score_pool,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyGrid",
    "Checkpoint",
    "CorrelationReport",
    "DistributionMetric",
    "LogFormatError",
    "NegSetManifest",
    "ProfileCurve",
    "RunCollection",
    "RunLog",
    "SoftmaxProfile",
    "TaxonomyConfig",
    "TaxonomyLabel",
    "accuracy_profile",
    "build_negset",
    "build_runlog",
    "classify",
    "compute_global_accuracy",
    "decompose",
    "default_grid",
    "dist",
    "entropy_profile",
    "evaluate_correlation",
    "load_log",
    "merge_runs",
    "nmono",
    "nmono_values",
    "pairwise_matrix",
    "pointwise_gap",
    "profile_distance",
    "reparameterize",
    "save_log",
    "score_pool",
    "shared_grid",
    "smooth_and_grid",
    "soft_accuracy_profile",
    "softmax_profile",
]
