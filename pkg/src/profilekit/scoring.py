"""Non-monotonicity scoring and the four-way curve taxonomy.

The score of a curve is its total negative variation: the summed magnitude of
every decrease between consecutive grid points. Zero means non-decreasing.
Curves scoring above a threshold are tagged NonMonotone; the rest are matched
to the closest of three reference shapes by RMS distance:

* Easy: always correct (constant 1)
* Hard: never correct (constant 0)
* Compatible: correctness tracks global accuracy (identity)
"""

from __future__ import annotations

import csv
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .logstore import RunCollection
from .profiles import AccuracyGrid, ProfileCurve, accuracy_profile_matrix, default_grid

NMONO_THRESHOLD = 0.1

LABEL_EASY = "Easy"
LABEL_HARD = "Hard"
LABEL_COMPATIBLE = "Compatible"
LABEL_NON_MONOTONE = "NonMonotone"

# Tie order for equal RMS distances, checked first to last.
TEMPLATE_ORDER = (LABEL_COMPATIBLE, LABEL_EASY, LABEL_HARD)

TEMPLATES: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    LABEL_EASY: np.ones_like,
    LABEL_HARD: np.zeros_like,
    LABEL_COMPATIBLE: np.asarray,
}


@dataclass(frozen=True)
class TaxonomyConfig:
    nmono_threshold: float = NMONO_THRESHOLD

    def __post_init__(self) -> None:
        if self.nmono_threshold < 0:
            raise ValueError(f"negative threshold {self.nmono_threshold}")


@dataclass(frozen=True)
class TaxonomyLabel:
    label: str
    nmono_score: float
    template_distances: dict[str, float]


@dataclass(frozen=True)
class TaxonomyResult:
    points: list[TaxonomyLabel]
    counts: dict[str, int] = field(default_factory=dict)


def nmono_values(values: np.ndarray) -> float:
    """Total negative variation of a sampled curve.

    Sum of max(0, v[i] - v[i+1]) over consecutive samples: 0 exactly for
    non-decreasing input, and bounded by (len - 1) times the value range.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size < 2:
        raise ValueError("non-monotonicity needs a 1-d curve with at least 2 samples")
    drops = v[:-1] - v[1:]
    return float(np.sum(drops[drops > 0.0], initial=0.0))


def nmono(curve: ProfileCurve) -> float:
    return nmono_values(curve.values)


def template_distances(values: np.ndarray, p: np.ndarray) -> dict[str, float]:
    """RMS distance from a curve to each reference shape, sampled on its grid."""
    v = np.asarray(values, dtype=np.float64)
    return {
        name: float(np.sqrt(np.mean((v - make(p)) ** 2)))
        for name, make in TEMPLATES.items()
    }


def classify(curve: ProfileCurve, cfg: TaxonomyConfig = TaxonomyConfig()) -> TaxonomyLabel:
    """Assign one accuracy curve to a taxonomy class."""
    if curve.kind != "accuracy":
        raise ValueError(f"taxonomy applies to accuracy curves, got {curve.kind!r}")
    return _classify_values(curve.values, curve.grid.values, cfg)


def _classify_values(
    values: np.ndarray, p: np.ndarray, cfg: TaxonomyConfig
) -> TaxonomyLabel:
    score = nmono_values(values)
    distances = template_distances(values, p)
    if score > cfg.nmono_threshold:
        return TaxonomyLabel(
            label=LABEL_NON_MONOTONE, nmono_score=score, template_distances=distances
        )
    best = min(TEMPLATE_ORDER, key=lambda name: distances[name])
    return TaxonomyLabel(label=best, nmono_score=score, template_distances=distances)


def decompose(
    coll: RunCollection,
    grid: AccuracyGrid | None = None,
    cfg: TaxonomyConfig = TaxonomyConfig(),
) -> TaxonomyResult:
    """Classify every evaluation point; counts always sum to num_points."""
    grid = grid or default_grid(coll)
    matrix = accuracy_profile_matrix(coll, grid)
    p = grid.values
    points = [_classify_values(row, p, cfg) for row in matrix]
    counts = Counter(item.label for item in points)
    for name in (*TEMPLATE_ORDER, LABEL_NON_MONOTONE):
        counts.setdefault(name, 0)
    return TaxonomyResult(points=points, counts=dict(counts))


def write_taxonomy_csv(result: TaxonomyResult, path: str | Path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["point_id", "label", "nmono", "rms_easy", "rms_hard", "rms_compatible"]
        )
        for i, item in enumerate(result.points):
            d = item.template_distances
            writer.writerow(
                [
                    i,
                    item.label,
                    repr(item.nmono_score),
                    repr(d[LABEL_EASY]),
                    repr(d[LABEL_HARD]),
                    repr(d[LABEL_COMPATIBLE]),
                ]
            )


def write_taxonomy_json(result: TaxonomyResult, path: str | Path) -> None:
    Path(path).write_text(json.dumps({"counts": result.counts}, indent=2) + "\n")
