"""Mining evaluation subsets that get worse as models get better.

Pool points are scored by the non-monotonicity of their accuracy profiles,
computed against a reference model's accuracy axis (the pool points come from
a different distribution, so their own log does not define p). The top-k
scorers per class, after an external filter, form the subset; a correlation
report then quantifies how strongly subset accuracy moves against reference
accuracy.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.special import ndtri

from .logstore import RunCollection
from .profiles import (
    AccuracyGrid,
    GRID_LENGTH,
    MIN_SPAN,
    accuracy_profile_matrix,
    reparameterize,
)
from .scoring import nmono_values

PROBIT_CLIP = 1e-6


@dataclass(frozen=True)
class SelectedPoint:
    point_id: int
    class_id: int
    score: float


@dataclass(frozen=True)
class NegSetManifest:
    selected: list[SelectedPoint]
    per_class_k: int
    filter_name: str
    provenance: str

    def point_ids(self) -> np.ndarray:
        return np.array([s.point_id for s in self.selected], dtype=np.int64)

    def to_json(self) -> str:
        payload = {
            "per_class_k": self.per_class_k,
            "filter_name": self.filter_name,
            "provenance": self.provenance,
            "selected": [
                {"point_id": s.point_id, "class": s.class_id, "score": s.score}
                for s in self.selected
            ],
        }
        return json.dumps(payload, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "NegSetManifest":
        payload = json.loads(text)
        return cls(
            selected=[
                SelectedPoint(
                    point_id=int(s["point_id"]),
                    class_id=int(s["class"]),
                    score=float(s["score"]),
                )
                for s in payload["selected"]
            ],
            per_class_k=int(payload["per_class_k"]),
            filter_name=str(payload.get("filter_name", "")),
            provenance=str(payload.get("provenance", "")),
        )


@dataclass(frozen=True)
class CorrelationReport:
    pairs: np.ndarray
    pearson_r: float
    slope: float

    def to_json(self) -> str:
        return json.dumps(
            {"pearson_r": self.pearson_r, "slope": self.slope, "pairs": len(self.pairs)},
            indent=2,
        ) + "\n"


def reference_axes(reference: RunCollection) -> list[np.ndarray]:
    """Running-best global accuracy of each reference run."""
    return [reparameterize(run)[0] for run in reference.runs]


def reference_grid(reference: RunCollection, length: int = GRID_LENGTH) -> AccuracyGrid:
    axes = reference_axes(reference)
    lo = max(float(p[0]) for p in axes)
    hi = min(float(p[-1]) for p in axes)
    if hi - lo < MIN_SPAN:
        raise ValueError(
            f"reference runs share no accuracy span (common range [{lo:.6g}, {hi:.6g}])"
        )
    return AccuracyGrid(p_min=lo, p_max=hi, length=length)


def score_pool(
    pool: RunCollection,
    reference: RunCollection,
    grid: AccuracyGrid | None = None,
    per_run: bool = False,
) -> np.ndarray:
    """Non-monotonicity score of every pool point on the reference p-axis.

    Default scores the run-averaged profile; ``per_run=True`` scores each
    run's curve separately and averages the scores instead.
    """
    _check_aligned(pool, reference)
    grid = grid or reference_grid(reference)
    axes = reference_axes(reference)
    if per_run:
        scores = np.zeros(pool.num_points)
        for r, run in enumerate(pool.runs):
            single = RunCollection(runs=[run])
            matrix = accuracy_profile_matrix(single, grid, p_axes=[axes[r]])
            scores += np.apply_along_axis(nmono_values, 1, matrix)
        return scores / len(pool.runs)
    matrix = accuracy_profile_matrix(pool, grid, p_axes=axes)
    return np.apply_along_axis(nmono_values, 1, matrix)


def _check_aligned(pool: RunCollection, reference: RunCollection) -> None:
    if len(pool.runs) != len(reference.runs):
        raise ValueError(
            f"pool has {len(pool.runs)} runs, reference has {len(reference.runs)}"
        )
    for r, (p_run, r_run) in enumerate(zip(pool.runs, reference.runs)):
        if len(p_run.checkpoints) != len(r_run.checkpoints):
            raise ValueError(
                f"run {r}: pool has {len(p_run.checkpoints)} checkpoints, "
                f"reference has {len(r_run.checkpoints)}"
            )


def build_negset(
    scores: np.ndarray,
    labels: np.ndarray,
    filter_mask: np.ndarray,
    k: int,
    point_ids: np.ndarray | None = None,
    filter_name: str = "none",
    provenance: str = "pool",
) -> NegSetManifest:
    """Top-k scorers per class among filtered points.

    Ties break toward the lowest point id, and the result is invariant to
    input row permutations (rows are canonicalized by point id first).
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    mask = np.asarray(filter_mask, dtype=bool)
    if not (scores.shape == labels.shape == mask.shape) or scores.ndim != 1:
        raise ValueError("scores, labels, and filter_mask must be matching 1-d arrays")
    if k <= 0:
        raise ValueError(f"per-class k must be positive, got {k}")
    if point_ids is None:
        ids = np.arange(scores.size, dtype=np.int64)
    else:
        ids = np.asarray(point_ids, dtype=np.int64)
        if ids.shape != scores.shape or np.unique(ids).size != ids.size:
            raise ValueError("point_ids must be unique and match the score rows")
    order = np.argsort(ids)
    ids, scores, labels, mask = ids[order], scores[order], labels[order], mask[order]

    selected: list[SelectedPoint] = []
    for class_id in np.unique(labels):
        candidates = np.flatnonzero((labels == class_id) & mask)
        if candidates.size < k:
            raise ValueError(
                f"class {int(class_id)} has {candidates.size} filtered points, "
                f"short {k - candidates.size} of k={k}"
            )
        # stable sort on descending score keeps the lowest point id among ties
        ranked = candidates[np.argsort(-scores[candidates], kind="stable")][:k]
        selected.extend(
            SelectedPoint(
                point_id=int(ids[i]), class_id=int(class_id), score=float(scores[i])
            )
            for i in ranked
        )
    return NegSetManifest(
        selected=selected, per_class_k=k, filter_name=filter_name, provenance=provenance
    )


def evaluate_correlation(
    manifest: NegSetManifest,
    pool: RunCollection,
    reference: RunCollection,
    probit: bool = False,
) -> CorrelationReport:
    """Correlate subset accuracy with reference accuracy across checkpoints.

    One pair per (run, checkpoint): x is the reference run's global accuracy,
    y the fraction of selected points the pool run got right. ``probit``
    rescales both axes by the inverse normal CDF (inputs clipped to
    [1e-6, 1 - 1e-6]).
    """
    _check_aligned(pool, reference)
    ids = manifest.point_ids()
    if ids.size == 0:
        raise ValueError("manifest selects no points")
    if ids.min() < 0 or ids.max() >= pool.num_points:
        bad = int(ids[np.argmax((ids < 0) | (ids >= pool.num_points))])
        raise ValueError(f"manifest references unknown point_id {bad}")
    xs, ys = [], []
    for p_run, r_run in zip(pool.runs, reference.runs):
        labels = p_run.labels[ids]
        for p_ck, r_ck in zip(p_run.checkpoints, r_run.checkpoints):
            predicted = np.argmax(p_ck.softmax[ids], axis=1)
            xs.append(r_ck.global_accuracy)
            ys.append(float(np.mean(predicted == labels)))
    x = np.array(xs)
    y = np.array(ys)
    if probit:
        x = ndtri(np.clip(x, PROBIT_CLIP, 1.0 - PROBIT_CLIP))
        y = ndtri(np.clip(y, PROBIT_CLIP, 1.0 - PROBIT_CLIP))
    return CorrelationReport(
        pairs=np.column_stack([x, y]), pearson_r=_pearson(x, y), slope=_slope(x, y)
    )


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    dx = x - x.mean()
    dy = y - y.mean()
    denom = float(np.sqrt(np.sum(dx * dx) * np.sum(dy * dy)))
    if denom == 0.0:
        return 0.0  # a constant axis carries no correlation signal
    return float(np.sum(dx * dy) / denom)


def _slope(x: np.ndarray, y: np.ndarray) -> float:
    dx = x - x.mean()
    var = float(np.sum(dx * dx))
    if var == 0.0:
        return 0.0
    return float(np.sum(dx * (y - y.mean())) / var)


def read_filter_csv(path: str | Path, num_points: int) -> np.ndarray:
    """Read a point_id,0|1 mask; missing ids default to excluded."""
    mask = np.zeros(num_points, dtype=bool)
    with open(path, newline="") as handle:
        for row in csv.reader(handle):
            if not row:
                continue
            if not row[0].strip().lstrip("-").isdigit():
                continue  # header line
            point_id, keep = int(row[0]), int(row[1])
            if not 0 <= point_id < num_points:
                raise ValueError(f"filter references unknown point_id {point_id}")
            mask[point_id] = bool(keep)
    return mask


def write_pairs_csv(report: CorrelationReport, path: str | Path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["p", "subset_accuracy"])
        for x, y in report.pairs:
            writer.writerow([repr(float(x)), repr(float(y))])
