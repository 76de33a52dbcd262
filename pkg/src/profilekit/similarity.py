"""Distances between softmax distributions and between whole profiles.

Profile distances integrate a pointwise distribution metric along the shared
accuracy grid (trapezoid rule, normalized by the grid span), so two training
procedures are compared by how differently they treat the same point across
the whole accuracy range, not at a single checkpoint.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from ._parallel import pmap
from .logstore import RunCollection
from .profiles import (
    AccuracyGrid,
    ProfileCurve,
    SoftmaxProfile,
    accuracy_profile_matrix,
)

METRIC_KINDS = ("tv", "kl", "cosine")
DISTRIBUTION_SUM_TOL = 1e-6


@dataclass(frozen=True)
class DistributionMetric:
    kind: str
    epsilon: float = 1e-12

    def __post_init__(self) -> None:
        if self.kind not in METRIC_KINDS:
            raise ValueError(f"unknown metric {self.kind!r}")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


def dist(metric: DistributionMetric, q1: np.ndarray, q2: np.ndarray) -> float:
    """Distance between two probability vectors under the chosen metric."""
    a = _check_distribution(q1, "q1")
    b = _check_distribution(q2, "q2")
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    if metric.kind == "tv":
        return 0.5 * float(np.abs(a - b).sum())
    if metric.kind == "kl":
        a = _clamp_renormalize(a, metric.epsilon)
        b = _clamp_renormalize(b, metric.epsilon)
        return float(np.sum(a * np.log(a / b)))
    dot = float(np.dot(a, b))
    return 1.0 - dot / (float(np.linalg.norm(a)) * float(np.linalg.norm(b)))


def _check_distribution(q: np.ndarray, name: str) -> np.ndarray:
    arr = np.asarray(q, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d vector")
    if float(arr.min()) < 0.0:
        raise ValueError(f"{name} has a negative entry")
    total = float(arr.sum())
    if abs(total - 1.0) > DISTRIBUTION_SUM_TOL:
        raise ValueError(f"{name} sums to {total:.8g}, not a distribution")
    return arr


def _clamp_renormalize(q: np.ndarray, epsilon: float) -> np.ndarray:
    clamped = np.maximum(q, epsilon)
    return clamped / clamped.sum()


def profile_distance(
    prof_a: SoftmaxProfile, prof_b: SoftmaxProfile, metric: DistributionMetric
) -> float:
    """Span-normalized trapezoidal integral of dist along the accuracy grid."""
    ga, gb = prof_a.grid, prof_b.grid
    if (ga.p_min, ga.p_max, ga.length) != (gb.p_min, gb.p_max, gb.length):
        raise ValueError(
            f"grid mismatch: [{ga.p_min}, {ga.p_max}]x{ga.length} vs "
            f"[{gb.p_min}, {gb.p_max}]x{gb.length}"
        )
    p = ga.values
    pointwise = np.array(
        [
            dist(metric, prof_a.distributions[i], prof_b.distributions[i])
            for i in range(ga.length)
        ]
    )
    return float(np.trapezoid(pointwise, p) / (ga.p_max - ga.p_min))


def pairwise_matrix(
    families: Sequence[tuple[str, Mapping[int, SoftmaxProfile]]],
    metric: DistributionMetric,
) -> tuple[list[str], np.ndarray]:
    """All-pairs mean profile distance between named profile families.

    Entry (i, j) averages profile_distance over the points both families
    cover. KL entries keep their direction (first index is the left
    argument); nothing is symmetrized.
    """
    if not families:
        raise ValueError("no families to compare")
    names = [name for name, _ in families]
    n = len(families)

    def entry(pair: tuple[int, int]) -> float:
        i, j = pair
        _, prof_i = families[i]
        _, prof_j = families[j]
        shared = sorted(set(prof_i) & set(prof_j))
        if not shared:
            raise ValueError(f"families {names[i]!r} and {names[j]!r} share no points")
        return float(
            np.mean([profile_distance(prof_i[z], prof_j[z], metric) for z in shared])
        )

    pairs = [(i, j) for i in range(n) for j in range(n)]
    matrix = np.array(pmap(entry, pairs)).reshape(n, n)
    return names, matrix


def pointwise_gap(
    coll_a: RunCollection,
    coll_b: RunCollection,
    grid: AccuracyGrid,
) -> ProfileCurve:
    """Mean absolute accuracy-profile gap between two procedures, per grid p.

    Both collections must evaluate the same point set; the result is a curve
    in [0, 1] that is identically 0 when the procedures behave alike.
    """
    if coll_a.num_points != coll_b.num_points:
        raise ValueError(
            f"point sets differ: {coll_a.num_points} vs {coll_b.num_points} points"
        )
    prof_a = accuracy_profile_matrix(coll_a, grid)
    prof_b = accuracy_profile_matrix(coll_b, grid)
    gap = np.mean(np.abs(prof_a - prof_b), axis=0)
    return ProfileCurve(grid=grid, values=gap, kind="accuracy")


def write_matrix_csv(names: Sequence[str], matrix: np.ndarray, path: str | Path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow([""] + list(names))
        for name, row in zip(names, matrix):
            writer.writerow([name] + [repr(float(v)) for v in row])
