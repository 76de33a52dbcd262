"""Scalar skill-vs-difficulty learners and their ordering properties.

Each learner has a skill s, each point a difficulty d, and the chance of a
correct answer is the normal CDF of s - d. Because that map is strictly
increasing in s - d, all learners in a family rank points identically
(universality) and every point's accuracy rises with skill (accuracy
monotonicity). Both checks below are exhaustive over an accuracy table and
return a concrete counterexample when the property fails.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .report import CheckReport


def normal_cdf(x: np.ndarray | float) -> np.ndarray | float:
    return 0.5 * (1.0 + erf(np.asarray(x) / np.sqrt(2.0)))


@dataclass(frozen=True)
class SkillModel:
    skills: np.ndarray
    difficulties: np.ndarray

    def __post_init__(self) -> None:
        for name, arr in (("skills", self.skills), ("difficulties", self.difficulties)):
            if arr.ndim != 1 or arr.size == 0:
                raise ValueError(f"{name} must be a non-empty 1-d array")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains a non-finite value")

    def accuracy_table(self) -> np.ndarray:
        """(num_skills, num_points) accuracy matrix."""
        return normal_cdf(self.skills[:, np.newaxis] - self.difficulties[np.newaxis, :])


def skill_accuracy(model: SkillModel, skill_index: int, point_index: int) -> float:
    """Accuracy of one learner on one point."""
    gap = model.skills[skill_index] - model.difficulties[point_index]
    return float(normal_cdf(gap))


def random_skill_model(
    rng: np.random.Generator, num_skills: int, num_points: int, spread: float = 2.0
) -> SkillModel:
    # spread stays small enough that the CDF never saturates to the same
    # float for distinct gaps, keeping the induced point order strict
    return SkillModel(
        skills=rng.uniform(-spread, spread, size=num_skills),
        difficulties=rng.uniform(-spread, spread, size=num_points),
    )


def _as_table(table: SkillModel | np.ndarray) -> np.ndarray:
    if isinstance(table, SkillModel):
        return table.accuracy_table()
    arr = np.asarray(table, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"accuracy table must be 2-d, got shape {arr.shape}")
    return arr


def check_universality(table: SkillModel | np.ndarray) -> CheckReport:
    """Do all learners order the points the same way?

    Exhaustive: the columns are sorted lexicographically, and every adjacent
    column pair must be either identical or strictly larger in every row;
    by transitivity that decides every pair of points. The witness names two
    points and two learners that rank them oppositely (or tie under one and
    not the other).
    """
    acc = _as_table(table)
    num_algs, num_points = acc.shape
    if num_algs <= 1 or num_points <= 1:
        return CheckReport(name="universality", passed=True)
    order = np.lexsort(acc[::-1])
    ranked = acc[:, order]
    step = ranked[:, 1:] - ranked[:, :-1]
    consistent = np.all(step > 0.0, axis=0) | np.all(step == 0.0, axis=0)
    if np.all(consistent):
        return CheckReport(name="universality", passed=True)
    j = int(np.argmin(consistent))
    d = step[:, j]
    witness = {
        "points": [int(order[j]), int(order[j + 1])],
        "skills": [int(np.argmax(d <= 0.0)), int(np.argmax(d > 0.0))],
    }
    return CheckReport(name="universality", passed=False, witness=witness)


def check_accuracy_monotonicity(
    table: SkillModel | np.ndarray, resource_order: np.ndarray | None = None
) -> CheckReport:
    """Is every point's accuracy non-decreasing along the resource order?

    Rows of the table are learners; ``resource_order`` reorders them (for a
    SkillModel, sort indices by skill). Exhaustive over points and steps;
    the witness names the first (point, step) where accuracy drops.
    """
    acc = _as_table(table)
    if resource_order is not None:
        idx = np.asarray(resource_order, dtype=np.int64)
        if sorted(idx.tolist()) != list(range(acc.shape[0])):
            raise ValueError("resource_order must permute the table rows")
        acc = acc[idx]
    step = np.diff(acc, axis=0)
    bad = np.argwhere(step < 0.0)
    if bad.size == 0:
        return CheckReport(name="accuracy_monotonicity", passed=True)
    k, z = (int(v) for v in bad[0])
    return CheckReport(
        name="accuracy_monotonicity",
        passed=False,
        witness={"point": z, "step": k},
    )
