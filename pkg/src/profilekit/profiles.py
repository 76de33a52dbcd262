"""Pointwise learning profiles on a shared global-accuracy axis.

Raw logs index checkpoints by training resource. Profiles reparameterize each
run by its running-best global accuracy p (monotone by construction), smooth
the per-checkpoint statistic with a Gaussian kernel in checkpoint-index units,
linearly interpolate onto an equally spaced p grid, and average across runs.
Smoothing happens before pooling, which keeps the whole pipeline linear in
the per-run curves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.ndimage import gaussian_filter1d
from scipy.special import entr

from .logstore import RunCollection, RunLog

GRID_LENGTH = 50
SMOOTHING_SIGMA = 2.0
KERNEL_TRUNCATE = 4.0
MIN_SPAN = 1e-6

CURVE_KINDS = ("accuracy", "soft_accuracy", "entropy", "neg_entropy")


@dataclass(frozen=True)
class AccuracyGrid:
    """Equally spaced global-accuracy values profiles are evaluated on."""

    p_min: float
    p_max: float
    length: int = GRID_LENGTH

    def __post_init__(self) -> None:
        if not self.p_min < self.p_max:
            raise ValueError(f"empty grid span [{self.p_min}, {self.p_max}]")
        if self.length < 2:
            raise ValueError("grid needs at least two points")

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.length)


@dataclass(frozen=True)
class ProfileCurve:
    grid: AccuracyGrid
    values: np.ndarray
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in CURVE_KINDS:
            raise ValueError(f"unknown curve kind {self.kind!r}")
        if self.values.shape != (self.grid.length,):
            raise ValueError(
                f"curve has {self.values.shape} values for a grid of length "
                f"{self.grid.length}"
            )


@dataclass(frozen=True)
class SoftmaxProfile:
    """Expected softmax distribution at each grid accuracy."""

    grid: AccuracyGrid
    distributions: np.ndarray

    def __post_init__(self) -> None:
        d = self.distributions
        if d.ndim != 2 or d.shape[0] != self.grid.length:
            raise ValueError(
                f"distributions have shape {d.shape} for a grid of length "
                f"{self.grid.length}"
            )
        if d.size and float(d.min()) < 0.0:
            raise ValueError("softmax profile has a negative probability")
        sums = d.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > 1e-6):
            row = int(np.argmax(np.abs(sums - 1.0) > 1e-6))
            raise ValueError(
                f"softmax profile row {row} sums to {sums[row]:.8g}, expected 1"
            )


def reparameterize(run: RunLog) -> tuple[np.ndarray, np.ndarray]:
    """Map a run onto its accuracy axis.

    Returns (p, matrices) where p is the running max of global accuracy over
    checkpoints and matrices stacks the softmax snapshots (T, N, C). Running
    max ties are kept; downstream interpolation lets the latest checkpoint at
    a given p win.
    """
    if len(run.checkpoints) < 2:
        raise ValueError(
            f"run {run.run_id!r} has {len(run.checkpoints)} checkpoints; "
            "reparameterization needs at least 2"
        )
    acc = np.array([ck.global_accuracy for ck in run.checkpoints])
    stack = np.stack([ck.softmax for ck in run.checkpoints])
    return np.maximum.accumulate(acc), stack


def smooth_and_grid(
    sample_p: np.ndarray,
    sample_values: np.ndarray,
    grid: AccuracyGrid,
    sigma: float = SMOOTHING_SIGMA,
) -> np.ndarray:
    """Gaussian-smooth a per-checkpoint series and resample it on the grid.

    The kernel acts in checkpoint-index units (sigma checkpoints, reflect
    padding, truncated at 4 sigma); the smoothed samples are then linearly
    interpolated at the grid accuracies. Queries outside the sampled p range
    take the nearest endpoint value.
    """
    p = np.asarray(sample_p, dtype=np.float64)
    v = np.asarray(sample_values, dtype=np.float64)
    if p.shape != v.shape or p.ndim != 1:
        raise ValueError("sample_p and sample_values must be matching 1-d arrays")
    if p.size < 2:
        raise ValueError("smoothing needs at least two samples")
    if np.any(np.diff(p) < 0):
        raise ValueError("sample accuracies must be non-decreasing")
    if p[-1] - p[0] < MIN_SPAN:
        raise ValueError(
            f"degenerate accuracy range [{p[0]:.6g}, {p[-1]:.6g}]; nothing to profile"
        )
    smoothed = gaussian_filter1d(v, sigma=sigma, mode="reflect", truncate=KERNEL_TRUNCATE)
    return np.interp(grid.values, p, smoothed)


def default_grid(coll: RunCollection, length: int = GRID_LENGTH) -> AccuracyGrid:
    """Grid spanning the accuracy range every run covers.

    Lower edge: the largest starting accuracy across runs. Upper edge: the
    smallest final (best) accuracy. Runs that barely move, or that do not
    overlap, leave no common span and raise.
    """
    starts, ends = [], []
    for run in runs_of(coll):
        p, _ = reparameterize(run)
        starts.append(p[0])
        ends.append(p[-1])
    lo, hi = max(starts), min(ends)
    if hi - lo < MIN_SPAN:
        raise ValueError(
            f"runs share no accuracy span (common range [{lo:.6g}, {hi:.6g}])"
        )
    return AccuracyGrid(p_min=float(lo), p_max=float(hi), length=length)


def shared_grid(
    colls: Sequence[RunCollection], length: int = GRID_LENGTH
) -> AccuracyGrid:
    """Grid on the accuracy span common to several collections."""
    grids = [default_grid(coll, length) for coll in colls]
    lo = max(g.p_min for g in grids)
    hi = min(g.p_max for g in grids)
    if hi - lo < MIN_SPAN:
        raise ValueError(
            f"collections share no accuracy span (common range [{lo:.6g}, {hi:.6g}])"
        )
    return AccuracyGrid(p_min=lo, p_max=hi, length=length)


def runs_of(coll: RunCollection | RunLog) -> list[RunLog]:
    if isinstance(coll, RunLog):
        return [coll]
    return coll.runs


def _indicators(run: RunLog) -> np.ndarray:
    """(T, N) matrix of 0/1 correctness; argmax ties go to the lowest class."""
    stack = np.stack([np.argmax(ck.softmax, axis=1) for ck in run.checkpoints])
    return (stack == run.labels[np.newaxis, :]).astype(np.float64)


def _normalized_rows(matrix: np.ndarray) -> np.ndarray:
    rows = matrix.astype(np.float64)
    return rows / rows.sum(axis=1, keepdims=True)


def accuracy_profile(
    coll: RunCollection,
    point_id: int,
    grid: AccuracyGrid | None = None,
    sigma: float = SMOOTHING_SIGMA,
) -> ProfileCurve:
    """Expected correctness of one point as a function of global accuracy."""
    grid = grid or default_grid(coll)
    _check_point(coll, point_id)
    curves = []
    for run in coll.runs:
        p, _ = reparameterize(run)
        curves.append(smooth_and_grid(p, _indicators(run)[:, point_id], grid, sigma))
    values = np.clip(np.mean(curves, axis=0), 0.0, 1.0)
    return ProfileCurve(grid=grid, values=values, kind="accuracy")


def softmax_profile(
    coll: RunCollection,
    point_id: int,
    grid: AccuracyGrid | None = None,
    sigma: float = SMOOTHING_SIGMA,
) -> SoftmaxProfile:
    """Expected softmax distribution of one point along the accuracy axis.

    Each class channel is smoothed and gridded independently; the averaged
    vectors are renormalized per grid point so every row is a distribution.
    """
    grid = grid or default_grid(coll)
    _check_point(coll, point_id)
    per_run = []
    for run in coll.runs:
        p, stack = reparameterize(run)
        rows = _normalized_rows(stack[:, point_id, :])
        channels = [
            smooth_and_grid(p, rows[:, c], grid, sigma) for c in range(rows.shape[1])
        ]
        per_run.append(np.stack(channels, axis=1))
    mean = np.clip(np.mean(per_run, axis=0), 0.0, None)
    return SoftmaxProfile(grid=grid, distributions=mean / mean.sum(axis=1, keepdims=True))


def soft_accuracy_profile(
    coll: RunCollection,
    point_id: int,
    grid: AccuracyGrid | None = None,
    sigma: float = SMOOTHING_SIGMA,
) -> ProfileCurve:
    """True-label channel of the softmax profile."""
    profile = softmax_profile(coll, point_id, grid, sigma)
    label = int(coll.labels[point_id])
    return ProfileCurve(
        grid=profile.grid,
        values=profile.distributions[:, label].copy(),
        kind="soft_accuracy",
    )


def entropy_profile(
    coll: RunCollection,
    point_id: int,
    grid: AccuracyGrid | None = None,
    sigma: float = SMOOTHING_SIGMA,
    negate: bool = False,
) -> ProfileCurve:
    """Expected Shannon entropy (nats) of one point's softmax distribution.

    ``negate=True`` flips the sign and tags the curve ``neg_entropy``, the
    orientation where learning should be non-decreasing.
    """
    grid = grid or default_grid(coll)
    _check_point(coll, point_id)
    cap = float(np.log(coll.num_classes))
    curves = []
    for run in coll.runs:
        p, stack = reparameterize(run)
        rows = _normalized_rows(stack[:, point_id, :])
        entropy = entr(rows).sum(axis=1)
        curves.append(smooth_and_grid(p, entropy, grid, sigma))
    values = np.clip(np.mean(curves, axis=0), 0.0, cap)
    if negate:
        return ProfileCurve(grid=grid, values=-values, kind="neg_entropy")
    return ProfileCurve(grid=grid, values=values, kind="entropy")


def accuracy_profile_matrix(
    coll: RunCollection,
    grid: AccuracyGrid,
    p_axes: Sequence[np.ndarray] | None = None,
    sigma: float = SMOOTHING_SIGMA,
) -> np.ndarray:
    """Accuracy profiles for every point at once, one row per point.

    ``p_axes`` substitutes an external accuracy axis per run (same length as
    the run's checkpoint list); by default each run supplies its own. Shares
    the exact smoothing/interpolation path of accuracy_profile.
    """
    if p_axes is not None and len(p_axes) != len(coll.runs):
        raise ValueError(
            f"got {len(p_axes)} accuracy axes for {len(coll.runs)} runs"
        )
    total = np.zeros((coll.num_points, grid.length))
    for r, run in enumerate(coll.runs):
        if p_axes is None:
            p, _ = reparameterize(run)
        else:
            p = np.asarray(p_axes[r], dtype=np.float64)
            if p.shape != (len(run.checkpoints),):
                raise ValueError(
                    f"accuracy axis for run {r} has {p.shape} entries, run has "
                    f"{len(run.checkpoints)} checkpoints"
                )
        ind = _indicators(run)
        smoothed = gaussian_filter1d(
            ind, sigma=sigma, mode="reflect", truncate=KERNEL_TRUNCATE, axis=0
        )
        if p.size < 2:
            raise ValueError("smoothing needs at least two samples")
        if np.any(np.diff(p) < 0):
            raise ValueError("sample accuracies must be non-decreasing")
        if p[-1] - p[0] < MIN_SPAN:
            raise ValueError(
                f"degenerate accuracy range [{p[0]:.6g}, {p[-1]:.6g}]; nothing to profile"
            )
        for z in range(coll.num_points):
            total[z] += np.interp(grid.values, p, smoothed[:, z])
    return np.clip(total / len(coll.runs), 0.0, 1.0)


def _check_point(coll: RunCollection, point_id: int) -> None:
    if not 0 <= point_id < coll.num_points:
        raise IndexError(
            f"point {point_id} outside the evaluation set of {coll.num_points} points"
        )
