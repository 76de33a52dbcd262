"""Piecewise approximation of a Lipschitz target on the unit cube.

The learner splits [0, 1]^d into cells_per_axis^d congruent cubes and
predicts the target's value at the center of the query's cell. For an
L-Lipschitz target (Euclidean norm) the pointwise error is at most
L * sqrt(d) / (2 * cells_per_axis), so the worst-case error shrinks like
n^(-1/d) in the cell count n. A piecewise-linear variant is available in
one dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

APPROX_KINDS = ("constant", "linear")


@dataclass(frozen=True)
class ManifoldModel:
    dimension: int
    lipschitz_constant: float
    target: Callable[[np.ndarray], float]
    cells_per_axis: int
    approx: str = "constant"

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError(f"dimension must be at least 1, got {self.dimension}")
        if self.cells_per_axis < 1:
            raise ValueError(f"cells_per_axis must be at least 1, got {self.cells_per_axis}")
        if self.lipschitz_constant <= 0:
            raise ValueError("lipschitz_constant must be positive")
        if self.approx not in APPROX_KINDS:
            raise ValueError(f"unknown approximation {self.approx!r}")
        if self.approx == "linear" and self.dimension != 1:
            raise ValueError("linear approximation is only available in one dimension")

    @property
    def num_cells(self) -> int:
        return self.cells_per_axis**self.dimension

    def error_bound(self) -> float:
        """Worst-case pointwise error of the cell-center approximation."""
        return (
            self.lipschitz_constant
            * float(np.sqrt(self.dimension))
            / (2.0 * self.cells_per_axis)
        )


def manifold_errors(model: ManifoldModel, eval_points: np.ndarray) -> np.ndarray:
    """|target - approximation| at each evaluation point."""
    pts = np.asarray(eval_points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, np.newaxis]
    if pts.ndim != 2 or pts.shape[1] != model.dimension:
        raise ValueError(
            f"evaluation points have shape {pts.shape}, expected (m, {model.dimension})"
        )
    if pts.size and (float(pts.min()) < 0.0 or float(pts.max()) > 1.0):
        bad = int(np.argmax(np.any((pts < 0.0) | (pts > 1.0), axis=1)))
        raise ValueError(f"evaluation point {bad} lies outside the unit cube")
    exact = np.array([model.target(x) for x in pts])
    if model.approx == "linear":
        knots = np.linspace(0.0, 1.0, model.cells_per_axis + 1)
        knot_values = np.array([model.target(np.array([t])) for t in knots])
        approx = np.interp(pts[:, 0], knots, knot_values)
    else:
        cells = np.minimum(
            np.floor(pts * model.cells_per_axis).astype(np.int64),
            model.cells_per_axis - 1,  # x = 1.0 belongs to the last cell
        )
        centers = (cells + 0.5) / model.cells_per_axis
        approx = np.array([model.target(c) for c in centers])
    return np.abs(exact - approx)


def fit_scaling(errors_by_n: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Fit max_error = C_fit * n^(-alpha_fit) by least squares in log-log.

    Returns (C_fit, alpha_fit).
    """
    if len(errors_by_n) < 2:
        raise ValueError("scaling fit needs at least two (n, error) pairs")
    ns = np.array([float(n) for n, _ in errors_by_n])
    errs = np.array([float(e) for _, e in errors_by_n])
    if np.any(ns <= 0) or np.unique(ns).size != ns.size:
        raise ValueError("cell counts must be positive and distinct")
    if np.any(errs <= 0):
        raise ValueError("errors must be positive to fit a power law")
    slope, intercept = np.polyfit(np.log(ns), np.log(errs), deg=1)
    return float(np.exp(intercept)), float(-slope)


def scaling_sweep(
    dimension: int,
    lipschitz_constant: float,
    target: Callable[[np.ndarray], float],
    cells: Sequence[int],
    eval_points: np.ndarray,
    approx: str = "constant",
) -> list[tuple[int, float]]:
    """Max pointwise error per cell budget, ready for fit_scaling."""
    out = []
    for c in cells:
        model = ManifoldModel(
            dimension=dimension,
            lipschitz_constant=lipschitz_constant,
            target=target,
            cells_per_axis=int(c),
            approx=approx,
        )
        errors = manifold_errors(model, eval_points)
        out.append((model.num_cells, float(errors.max())))
    return out
