"""Dataset files: evaluation points and their labels in one JSON document.

``{"points": [[...], ...], "labels": [...], "num_classes": <int, optional>}``.
File order is the enumeration order; exported matrix rows follow it exactly
and identically across checkpoints. ``num_classes`` defaults to the largest
label plus one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import ExportError


@dataclass(frozen=True)
class Dataset:
    """An ordered evaluation set: feature rows, labels, and the class count."""

    points: np.ndarray
    labels: np.ndarray
    num_classes: int

    def __post_init__(self) -> None:
        if self.points.ndim != 2 or self.points.shape[0] == 0:
            raise ExportError("points must form a non-empty 2-d matrix")
        if self.labels.shape != (self.points.shape[0],):
            raise ExportError(
                f"{self.labels.shape[0] if self.labels.ndim == 1 else 'malformed'}"
                f" labels for {self.points.shape[0]} points"
            )
        if self.num_classes <= 0:
            raise ExportError("num_classes must be positive")
        if self.labels.size and int(self.labels.min()) < 0:
            where = int(np.argmax(self.labels < 0))
            raise ExportError(f"label of point {where} is negative")
        if self.labels.size and int(self.labels.max()) >= self.num_classes:
            where = int(np.argmax(self.labels >= self.num_classes))
            raise ExportError(
                f"label of point {where} is {int(self.labels[where])}, outside "
                f"[0, {self.num_classes})"
            )

    @property
    def num_points(self) -> int:
        return int(self.points.shape[0])


def load_dataset(path: str | Path) -> Dataset:
    """Parse a dataset file, preserving its row order."""
    path = Path(path)
    if not path.is_file():
        raise ExportError(f"dataset {path} does not exist")
    try:
        payload = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ExportError(f"dataset {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "points" not in payload or "labels" not in payload:
        raise ExportError(f"dataset {path} needs 'points' and 'labels'")
    try:
        points = np.asarray(payload["points"], dtype=np.float64)
    except ValueError as exc:
        raise ExportError(f"dataset {path} points are not rectangular: {exc}") from exc
    labels = np.asarray(payload["labels"])
    if labels.ndim != 1 or (labels.size and not np.issubdtype(labels.dtype, np.integer)):
        raise ExportError(f"dataset {path} labels must be a flat integer list")
    num_classes = payload.get("num_classes")
    if num_classes is None:
        num_classes = int(labels.max(initial=-1)) + 1
    try:
        return Dataset(
            points=points, labels=labels.astype(np.int64), num_classes=int(num_classes)
        )
    except ExportError as exc:
        raise ExportError(f"dataset {path}: {exc}") from exc
