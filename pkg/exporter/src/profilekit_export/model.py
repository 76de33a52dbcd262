"""Toy model checkpoints: JSON-serialized MLPs with a softmax head.

A checkpoint file holds ``{"layers": [{"weights": [[...], ...], "bias":
[...]}, ...]}``. Hidden layers apply ReLU; the last layer's outputs go
through a softmax. The forward pass runs in float64; casting to the float32
storage dtype is the log writer's job.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class ExportError(ValueError):
    """Raised for unloadable checkpoints, bad datasets, or invalid jobs."""


@dataclass(frozen=True)
class MLPCheckpoint:
    """Weights and biases of one saved model, layer by layer."""

    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if not self.weights or len(self.weights) != len(self.biases):
            raise ExportError("checkpoint needs one bias vector per weight matrix")
        width = self.weights[0].shape[0]
        for index, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2:
                raise ExportError(f"layer {index} weights must be a 2-d matrix")
            if w.shape[0] != width:
                raise ExportError(
                    f"layer {index} expects {w.shape[0]} inputs, previous layer "
                    f"emits {width}"
                )
            if b.shape != (w.shape[1],):
                raise ExportError(
                    f"layer {index} bias has shape {b.shape}, weights emit "
                    f"{w.shape[1]} outputs"
                )
            width = w.shape[1]

    @property
    def num_inputs(self) -> int:
        return int(self.weights[0].shape[0])

    @property
    def num_classes(self) -> int:
        return int(self.weights[-1].shape[1])


def load_checkpoint(path: str | Path) -> MLPCheckpoint:
    """Parse one checkpoint file, failing loudly on anything malformed."""
    path = Path(path)
    if not path.is_file():
        raise ExportError(f"checkpoint {path} does not exist")
    try:
        payload = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ExportError(f"checkpoint {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "layers" not in payload:
        raise ExportError(f"checkpoint {path} has no 'layers' list")
    layers = payload["layers"]
    if not isinstance(layers, list) or not layers:
        raise ExportError(f"checkpoint {path} has no 'layers' list")
    weights: list[np.ndarray] = []
    biases: list[np.ndarray] = []
    for index, layer in enumerate(layers):
        if not isinstance(layer, dict) or "weights" not in layer or "bias" not in layer:
            raise ExportError(
                f"checkpoint {path} layer {index} needs 'weights' and 'bias'"
            )
        try:
            weights.append(np.asarray(layer["weights"], dtype=np.float64))
            biases.append(np.asarray(layer["bias"], dtype=np.float64))
        except ValueError as exc:
            raise ExportError(
                f"checkpoint {path} layer {index} is not rectangular: {exc}"
            ) from exc
    try:
        return MLPCheckpoint(weights=tuple(weights), biases=tuple(biases))
    except ExportError as exc:
        raise ExportError(f"checkpoint {path}: {exc}") from exc


def forward(checkpoint: MLPCheckpoint, points: np.ndarray) -> np.ndarray:
    """Post-softmax outputs for every point, in the given row order."""
    x = np.asarray(points, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != checkpoint.num_inputs:
        raise ExportError(
            f"points have shape {x.shape}, checkpoint expects "
            f"(n, {checkpoint.num_inputs})"
        )
    last = len(checkpoint.weights) - 1
    for index, (w, b) in enumerate(zip(checkpoint.weights, checkpoint.biases)):
        x = x @ w + b
        if index < last:
            x = np.maximum(x, 0.0)
    x = x - x.max(axis=1, keepdims=True)
    np.exp(x, out=x)
    return x / x.sum(axis=1, keepdims=True)
