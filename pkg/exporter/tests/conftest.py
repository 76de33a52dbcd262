"""Shared builders: tiny checkpoint and dataset files for exporter tests."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


def write_checkpoint(path: Path, layers) -> Path:
    """Write a checkpoint JSON from a list of (weights, bias) pairs."""
    payload = {
        "layers": [
            {"weights": np.asarray(w).tolist(), "bias": np.asarray(b).tolist()}
            for w, b in layers
        ]
    }
    path = Path(path)
    path.write_text(json.dumps(payload))
    return path


def random_layers(rng: np.random.Generator, sizes, scale: float = 0.8):
    """Random (weights, bias) pairs chaining the given layer widths."""
    layers = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        layers.append(
            (
                rng.standard_normal((fan_in, fan_out)) * scale,
                rng.standard_normal(fan_out) * 0.1,
            )
        )
    return layers


def write_dataset(path: Path, points, labels, num_classes: int | None = None) -> Path:
    """Write a dataset JSON; row order in the file is the export order."""
    payload = {
        "points": np.asarray(points).tolist(),
        "labels": [int(v) for v in labels],
    }
    if num_classes is not None:
        payload["num_classes"] = int(num_classes)
    path = Path(path)
    path.write_text(json.dumps(payload))
    return path


def toy_setup(base: Path, rng: np.random.Generator, num_checkpoints: int = 2):
    """Standard toy tree: 4 points with 2 features, 3 classes, 2 checkpoints.

    Returns (checkpoint paths, resource values, dataset path).
    """
    base = Path(base)
    checkpoints = tuple(
        write_checkpoint(base / f"ckpt_{k}.json", random_layers(rng, (2, 5, 3)))
        for k in range(num_checkpoints)
    )
    dataset = write_dataset(
        base / "data.json", rng.standard_normal((4, 2)), [0, 1, 2, 1], num_classes=3
    )
    resources = tuple(float(k + 1) for k in range(num_checkpoints))
    return checkpoints, resources, dataset
