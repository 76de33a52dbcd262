"""Export jobs: run a checkpoint series over a dataset and write the log.

The writer emits the downstream contract directly: ``manifest.json`` naming
every payload file, ``labels.bin`` as little-endian uint32, and one row-major
little-endian float32 matrix per checkpoint named ``checkpoint_NNNN.bin``.
Rows are the model's post-softmax outputs cast to float32 before writing, so
the bytes on disk are the single source of truth for all later analysis.
Checkpoints are processed strictly in order, one at a time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dataset import Dataset, load_dataset
from .model import ExportError, forward, load_checkpoint

MANIFEST_NAME = "manifest.json"
LABELS_NAME = "labels.bin"


@dataclass(frozen=True)
class ExportJob:
    """One export: ordered checkpoints, their resource values, data, output."""

    checkpoint_paths: tuple[Path, ...]
    resource_values: tuple[float, ...]
    dataset_path: Path
    output_dir: Path
    run_id: str | None = field(default=None)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "checkpoint_paths", tuple(Path(p) for p in self.checkpoint_paths)
        )
        object.__setattr__(
            self, "resource_values", tuple(float(r) for r in self.resource_values)
        )
        object.__setattr__(self, "dataset_path", Path(self.dataset_path))
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        if not self.checkpoint_paths:
            raise ExportError("job lists no checkpoints")
        if len(self.resource_values) != len(self.checkpoint_paths):
            raise ExportError(
                f"{len(self.resource_values)} resource values for "
                f"{len(self.checkpoint_paths)} checkpoints; need one per checkpoint"
            )
        previous = -np.inf
        for k, resource in enumerate(self.resource_values):
            if resource < 0:
                raise ExportError(f"resource value {k} is negative ({resource})")
            if resource <= previous:
                raise ExportError(
                    f"resource values must be strictly increasing; value {k} "
                    f"({resource}) does not exceed {previous}"
                )
            previous = resource

    @property
    def effective_run_id(self) -> str:
        return self.run_id if self.run_id is not None else self.output_dir.name


def export(job: ExportJob) -> Path:
    """Evaluate every checkpoint over the dataset and write the log directory.

    Returns the directory path. Matrix row k always holds dataset point k, in
    the dataset file's own order, for every checkpoint.
    """
    dataset = load_dataset(job.dataset_path)
    matrices: list[np.ndarray] = []
    for path in job.checkpoint_paths:
        checkpoint = load_checkpoint(path)
        if checkpoint.num_classes != dataset.num_classes:
            raise ExportError(
                f"checkpoint {path} emits {checkpoint.num_classes} classes, "
                f"dataset declares {dataset.num_classes}"
            )
        if checkpoint.num_inputs != dataset.points.shape[1]:
            raise ExportError(
                f"checkpoint {path} expects {checkpoint.num_inputs} features, "
                f"dataset points have {dataset.points.shape[1]}"
            )
        rows = forward(checkpoint, dataset.points)
        matrices.append(np.ascontiguousarray(rows, dtype="<f4"))
    return write_log_dir(
        job.output_dir, job.effective_run_id, dataset, job.resource_values, matrices
    )


def write_log_dir(
    output_dir: Path,
    run_id: str,
    dataset: Dataset,
    resource_values: tuple[float, ...],
    matrices: list[np.ndarray],
) -> Path:
    """Write manifest, labels, and float32 matrices; returns the directory."""
    base = Path(output_dir)
    base.mkdir(parents=True, exist_ok=True)
    (base / LABELS_NAME).write_bytes(dataset.labels.astype("<u4").tobytes())
    entries = []
    for k, (resource, matrix) in enumerate(zip(resource_values, matrices)):
        name = f"checkpoint_{k:04d}.bin"
        (base / name).write_bytes(matrix.tobytes())
        predicted = np.argmax(matrix, axis=1)
        entries.append(
            {
                "resource": resource,
                "file": name,
                "global_accuracy": float(np.mean(predicted == dataset.labels)),
            }
        )
    manifest = {
        "run_id": run_id,
        "num_points": dataset.num_points,
        "num_classes": dataset.num_classes,
        "labels_file": LABELS_NAME,
        "checkpoints": entries,
    }
    (base / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2) + "\n")
    return base
