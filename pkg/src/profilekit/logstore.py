"""On-disk store for per-checkpoint softmax evaluation logs.

A log is a directory holding a JSON manifest, a label file, and one softmax
matrix per training checkpoint:

* ``manifest.json``: ``{"run_id", "num_points", "num_classes", "labels_file",
  "checkpoints": [{"resource": <float>, "file": <relative path>}, ...]}``.
  Checkpoint entries may carry an optional ``global_accuracy`` which is
  cross-checked against the recomputed value, never trusted.
* labels: little-endian uint32, one entry per evaluation point.
* matrices: row-major little-endian float32, ``num_points x num_classes``.
  A ``.csv`` extension switches the matrix parser to a text format with
  header ``point_id,class_0,...,class_{C-1}`` and rows in point order.

Matrices are kept as float32 in memory so a save/load round trip is
bit-exact. Rows must be non-negative and sum to 1 within 1e-4; they are
validated, never renormalized.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

ROW_SUM_TOL = 1e-4
ACCURACY_CHECK_TOL = 1e-9

MANIFEST_NAME = "manifest.json"
LABELS_NAME = "labels.bin"


class LogFormatError(ValueError):
    """Raised for malformed manifests, payload files, or inconsistent logs."""


@dataclass(frozen=True)
class Checkpoint:
    """One evaluation snapshot: softmax rows for every point at a resource level."""

    resource: float
    softmax: np.ndarray
    global_accuracy: float


@dataclass(frozen=True)
class RunLog:
    """A single training run: labels plus checkpoints at increasing resource."""

    run_id: str
    num_points: int
    num_classes: int
    labels: np.ndarray
    checkpoints: list[Checkpoint]

    def __post_init__(self) -> None:
        _validate_runlog(self)


@dataclass(frozen=True)
class RunCollection:
    """Repeated runs of one training procedure over a fixed evaluation set."""

    runs: list[RunLog] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.runs:
            raise LogFormatError("a run collection needs at least one run")
        head = self.runs[0]
        for i, run in enumerate(self.runs[1:], start=1):
            if (run.num_points, run.num_classes) != (head.num_points, head.num_classes):
                raise LogFormatError(
                    f"run {i} ({run.run_id!r}) has shape "
                    f"{run.num_points}x{run.num_classes}, expected "
                    f"{head.num_points}x{head.num_classes}"
                )
            if not np.array_equal(run.labels, head.labels):
                where = int(np.argmax(run.labels != head.labels))
                raise LogFormatError(
                    f"run {i} ({run.run_id!r}) disagrees with run 0 on the label "
                    f"of point {where}"
                )

    @property
    def num_points(self) -> int:
        return self.runs[0].num_points

    @property
    def num_classes(self) -> int:
        return self.runs[0].num_classes

    @property
    def labels(self) -> np.ndarray:
        return self.runs[0].labels


def compute_global_accuracy(checkpoint: Checkpoint, labels: np.ndarray) -> float:
    """Fraction of points whose argmax class matches the label.

    Ties inside a softmax row resolve to the lowest class index.
    """
    return _accuracy(checkpoint.softmax, labels)


def _accuracy(softmax: np.ndarray, labels: np.ndarray) -> float:
    predicted = np.argmax(softmax, axis=1)
    return float(np.mean(predicted == labels))


def build_runlog(
    run_id: str,
    labels: Sequence[int] | np.ndarray,
    checkpoints: Sequence[tuple[float, np.ndarray]],
) -> RunLog:
    """Assemble a RunLog from raw arrays, computing per-checkpoint accuracy.

    Matrices are cast to float32, the storage dtype.
    """
    label_arr = np.asarray(labels, dtype=np.int64)
    if label_arr.ndim != 1:
        raise LogFormatError("labels must be a 1-d integer array")
    built: list[Checkpoint] = []
    num_classes = 0
    for resource, matrix in checkpoints:
        m = np.ascontiguousarray(np.asarray(matrix), dtype=np.float32)
        num_classes = m.shape[1] if m.ndim == 2 else 0
        built.append(
            Checkpoint(
                resource=float(resource),
                softmax=m,
                global_accuracy=_accuracy(m, label_arr),
            )
        )
    if built:
        num_points = built[0].softmax.shape[0]
    else:
        num_points, num_classes = len(label_arr), int(label_arr.max(initial=0)) + 1
    return RunLog(
        run_id=run_id,
        num_points=num_points,
        num_classes=num_classes,
        labels=label_arr.astype(np.uint32),
        checkpoints=built,
    )


def _validate_runlog(log: RunLog) -> None:
    labels = log.labels
    if labels.ndim != 1 or labels.shape[0] != log.num_points:
        raise LogFormatError(
            f"label count {labels.shape} does not match num_points {log.num_points}"
        )
    if log.num_points <= 0 or log.num_classes <= 0:
        raise LogFormatError("num_points and num_classes must be positive")
    if labels.size and int(labels.max()) >= log.num_classes:
        where = int(np.argmax(labels >= log.num_classes))
        raise LogFormatError(
            f"label of point {where} is {int(labels[where])}, outside "
            f"[0, {log.num_classes})"
        )
    prev = -np.inf
    for k, ck in enumerate(log.checkpoints):
        if ck.resource < 0:
            raise LogFormatError(f"checkpoint {k} has negative resource {ck.resource}")
        if ck.resource <= prev:
            raise LogFormatError(
                f"checkpoint {k} resource {ck.resource} does not exceed the "
                f"previous value {prev}"
            )
        prev = ck.resource
        m = ck.softmax
        if m.ndim != 2 or m.shape != (log.num_points, log.num_classes):
            raise LogFormatError(
                f"checkpoint {k} matrix has shape {m.shape}, expected "
                f"({log.num_points}, {log.num_classes})"
            )
        if m.dtype != np.float32:
            raise LogFormatError(f"checkpoint {k} matrix must be float32, got {m.dtype}")
        _validate_rows(m, where=f"checkpoint {k}")
        if not 0.0 <= ck.global_accuracy <= 1.0:
            raise LogFormatError(
                f"checkpoint {k} global accuracy {ck.global_accuracy} outside [0, 1]"
            )


def _validate_rows(matrix: np.ndarray, where: str) -> None:
    if matrix.size and float(matrix.min()) < 0.0:
        row = int(np.argmax(np.any(matrix < 0.0, axis=1)))
        raise LogFormatError(f"softmax row {row} of {where} has a negative entry")
    sums = matrix.sum(axis=1, dtype=np.float64)
    bad = np.abs(sums - 1.0) > ROW_SUM_TOL
    if np.any(bad):
        row = int(np.argmax(bad))
        raise LogFormatError(
            f"softmax row {row} of {where} sums to {sums[row]:.6g}, "
            f"expected 1 within {ROW_SUM_TOL}"
        )


def load_log(path: str | Path) -> RunLog:
    """Read a log directory (or a manifest path) into a validated RunLog."""
    manifest_path = Path(path)
    if manifest_path.is_dir():
        manifest_path = manifest_path / MANIFEST_NAME
    if not manifest_path.is_file():
        raise LogFormatError(f"no manifest at {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text())
    except json.JSONDecodeError as exc:
        raise LogFormatError(f"manifest {manifest_path} is not valid JSON: {exc}") from exc
    for key in ("run_id", "num_points", "num_classes", "labels_file", "checkpoints"):
        if key not in manifest:
            raise LogFormatError(f"manifest {manifest_path} is missing {key!r}")
    num_points = int(manifest["num_points"])
    num_classes = int(manifest["num_classes"])
    entries = manifest["checkpoints"]
    if not isinstance(entries, list) or not entries:
        raise LogFormatError(f"manifest {manifest_path} lists no checkpoints")

    base = manifest_path.parent
    labels = _read_labels(base / manifest["labels_file"], num_points)
    checkpoints: list[Checkpoint] = []
    for k, entry in enumerate(entries):
        if "resource" not in entry or "file" not in entry:
            raise LogFormatError(f"checkpoint entry {k} needs 'resource' and 'file'")
        matrix_path = base / entry["file"]
        if matrix_path.suffix.lower() == ".csv":
            matrix = _read_csv_matrix(matrix_path, num_points, num_classes)
        else:
            matrix = _read_binary_matrix(matrix_path, num_points, num_classes)
        _validate_rows(matrix, where=f"checkpoint {k} ({entry['file']})")
        accuracy = _accuracy(matrix, labels)
        if "global_accuracy" in entry:
            stored = float(entry["global_accuracy"])
            if abs(stored - accuracy) > ACCURACY_CHECK_TOL:
                raise LogFormatError(
                    f"checkpoint {k} stores global accuracy {stored!r} but the "
                    f"matrices give {accuracy!r}"
                )
        checkpoints.append(
            Checkpoint(
                resource=float(entry["resource"]),
                softmax=matrix,
                global_accuracy=accuracy,
            )
        )
    return RunLog(
        run_id=str(manifest["run_id"]),
        num_points=num_points,
        num_classes=num_classes,
        labels=labels,
        checkpoints=checkpoints,
    )


def _read_labels(path: Path, num_points: int) -> np.ndarray:
    if not path.is_file():
        raise LogFormatError(f"labels file {path} does not exist")
    raw = path.read_bytes()
    if len(raw) != 4 * num_points:
        raise LogFormatError(
            f"labels file {path.name} holds {len(raw) // 4} entries, "
            f"manifest says {num_points}"
        )
    return np.frombuffer(raw, dtype="<u4").astype(np.uint32)


def _read_binary_matrix(path: Path, num_points: int, num_classes: int) -> np.ndarray:
    if not path.is_file():
        raise LogFormatError(f"matrix file {path} does not exist")
    raw = path.read_bytes()
    expected = 4 * num_points * num_classes
    if len(raw) != expected:
        raise LogFormatError(
            f"matrix file {path.name} is {len(raw)} bytes, expected {expected}"
        )
    flat = np.frombuffer(raw, dtype="<f4").astype(np.float32)
    return flat.reshape(num_points, num_classes)


def _read_csv_matrix(path: Path, num_points: int, num_classes: int) -> np.ndarray:
    if not path.is_file():
        raise LogFormatError(f"matrix file {path} does not exist")
    expected_header = ["point_id"] + [f"class_{c}" for c in range(num_classes)]
    matrix = np.empty((num_points, num_classes), dtype=np.float32)
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != expected_header:
            raise LogFormatError(
                f"matrix file {path.name} header {header} does not match "
                f"{expected_header}"
            )
        count = 0
        for row in reader:
            if not row:
                continue
            if count >= num_points:
                raise LogFormatError(f"matrix file {path.name} has extra rows")
            if len(row) != num_classes + 1:
                raise LogFormatError(
                    f"row {count} of {path.name} has {len(row) - 1} values, "
                    f"expected {num_classes}"
                )
            if int(row[0]) != count:
                raise LogFormatError(
                    f"row {count} of {path.name} is labelled point_id {row[0]}"
                )
            matrix[count] = [float(cell) for cell in row[1:]]
            count += 1
    if count != num_points:
        raise LogFormatError(
            f"matrix file {path.name} has {count} rows, expected {num_points}"
        )
    return matrix


def save_log(log: RunLog, path: str | Path, fmt: str = "binary") -> Path:
    """Write a log directory; returns the directory path.

    ``fmt`` picks the matrix encoding: ``binary`` (float32) or ``csv``. Both
    round-trip bit-exactly through load_log.
    """
    if fmt not in ("binary", "csv"):
        raise LogFormatError(f"unknown log format {fmt!r}")
    if not log.checkpoints:
        raise LogFormatError(f"run {log.run_id!r} has no checkpoints to save")
    base = Path(path)
    base.mkdir(parents=True, exist_ok=True)
    (base / LABELS_NAME).write_bytes(log.labels.astype("<u4").tobytes())
    entries = []
    for k, ck in enumerate(log.checkpoints):
        if fmt == "binary":
            name = f"checkpoint_{k:04d}.bin"
            (base / name).write_bytes(ck.softmax.astype("<f4").tobytes())
        else:
            name = f"checkpoint_{k:04d}.csv"
            _write_csv_matrix(base / name, ck.softmax)
        entries.append(
            {"resource": ck.resource, "file": name, "global_accuracy": ck.global_accuracy}
        )
    manifest = {
        "run_id": log.run_id,
        "num_points": log.num_points,
        "num_classes": log.num_classes,
        "labels_file": LABELS_NAME,
        "checkpoints": entries,
    }
    manifest_path = base / MANIFEST_NAME
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    return base


def _write_csv_matrix(path: Path, matrix: np.ndarray) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["point_id"] + [f"class_{c}" for c in range(matrix.shape[1])])
        for i, row in enumerate(matrix):
            # repr of the exact float64 value round-trips back to the same float32
            writer.writerow([i] + [repr(float(v)) for v in row])


def merge_runs(runs: Sequence[RunLog]) -> RunCollection:
    """Group runs that share an evaluation set into one collection."""
    return RunCollection(runs=list(runs))
