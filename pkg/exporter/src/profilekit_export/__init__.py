"""Run saved model checkpoints over a point set and write evaluation logs.

The log directories this package writes follow the same on-disk contract the
analysis toolkit reads: a JSON manifest, little-endian uint32 labels, and one
row-major little-endian float32 softmax matrix per checkpoint. The exporter
owns the model-side plumbing only; all analysis arithmetic happens downstream,
which is why rows are cast to float32 before anything touches disk.
"""

from .dataset import Dataset, load_dataset
from .jobs import ExportError, ExportJob, export
from .model import MLPCheckpoint, forward, load_checkpoint

__all__ = [
    "Dataset",
    "ExportError",
    "ExportJob",
    "MLPCheckpoint",
    "export",
    "forward",
    "load_checkpoint",
    "load_dataset",
]
