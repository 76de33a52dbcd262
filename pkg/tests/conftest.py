"""Shared builders for synthetic runs, collections, and logs."""

import numpy as np

from profilekit.logstore import RunCollection, build_runlog, merge_runs


def onehot_matrix(predictions, num_classes):
    """Softmax matrix whose rows are one-hot on the given predicted classes."""
    predictions = np.asarray(predictions, dtype=np.int64)
    matrix = np.zeros((predictions.size, num_classes), dtype=np.float32)
    matrix[np.arange(predictions.size), predictions] = 1.0
    return matrix


def indicator_run(run_id, labels, correctness, num_classes=None, resources=None):
    """Run whose checkpoint t gets point z right iff correctness[t, z].

    Wrong answers predict the next class (mod num_classes), so the argmax is
    unambiguous and the per-checkpoint global accuracy is exactly the row
    mean of ``correctness``.
    """
    labels = np.asarray(labels, dtype=np.int64)
    correct = np.asarray(correctness, dtype=bool)
    if num_classes is None:
        num_classes = int(labels.max()) + 1
    if resources is None:
        resources = np.arange(correct.shape[0], dtype=np.float64)
    checkpoints = []
    for t in range(correct.shape[0]):
        predictions = np.where(correct[t], labels, (labels + 1) % num_classes)
        checkpoints.append((float(resources[t]), onehot_matrix(predictions, num_classes)))
    return build_runlog(run_id, labels, checkpoints)


def staircase_correctness(thresholds, num_checkpoints, start=0.05, stop=0.95):
    """(T, N) bool table: point z becomes (and stays) correct once the
    checkpoint fraction passes thresholds[z]."""
    thresholds = np.asarray(thresholds, dtype=np.float64)
    fractions = np.linspace(start, stop, num_checkpoints)
    return fractions[:, np.newaxis] >= thresholds[np.newaxis, :]


def staircase_collection(rng, num_runs=3, num_points=24, num_classes=3, num_checkpoints=20):
    """Collection whose points switch on at per-point (jittered) thresholds.

    Global accuracy sweeps from near 0 to near 1 in every run, so profiles
    cover a wide common grid.
    """
    labels = np.arange(num_points) % num_classes
    base = np.linspace(0.05, 0.9, num_points)
    runs = []
    for r in range(num_runs):
        thresholds = np.clip(base + rng.uniform(-0.04, 0.04, size=num_points), 0.0, 1.0)
        correct = staircase_correctness(thresholds, num_checkpoints)
        runs.append(indicator_run(f"run-{r}", labels, correct, num_classes))
    return merge_runs(runs)


def blended_run(rng, run_id, labels, num_classes, num_checkpoints=16):
    """Run with dense softmax rows drifting from random noise to the label.

    Row t of point z is (1 - w_t) * q_z + w_t * onehot(label_z) with w_t
    ramping 0 -> 1, giving generic probabilities and rising accuracy.
    """
    labels = np.asarray(labels, dtype=np.int64)
    num_points = labels.size
    noise = rng.random((num_points, num_classes))
    noise /= noise.sum(axis=1, keepdims=True)
    target = onehot_matrix(labels, num_classes).astype(np.float64)
    checkpoints = []
    for t, w in enumerate(np.linspace(0.0, 1.0, num_checkpoints)):
        rows = (1.0 - w) * noise + w * target
        checkpoints.append((float(t), rows))
    return build_runlog(run_id, labels, checkpoints)


def blended_collection(rng, num_runs=3, num_points=12, num_classes=4, num_checkpoints=16):
    labels = np.arange(num_points) % num_classes
    return merge_runs(
        [
            blended_run(rng, f"run-{r}", labels, num_classes, num_checkpoints)
            for r in range(num_runs)
        ]
    )


def accuracy_schedule_run(run_id, fractions, num_points=10, num_classes=2):
    """Run whose checkpoint t has global accuracy fractions[t] exactly.

    fractions[t] * num_points must be an integer; the first that many points
    are correct at checkpoint t.
    """
    counts = [round(f * num_points) for f in fractions]
    correct = np.zeros((len(fractions), num_points), dtype=bool)
    for t, c in enumerate(counts):
        correct[t, :c] = True
    labels = np.arange(num_points) % num_classes
    return indicator_run(run_id, labels, correct, num_classes)


def single_collection(run):
    return RunCollection(runs=[run])
