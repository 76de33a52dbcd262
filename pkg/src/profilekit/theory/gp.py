"""Gaussian-process regression with a posterior-variance difficulty order.

Points the posterior is least certain about are the hardest for the learner;
conditioning on more data can only shrink posterior variance, which is the
mechanism behind monotone per-point progress for this learner family.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve

DEFAULT_JITTER = 1e-9

Kernel = Callable[[np.ndarray, np.ndarray], float]


@dataclass(frozen=True)
class GPModel:
    kernel: Kernel
    train_x: np.ndarray
    train_y: np.ndarray
    jitter: float = DEFAULT_JITTER

    def __post_init__(self) -> None:
        x, y = self.train_x, self.train_y
        if x.ndim != 2:
            raise ValueError(f"train_x must be (n, d), got shape {x.shape}")
        if y.shape != (x.shape[0],):
            raise ValueError(
                f"train_y has shape {y.shape} for {x.shape[0]} training inputs"
            )
        if self.jitter < 0:
            raise ValueError("jitter must be non-negative")


def rbf_kernel(lengthscale: float = 1.0, variance: float = 1.0) -> Kernel:
    if lengthscale <= 0 or variance <= 0:
        raise ValueError("lengthscale and variance must be positive")

    def kernel(a: np.ndarray, b: np.ndarray) -> float:
        gap = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
        return variance * float(np.exp(-0.5 * float(gap @ gap) / lengthscale**2))

    return kernel


def kernel_matrix(kernel: Kernel, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    out = np.empty((len(rows), len(cols)))
    for i, a in enumerate(rows):
        for j, b in enumerate(cols):
            out[i, j] = kernel(a, b)
    return out


def gp_posterior(model: GPModel, query: np.ndarray) -> tuple[float, float]:
    """Posterior mean and variance at one query input.

    Solves through a Cholesky factorization of the jittered kernel matrix;
    the kernel matrix is never inverted explicitly. Variance is clamped at 0
    to absorb factorization roundoff. With no training data the prior (mean
    0, variance k(x, x)) is returned.
    """
    q = np.atleast_1d(np.asarray(query, dtype=np.float64))
    prior_var = float(model.kernel(q, q))
    n = model.train_x.shape[0]
    if n == 0:
        return 0.0, max(prior_var, 0.0)
    gram = kernel_matrix(model.kernel, model.train_x, model.train_x)
    gram[np.diag_indices_from(gram)] += model.jitter
    try:
        factor = cho_factor(gram, lower=True)
    except np.linalg.LinAlgError as exc:
        raise ValueError(
            f"kernel matrix is not positive definite even with jitter "
            f"{model.jitter:g}: {exc}"
        ) from exc
    k_star = kernel_matrix(model.kernel, model.train_x, q[np.newaxis, :])[:, 0]
    mean = float(k_star @ cho_solve(factor, model.train_y.astype(np.float64)))
    var = prior_var - float(k_star @ cho_solve(factor, k_star))
    return mean, max(var, 0.0)


def gp_difficulty_order(
    model: GPModel, queries: Sequence[np.ndarray] | np.ndarray
) -> list[tuple[int, float]]:
    """Queries ranked hardest first (descending posterior variance).

    Ties keep their input order.
    """
    variances = np.array([gp_posterior(model, q)[1] for q in queries])
    order = np.argsort(-variances, kind="stable")
    return [(int(i), float(variances[i])) for i in order]
