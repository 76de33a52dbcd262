"""Exact Bayesian observer over a finite joint table.

The model is a joint distribution over a label Y and a sequence of
observations Z_1..Z_N (arbitrary dependence allowed). The posterior after a
prefix of observations is computed by exact marginalization, and the two
curves of interest are tracked as functions of the prefix length n:

* expected posterior entropy, which never increases with n, and
* expected maximum posterior probability (the accuracy of the Bayes-optimal
  guess under uniform tie-splitting), which never decreases.

Enumeration is exact while |Z|^N stays within ``exact_limit``; beyond that a
seeded Monte Carlo estimate with reported standard errors takes over.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import entr

from .report import CheckReport

EXACT_LIMIT = 10**6
JOINT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteBayesModel:
    joint: np.ndarray

    def __post_init__(self) -> None:
        j = self.joint
        if j.ndim < 2:
            raise ValueError("joint table needs a label axis and at least one observation axis")
        sizes = set(j.shape[1:])
        if len(sizes) != 1:
            raise ValueError(f"observation axes disagree in size: {j.shape[1:]}")
        if j.size and float(j.min()) < 0.0:
            raise ValueError("joint table has a negative entry")
        total = float(j.sum())
        if abs(total - 1.0) > JOINT_SUM_TOL:
            raise ValueError(f"joint table sums to {total!r}, expected 1 within {JOINT_SUM_TOL}")

    @property
    def num_labels(self) -> int:
        return self.joint.shape[0]

    @property
    def num_observations(self) -> int:
        return self.joint.shape[1]

    @property
    def horizon(self) -> int:
        return self.joint.ndim - 1

    @classmethod
    def from_prior_channel(
        cls, prior: np.ndarray, channel: np.ndarray, horizon: int
    ) -> "DiscreteBayesModel":
        """Joint table for observations drawn iid from a per-label channel."""
        prior = np.asarray(prior, dtype=np.float64)
        channel = np.asarray(channel, dtype=np.float64)
        if channel.ndim != 2 or channel.shape[0] != prior.shape[0]:
            raise ValueError("channel must have one row per label")
        joint = prior.copy()
        for _ in range(horizon):
            view = channel[(slice(None),) + (np.newaxis,) * (joint.ndim - 1)]
            joint = joint[..., np.newaxis] * view
        return cls(joint=joint)


def random_bayes_model(
    rng: np.random.Generator, num_labels: int, num_observations: int, horizon: int
) -> DiscreteBayesModel:
    joint = rng.random((num_labels,) + (num_observations,) * horizon)
    return DiscreteBayesModel(joint=joint / joint.sum())


def _prefix_marginal(model: DiscreteBayesModel, n: int) -> np.ndarray:
    """Joint over (Y, Z_1..Z_n), flattened to (num_labels, num_observations^n)."""
    trailing = tuple(range(1 + n, 1 + model.horizon))
    marg = model.joint.sum(axis=trailing) if trailing else model.joint
    return marg.reshape(model.num_labels, -1)


def bayes_posterior(
    model: DiscreteBayesModel, observations: Sequence[int]
) -> np.ndarray:
    """Exact posterior over labels after the observed prefix."""
    obs = tuple(int(z) for z in observations)
    if len(obs) > model.horizon:
        raise ValueError(
            f"{len(obs)} observations exceed the model horizon {model.horizon}"
        )
    for i, z in enumerate(obs):
        if not 0 <= z < model.num_observations:
            raise ValueError(
                f"observation {i} is {z}, outside [0, {model.num_observations})"
            )
    marg = _prefix_marginal(model, len(obs)).reshape(
        (model.num_labels,) + (model.num_observations,) * len(obs)
    )
    post = marg[(slice(None),) + obs].astype(np.float64)
    total = float(post.sum())
    if total <= 0.0:
        raise ValueError(f"observation sequence {obs} has probability zero")
    return post / total


@dataclass(frozen=True)
class BayesCurves:
    """Expected posterior statistics per prefix length 0..N."""

    entropy: np.ndarray
    max_prob: np.ndarray
    method: str
    entropy_se: np.ndarray | None = None
    max_prob_se: np.ndarray | None = None


def _exact_stats(model: DiscreteBayesModel, n: int) -> tuple[float, float]:
    marg = _prefix_marginal(model, n)
    weights = marg.sum(axis=0)
    posterior = np.divide(
        marg, weights, out=np.zeros_like(marg, dtype=np.float64), where=weights > 0
    )
    entropies = entr(posterior).sum(axis=0)
    return float(weights @ entropies), float(weights @ posterior.max(axis=0))


def bayes_expected_curves(
    model: DiscreteBayesModel,
    exact_limit: int = EXACT_LIMIT,
    mc_samples: int = 200_000,
    seed: int = 0,
) -> BayesCurves:
    """Expected entropy and max-probability curves over prefix lengths."""
    num_sequences = model.num_observations**model.horizon
    if num_sequences <= exact_limit:
        stats = [_exact_stats(model, n) for n in range(model.horizon + 1)]
        entropy, max_prob = (np.array(v) for v in zip(*stats))
        return BayesCurves(entropy=entropy, max_prob=max_prob, method="exact")
    return _monte_carlo_curves(model, mc_samples, seed)


def _monte_carlo_curves(
    model: DiscreteBayesModel, samples: int, seed: int
) -> BayesCurves:
    rng = np.random.default_rng(seed)
    flat = model.joint.reshape(-1)
    draws = rng.choice(flat.size, size=samples, p=flat / flat.sum())
    coords = np.unravel_index(draws, model.joint.shape)
    zs = np.stack(coords[1:], axis=1)  # sampled observation sequences
    n_steps = model.horizon + 1
    entropy = np.zeros(n_steps)
    max_prob = np.zeros(n_steps)
    entropy_se = np.zeros(n_steps)
    max_prob_se = np.zeros(n_steps)
    for n in range(n_steps):
        marg = _prefix_marginal(model, n)
        weights = marg.sum(axis=0)
        posterior = np.divide(
            marg, weights, out=np.zeros_like(marg, dtype=np.float64), where=weights > 0
        )
        powers = model.num_observations ** np.arange(n - 1, -1, -1, dtype=np.int64)
        cols = zs[:, :n] @ powers if n else np.zeros(samples, dtype=np.int64)
        h = entr(posterior[:, cols]).sum(axis=0)
        m = posterior[:, cols].max(axis=0)
        entropy[n], max_prob[n] = h.mean(), m.mean()
        entropy_se[n] = h.std(ddof=1) / np.sqrt(samples)
        max_prob_se[n] = m.std(ddof=1) / np.sqrt(samples)
    return BayesCurves(
        entropy=entropy,
        max_prob=max_prob,
        method="monte_carlo",
        entropy_se=entropy_se,
        max_prob_se=max_prob_se,
    )


def bayes_accuracy(model: DiscreteBayesModel, n: int) -> float:
    """Expected accuracy of the Bayes-optimal guess after n observations."""
    if not 0 <= n <= model.horizon:
        raise ValueError(f"prefix length {n} outside [0, {model.horizon}]")
    return _exact_stats(model, n)[1]


def monotonicity_report(
    model: DiscreteBayesModel,
    exact_limit: int = EXACT_LIMIT,
    mc_samples: int = 200_000,
    seed: int = 0,
    tol: float = 1e-9,
) -> CheckReport:
    """Check the two expected-curve monotonicity properties.

    Exact curves allow slack ``tol`` per step; Monte Carlo curves allow three
    combined standard errors instead.
    """
    curves = bayes_expected_curves(model, exact_limit, mc_samples, seed)
    if curves.method == "exact":
        ent_tol = np.full(len(curves.entropy) - 1, tol)
        max_tol = ent_tol
    else:
        ent_tol = 3.0 * (curves.entropy_se[:-1] + curves.entropy_se[1:])
        max_tol = 3.0 * (curves.max_prob_se[:-1] + curves.max_prob_se[1:])
    rising_entropy = np.diff(curves.entropy) > ent_tol
    falling_max = np.diff(curves.max_prob) < -max_tol
    witness = None
    if np.any(rising_entropy):
        witness = {"curve": "expected_entropy", "step": int(np.argmax(rising_entropy))}
    elif np.any(falling_max):
        witness = {"curve": "expected_max_prob", "step": int(np.argmax(falling_max))}
    return CheckReport(
        name="posterior_monotonicity",
        passed=witness is None,
        witness=witness,
        curves={
            "expected_entropy": [float(v) for v in curves.entropy],
            "expected_max_prob": [float(v) for v in curves.max_prob],
        },
    )
