"""Small closed-form learner models whose profile behavior can be checked exactly."""

from .report import CheckReport
from .skill import (
    SkillModel,
    check_accuracy_monotonicity,
    check_universality,
    random_skill_model,
    skill_accuracy,
)
from .manifold import ManifoldModel, fit_scaling, manifold_errors, scaling_sweep
from .bayes import (
    BayesCurves,
    DiscreteBayesModel,
    bayes_accuracy,
    bayes_expected_curves,
    bayes_posterior,
    monotonicity_report,
    random_bayes_model,
)
from .gp import GPModel, gp_difficulty_order, gp_posterior, kernel_matrix, rbf_kernel

__all__ = [
    "BayesCurves",
    "CheckReport",
    "DiscreteBayesModel",
    "GPModel",
    "ManifoldModel",
    "SkillModel",
    "bayes_accuracy",
    "bayes_expected_curves",
    "bayes_posterior",
    "check_accuracy_monotonicity",
    "check_universality",
    "fit_scaling",
    "gp_difficulty_order",
    "gp_posterior",
    "kernel_matrix",
    "manifold_errors",
    "monotonicity_report",
    "random_bayes_model",
    "random_skill_model",
    "rbf_kernel",
    "scaling_sweep",
    "skill_accuracy",
]
