"""Population and empirical precision-recall curves for two-class score models."""

__version__ = "0.1.0"

from .distributions import Affine, Beta, Discrete, LogNormal, Normal, ScoreDistribution, Uniform
from .empirical import EmpiricalPRCurve, EmpiricalSample, eval_pr_hat, pr_hat_segments, pr_star, pr_zero
from .population import (
    ClassScoreModel,
    check_properties,
    classify_pr_monotonicity,
    curve_limits,
    eval_pr,
    eval_roc,
    pr_from_roc,
)
from .presets import PRESETS, get_preset, preset_model

__all__ = [
    "Affine",
    "Beta",
    "ClassScoreModel",
    "Discrete",
    "EmpiricalPRCurve",
    "EmpiricalSample",
    "LogNormal",
    "Normal",
    "PRESETS",
    "ScoreDistribution",
    "Uniform",
    "check_properties",
    "classify_pr_monotonicity",
    "curve_limits",
    "eval_pr",
    "eval_pr_hat",
    "eval_roc",
    "get_preset",
    "pr_from_roc",
    "pr_hat_segments",
    "pr_star",
    "pr_zero",
    "preset_model",
]
