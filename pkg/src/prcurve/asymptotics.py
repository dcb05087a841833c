"""Pointwise normal approximation for the functional empirical PR estimator.

For continuous class laws with densities, ``sqrt(n) (PRhat(x) - PR(x))`` is
asymptotically ``N(0, sigma2(x))`` with

    sigma2(x) = PR(x)^4 / x^2 * skew (1 + skew)
                * [alpha^2 (1 + skew) + slope^2 x (1 - x) skew + alpha (1 - alpha)]

where ``alpha = 1 - F-(q)``, ``slope = f-(q) / f+(q)`` and ``q = F+^{-1}(1 - x)``.
The module also provides numerical diagnostics for the regularity
conditions behind that limit: a bounded slope on ``[eps, 1 - eps]``, and a
tail exponent ``gamma`` bounding ``x (1 - x) |d/dx log f+(F+^{-1}(1 - x))|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .exceptions import (
    DegenerateLimitError,
    DomainError,
    UnboundedVarianceError,
    UnsupportedOperationError,
)
from .population import ClassScoreModel, eval_pr, false_alarm_fraction

__all__ = [
    "VarianceProfile",
    "ConditionReport",
    "local_components",
    "sigma_squared",
    "variance_from_components",
    "normal_approximation",
    "slope_profile",
    "tail_profile",
    "condition_check",
]

DEFAULT_EPSILON = 0.05
FD_STEP = 1e-4
# f+ below this is treated as zero when f- is not
DENSITY_FLOOR = 1e-300


@dataclass(frozen=True)
class VarianceProfile:
    x: float
    pr: float
    alpha: float
    slope: float
    sigma2: float
    skew: float

    @property
    def flag(self) -> str:
        if math.isinf(self.sigma2):
            return "unbounded"
        if self.sigma2 == 0.0:
            return "degenerate"
        return "ok"

    @property
    def degenerate(self) -> bool:
        return self.flag == "degenerate"


def _require_densities(model: ClassScoreModel) -> None:
    if not model.is_continuous:
        raise UnsupportedOperationError("the normal approximation needs densities for both classes")


def local_components(model: ClassScoreModel, x: float) -> tuple[float, float, float]:
    """``(alpha, slope, pr)`` at recall ``x`` in (0, 1)."""
    _require_densities(model)
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x}")
    q = float(model.plus.isf(x))
    alpha = float(false_alarm_fraction(model, x))
    f_minus = float(model.minus.pdf(q))
    f_plus = float(model.plus.pdf(q))
    if f_minus == 0.0:
        slope = 0.0
    elif f_plus < DENSITY_FLOOR:
        slope = math.inf
    else:
        slope = math.exp(float(model.minus.logpdf(q)) - float(model.plus.logpdf(q)))
    return alpha, slope, float(eval_pr(model, x))


def variance_from_components(pr: float, alpha: float, slope: float, x: float, skew: float) -> float:
    """Assemble ``sigma2`` from its ingredients; ``inf`` for an infinite slope."""
    if math.isinf(slope):
        return math.inf
    bracket = alpha * alpha * (1.0 + skew) + slope * slope * x * (1.0 - x) * skew + alpha * (1.0 - alpha)
    return pr**4 / (x * x) * skew * (1.0 + skew) * bracket


def sigma_squared(model: ClassScoreModel, x: float) -> VarianceProfile:
    alpha, slope, pr = local_components(model, x)
    sigma2 = variance_from_components(pr, alpha, slope, x, model.skew)
    return VarianceProfile(x, pr, alpha, slope, sigma2, model.skew)


def normal_approximation(model: ClassScoreModel, x: float, n: int) -> tuple[float, float]:
    """Mean and standard deviation of the approximating normal law of ``PRhat(x)``."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    prof = sigma_squared(model, x)
    if prof.flag == "degenerate":
        raise DegenerateLimitError(f"sigma2({x}) = 0: the limit law is a point mass at {prof.pr}")
    if prof.flag == "unbounded":
        raise UnboundedVarianceError(f"sigma2({x}) is infinite")
    return prof.pr, math.sqrt(prof.sigma2 / n)


# --------------------------------------------------------------------------
# regularity diagnostics


def _grid(lo: float, hi: float, points: int) -> np.ndarray:
    if not 0.0 < lo <= hi < 1.0:
        raise DomainError(f"need 0 < lo <= hi < 1, got [{lo}, {hi}]")
    return np.linspace(lo, hi, points)


def slope_profile(model: ClassScoreModel, lo: float, hi: float, points: int = 2001) -> tuple[np.ndarray, np.ndarray]:
    """``f-(q)/f+(q)`` with ``q = F+^{-1}(1 - x)`` over ``x`` in ``[lo, hi]``."""
    _require_densities(model)
    x = _grid(lo, hi, points)
    q = np.asarray(model.plus.isf(x))
    log_m = np.asarray(model.minus.logpdf(q))
    log_p = np.asarray(model.plus.logpdf(q))
    slope = np.empty(x.shape)
    zero = np.isneginf(log_m)
    vanish = ~zero & (log_p < math.log(DENSITY_FLOOR))
    rest = ~(zero | vanish)
    slope[zero] = 0.0
    slope[vanish] = math.inf
    with np.errstate(over="ignore"):
        slope[rest] = np.exp(log_m[rest] - log_p[rest])
    return x, slope


def _log_density_at_quantile(model: ClassScoreModel, x: np.ndarray) -> np.ndarray:
    return np.asarray(model.plus.logpdf(model.plus.isf(x)))


def tail_profile(
    model: ClassScoreModel, lo: float, hi: float, points: int = 2001, step: float = FD_STEP
) -> tuple[np.ndarray, np.ndarray]:
    """``x (1 - x) |d/dx log f+(F+^{-1}(1 - x))|`` by central differences.

    Since ``x (1 - x) d/dx = d/du`` with ``u = logit(x)``, the derivative is
    taken in ``u`` with step ``step``; the stencil never leaves (0, 1).
    """
    _require_densities(model)
    x = _grid(lo, hi, points)
    u = np.log(x) - np.log1p(-x)
    up = _log_density_at_quantile(model, special.expit(u + step))
    down = _log_density_at_quantile(model, special.expit(u - step))
    with np.errstate(invalid="ignore"):
        deriv = (up - down) / (2.0 * step)
    return x, np.abs(deriv)


@dataclass(frozen=True)
class ConditionReport:
    epsilon: float
    slope_sup: float
    gamma_estimate: float
    density_positive: bool

    @property
    def slope_bounded(self) -> bool:
        return math.isfinite(self.slope_sup)

    @property
    def tail_controlled(self) -> bool:
        return math.isfinite(self.gamma_estimate)

    def verdicts(self) -> dict[str, bool]:
        return {
            "slope_bounded": self.slope_bounded,
            "density_positive": self.density_positive,
            "tail_controlled": self.tail_controlled,
        }

    def to_dict(self) -> dict:
        def enc(v):
            return "inf" if math.isinf(v) else v

        return {
            "epsilon": self.epsilon,
            "slope_sup": enc(self.slope_sup),
            "gamma_estimate": enc(self.gamma_estimate),
            "density_positive": self.density_positive,
            "verdicts": self.verdicts(),
        }


def condition_check(
    model: ClassScoreModel, epsilon: float = DEFAULT_EPSILON, points: int = 2001, step: float = FD_STEP
) -> ConditionReport:
    """Evaluate the slope, positivity and tail conditions on ``[epsilon, 1 - epsilon]``."""
    _require_densities(model)
    if not 0.0 < epsilon < 0.5:
        raise DomainError("epsilon must lie in (0, 1/2)")
    x, slope = slope_profile(model, epsilon, 1.0 - epsilon, points)
    log_p = _log_density_at_quantile(model, x)
    positive = bool(np.all(log_p > -math.inf))
    _, tail = tail_profile(model, epsilon, 1.0 - epsilon, points, step)
    gamma = float(np.max(np.where(np.isnan(tail), math.inf, tail)))
    return ConditionReport(epsilon, float(np.max(slope)), gamma, positive)
