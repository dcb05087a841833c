"""Exact ROC and PR curves of a two-class score model.

For a threshold ``t`` the ROC point is ``(1 - F-(t), 1 - F+(t))`` and the PR
point is ``(1 - F+(t), precision)``. Written as functions of the abscissa:

    roc(x) = 1 - F+(F-^{-1}(1 - x))                       0 < x < 1
    pr(x)  = pi+ x / (pi+ x + pi- [1 - F-(F+^{-1}(1 - x))])

Both are evaluated through the upper-tail pair ``sf``/``isf`` so that small
recalls and small false-positive rates keep full relative accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .distributions import Affine, ScoreDistribution
from .exceptions import (
    DomainError,
    NotApplicableError,
    UndefinedPrecisionError,
    UnsupportedOperationError,
)

__all__ = [
    "ClassScoreModel",
    "CurveGrid",
    "ParametricCurve",
    "LimitReport",
    "MonotonicityVerdict",
    "SeparationCurves",
    "PropertyVerdict",
    "default_grid",
    "eval_roc",
    "eval_pr",
    "pr_from_roc",
    "roc_curve",
    "pr_curve",
    "curve_limits",
    "density_ratio_limit",
    "classify_pr_monotonicity",
    "reference_curves",
    "separation_curves",
    "check_properties",
]

DEFAULT_EPSILON = 1e-4
MONOTONE_TOL = 1e-9
# Distances from an endpoint at which one-sided limits are checked. Some
# models (Case B) approach their limits only for x far below any grid step.
LIMIT_PROBES = np.array([1e-4, 1e-8, 1e-16, 1e-32, 1e-64, 1e-128, 1e-300])
LIMIT_TOL = 1e-2


@dataclass(frozen=True)
class ClassScoreModel:
    """Score laws for the ``+`` and ``-`` classes together with the prior ``pi_plus``."""

    plus: ScoreDistribution
    minus: ScoreDistribution
    pi_plus: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.pi_plus < 1.0:
            raise DomainError(f"pi_plus must lie in (0, 1), got {self.pi_plus}")

    @classmethod
    def from_skew(cls, plus, minus, skew: float) -> "ClassScoreModel":
        if not skew > 0:
            raise DomainError(f"skew must be positive, got {skew}")
        return cls(plus, minus, 1.0 / (1.0 + skew))

    @property
    def pi_minus(self) -> float:
        return 1.0 - self.pi_plus

    @property
    def skew(self) -> float:
        return self.pi_minus / self.pi_plus

    @property
    def is_continuous(self) -> bool:
        return self.plus.is_continuous and self.minus.is_continuous

    def with_pi_plus(self, pi_plus: float) -> "ClassScoreModel":
        return ClassScoreModel(self.plus, self.minus, pi_plus)

    def transformed(self, shift: float, scale: float) -> "ClassScoreModel":
        """Apply the same increasing affine map to both classes."""
        if not scale > 0:
            raise DomainError("only increasing maps (scale > 0) preserve the curves")
        return ClassScoreModel(
            Affine(self.plus, shift, scale), Affine(self.minus, shift, scale), self.pi_plus
        )

    def to_config(self) -> dict[str, Any]:
        return {
            "plus": self.plus.to_config(),
            "minus": self.minus.to_config(),
            "pi_plus": self.pi_plus,
        }


@dataclass(frozen=True)
class CurveGrid:
    """A functional curve sampled at strictly increasing abscissae."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.shape != y.shape or x.ndim != 1:
            raise DomainError("x and y must be 1-d arrays of equal length")
        if np.any(np.diff(x) <= 0):
            raise DomainError("x must be strictly increasing")
        if np.any((x < 0) | (x > 1)) or np.any((y < 0) | (y > 1)):
            raise DomainError("curve coordinates must lie in [0, 1]")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.x.tolist(), self.y.tolist()))


@dataclass(frozen=True)
class ParametricCurve:
    """A curve traced by a threshold; repeated abscissae are allowed."""

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        t, x, y = (np.asarray(v, dtype=float) for v in (self.t, self.x, self.y))
        if not (t.shape == x.shape == y.shape) or t.ndim != 1:
            raise DomainError("t, x and y must be 1-d arrays of equal length")
        if np.any(np.diff(t) >= 0):
            raise DomainError("thresholds must be strictly decreasing")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def points(self) -> list[tuple[float, float, float]]:
        return list(zip(self.t.tolist(), self.x.tolist(), self.y.tolist()))


def default_grid(n_points: int = 999, epsilon: float = DEFAULT_EPSILON, include_one: bool = False) -> np.ndarray:
    """``n_points`` equispaced abscissae on ``[epsilon, 1 - epsilon]``, optionally with ``x = 1``."""
    if n_points < 2:
        raise DomainError("a grid needs at least two points")
    if not 0.0 < epsilon < 0.5:
        raise DomainError("epsilon must lie in (0, 1/2)")
    grid = np.linspace(epsilon, 1.0 - epsilon, n_points)
    return np.append(grid, 1.0) if include_one else grid


def _as_open_unit(x, *, allow_one: bool) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    upper_ok = (x <= 1.0) if allow_one else (x < 1.0)
    if np.any(~((x > 0.0) & upper_ok)):
        interval = "(0, 1]" if allow_one else "(0, 1)"
        raise DomainError(f"abscissa must lie in {interval}")
    return x


def _finish(out: np.ndarray):
    return float(out) if out.ndim == 0 else out


def eval_roc(model: ClassScoreModel, x):
    """True-positive rate at false-positive rate ``x`` in (0, 1)."""
    x = _as_open_unit(x, allow_one=False)
    return _finish(np.asarray(model.plus.sf(model.minus.isf(x)), dtype=float))


def false_alarm_fraction(model: ClassScoreModel, x) -> np.ndarray:
    """``1 - F-(F+^{-1}(1 - x))``: the false-positive rate at recall ``x``."""
    return np.asarray(model.minus.sf(model.plus.isf(x)), dtype=float)


def eval_pr(model: ClassScoreModel, x):
    """Precision at recall ``x`` in (0, 1].

    At ``x = 1`` the curve's left limit ``pi+ / (pi+ + pi- [1 - F-(m+)])``
    is returned, which is where the curve is drawn to end.
    """
    x = _as_open_unit(x, allow_one=True)
    out = np.empty(x.shape)
    one = x == 1.0
    inner = ~one
    pp, pm = model.pi_plus, model.pi_minus
    xi = x[inner]
    alpha = false_alarm_fraction(model, xi)
    out[inner] = pp * xi / (pp * xi + pm * alpha)
    if np.any(one):
        out[one] = pp / (pp + pm * float(model.minus.sf(model.plus.lower)))
    return _finish(out)


def pr_from_roc(pi_plus: float, x_roc: float, y_roc: float) -> tuple[float, float]:
    """Map an ROC point to its PR point ``(recall, precision)``."""
    if not 0.0 < pi_plus < 1.0:
        raise DomainError(f"pi_plus must lie in (0, 1), got {pi_plus}")
    if not (0.0 <= x_roc <= 1.0 and 0.0 <= y_roc <= 1.0):
        raise DomainError("ROC coordinates must lie in [0, 1]")
    if y_roc == 0.0:
        raise UndefinedPrecisionError("precision is undefined when the true-positive rate is 0")
    pi_minus = 1.0 - pi_plus
    return y_roc, pi_plus * y_roc / (pi_plus * y_roc + pi_minus * x_roc)


def roc_curve(model: ClassScoreModel, grid=None) -> CurveGrid:
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    return CurveGrid(grid, np.asarray(eval_roc(model, grid)))


def pr_curve(model: ClassScoreModel, grid=None) -> CurveGrid:
    grid = default_grid(include_one=True) if grid is None else np.asarray(grid, dtype=float)
    return CurveGrid(grid, np.asarray(eval_pr(model, grid)))


# --------------------------------------------------------------------------
# limits


@dataclass(frozen=True)
class LimitReport:
    roc_at_0: float
    roc_at_1: float
    pr_at_1: float
    pr_at_0: float | None
    p2_branch: str
    k_estimate: float | None

    def to_dict(self) -> dict[str, Any]:
        def enc(v):
            if v is None:
                return None
            return "inf" if math.isinf(v) else v

        return {
            "roc_at_0": self.roc_at_0,
            "roc_at_1": self.roc_at_1,
            "pr_at_1": self.pr_at_1,
            "pr_at_0": self.pr_at_0,
            "p2_branch": self.p2_branch,
            "k_estimate": enc(self.k_estimate),
        }


def _approach_points(dist: ScoreDistribution, n_probes: int) -> np.ndarray:
    """Thresholds increasing to the upper support endpoint of ``dist``."""
    top = dist.upper
    anchor = float(dist.quantile(0.5))
    i = np.arange(1, n_probes + 1, dtype=float)
    if math.isinf(top):
        spread = float(dist.quantile(0.75) - dist.quantile(0.25)) or 1.0
        return anchor + spread * np.exp2(i)
    span = top - anchor
    if span <= 0:
        span = top - float(dist.quantile(0.25)) or 1.0
    return top - span * np.exp2(-i)


def _log_ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """``log(num/den)`` from log-densities; nan where both vanish."""
    out = np.full(num.shape, math.nan)
    both_fin = np.isfinite(num) & np.isfinite(den)
    out[both_fin] = num[both_fin] - den[both_fin]
    out[np.isneginf(den) & np.isfinite(num)] = math.inf
    out[np.isneginf(num) & np.isfinite(den)] = -math.inf
    return out


def density_ratio_limit(model: ClassScoreModel, n_probes: int = 40, weight_by_tail: bool = False) -> float:
    """Numerical ``lim_{t -> M+} f-(t) / f+(t)`` (optionally times ``1 - F+(t)``).

    Probes approach the upper support endpoint of the ``+`` class, halving
    the remaining distance for finite endpoints and doubling the step for
    infinite ones. The limit is declared infinite when the ratio exceeds
    1e12 and has not decreased over the last five probes.
    """
    if not model.is_continuous:
        raise UnsupportedOperationError("density ratio needs densities for both classes")
    t = _approach_points(model.plus, n_probes)
    log_r = _log_ratio(np.asarray(model.minus.logpdf(t)), np.asarray(model.plus.logpdf(t)))
    if weight_by_tail:
        with np.errstate(divide="ignore"):
            log_tail = np.log(np.asarray(model.plus.sf(t)))
        log_r = np.where(np.isneginf(log_tail) & ~np.isposinf(log_r), -math.inf, log_r + log_tail)
    log_r = log_r[~np.isnan(log_r)]
    if log_r.size == 0:
        raise UnsupportedOperationError("both densities vanish along the approach to M+")
    with np.errstate(over="ignore"):
        ratio = np.exp(log_r)
    tail = ratio[-5:]
    if tail[-1] > 1e12 and np.all(tail[1:] >= tail[:-1]):
        return math.inf
    return float(ratio[-1])


def curve_limits(model: ClassScoreModel) -> LimitReport:
    """One-sided limits of the ROC curve (at 0 and 1) and PR curve (at 1 and 0)."""
    pp, pm = model.pi_plus, model.pi_minus
    roc_at_0 = float(model.plus.sf(model.minus.upper))
    roc_at_1 = float(model.plus.sf(model.minus.lower))
    pr_at_1 = pp / (pp + pm * float(model.minus.sf(model.plus.lower)))
    if model.plus.upper < model.minus.upper:
        return LimitReport(roc_at_0, roc_at_1, pr_at_1, 0.0, "P2c", None)
    if not model.is_continuous:
        return LimitReport(roc_at_0, roc_at_1, pr_at_1, None, "P2b-unsupported", None)
    k = density_ratio_limit(model)
    pr_at_0 = 0.0 if math.isinf(k) else pp / (pp + pm * k)
    return LimitReport(roc_at_0, roc_at_1, pr_at_1, pr_at_0, "P2b", k)


# --------------------------------------------------------------------------
# monotonicity


def _monotone_flags(values: np.ndarray, tol: float = MONOTONE_TOL) -> tuple[bool, bool]:
    """(nonincreasing, nondecreasing) up to ``tol`` against the running extremum."""
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        return True, True
    with np.errstate(invalid="ignore"):
        rise = v[1:] - np.minimum.accumulate(v)[:-1]
        fall = np.maximum.accumulate(v)[:-1] - v[1:]
    # inf - inf pairs are equal infinities, not moves
    rise = np.where(np.isnan(rise), 0.0, rise)
    fall = np.where(np.isnan(fall), 0.0, fall)
    return bool(np.all(rise <= tol)), bool(np.all(fall <= tol))


@dataclass(frozen=True)
class MonotonicityVerdict:
    classification: str
    roc_concave: bool | None = None
    roc_convex: bool | None = None
    plus_max_ge_minus_max: bool = True
    p3a_applies: bool = False
    p3b_applies: bool = False
    grid: np.ndarray = field(default=None, repr=False)
    values: np.ndarray = field(default=None, repr=False)

    def to_dict(self) -> dict[str, Any]:
        return {
            "classification": self.classification,
            "roc_concave": self.roc_concave,
            "roc_convex": self.roc_convex,
            "plus_max_ge_minus_max": self.plus_max_ge_minus_max,
            "p3a_applies": self.p3a_applies,
            "p3b_applies": self.p3b_applies,
        }


def likelihood_ratio(model: ClassScoreModel, t) -> np.ndarray:
    """``h(t) = f+(t) / f-(t)``, with ``inf`` where only ``f-`` vanishes."""
    t = np.asarray(t, dtype=float)
    log_h = _log_ratio(np.asarray(model.plus.logpdf(t)), np.asarray(model.minus.logpdf(t)))
    with np.errstate(over="ignore"):
        return np.exp(log_h)


def classify_pr_monotonicity(
    model: ClassScoreModel, resolution: int = 2000, epsilon: float = DEFAULT_EPSILON
) -> MonotonicityVerdict:
    """Classify the PR curve sampled on ``resolution`` points of ``[epsilon, 1 - epsilon]``.

    For continuous models the verdict also carries the sufficient-condition
    report: whether ``h = f+/f-`` is numerically monotone over the scores
    visited by the grid (ROC concave/convex) and whether the upper support
    endpoints make the two monotonicity theorems applicable.
    """
    if resolution < 3:
        raise DomainError("grid resolution must be at least 3")
    grid = default_grid(resolution, epsilon)
    values = np.asarray(eval_pr(model, grid))
    nonincreasing, nondecreasing = _monotone_flags(values)
    if nonincreasing:
        # a flat curve satisfies both; report it with the concave case
        classification = "nonincreasing"
    elif nondecreasing:
        classification = "nondecreasing"
    else:
        classification = "non-monotone"

    plus_ge = model.plus.upper >= model.minus.upper
    if not model.is_continuous:
        return MonotonicityVerdict(classification, plus_max_ge_minus_max=plus_ge, grid=grid, values=values)

    t = np.unique(np.concatenate([model.plus.isf(grid), model.minus.isf(grid)]))
    log_h = _log_ratio(np.asarray(model.plus.logpdf(t)), np.asarray(model.minus.logpdf(t)))
    log_h = log_h[~np.isnan(log_h)]
    h_down, h_up = _monotone_flags(log_h)
    concave, convex = h_up, h_down
    p3a = concave and plus_ge
    p3b = False
    if convex and not plus_ge:
        p3b = density_ratio_limit(model, weight_by_tail=True) < 1e-9
    return MonotonicityVerdict(
        classification,
        roc_concave=concave,
        roc_convex=convex,
        plus_max_ge_minus_max=plus_ge,
        p3a_applies=p3a,
        p3b_applies=p3b,
        grid=grid,
        values=values,
    )


# --------------------------------------------------------------------------
# reference and envelope curves


def reference_curves(pi_plus: float, grid) -> tuple[CurveGrid, CurveGrid, CurveGrid]:
    """Chance ROC ``y = x``, chance PR ``y = pi+`` and the PR lower bound."""
    if not 0.0 < pi_plus < 1.0:
        raise DomainError(f"pi_plus must lie in (0, 1), got {pi_plus}")
    x = _as_open_unit(grid, allow_one=True)
    pi_minus = 1.0 - pi_plus
    chance_roc = CurveGrid(x, x.copy())
    chance_pr = CurveGrid(x, np.full(x.shape, pi_plus))
    lower = CurveGrid(x, pi_plus * x / (pi_plus * x + pi_minus))
    return chance_roc, chance_pr, lower


def pr_lower_bound(pi_plus: float, x):
    x = np.asarray(x, dtype=float)
    return _finish(pi_plus * x / (pi_plus * x + (1.0 - pi_plus)))


@dataclass(frozen=True)
class SeparationCurves:
    perfect_roc: ParametricCurve | None
    perfect_pr: ParametricCurve | None
    reverse_roc: ParametricCurve | None
    reverse_pr: ParametricCurve | None


def separation_curves(model: ClassScoreModel, thresholds: Iterable[float]) -> SeparationCurves:
    """Threshold-indexed perfect- and reverse-separation curves.

    The perfect branch needs ``M- < m+`` and the reverse branch ``M+ < m-``;
    thresholds outside every case range of a branch are dropped from it.
    """
    m_p, M_p = model.plus.lower, model.plus.upper
    m_m, M_m = model.minus.lower, model.minus.upper
    perfect = M_m < m_p
    reverse = M_p < m_m
    if not (perfect or reverse):
        raise NotApplicableError(
            f"neither M- < m+ ({M_m} < {m_p}) nor M+ < m- ({M_p} < {m_m}) holds"
        )
    ts = sorted({float(t) for t in thresholds}, reverse=True)
    pp, pm = model.pi_plus, model.pi_minus

    def build(rows):
        if not rows:
            return ParametricCurve(np.empty(0), np.empty(0), np.empty(0))
        return ParametricCurve(*map(np.array, zip(*rows)))

    p_roc, p_pr, r_roc, r_pr = [], [], [], []
    for t in ts:
        sf_p, sf_m = float(model.plus.sf(t)), float(model.minus.sf(t))
        if perfect:
            if M_p > t > m_p:
                p_roc.append((t, 0.0, sf_p))
                p_pr.append((t, sf_p, 1.0))
            elif m_p >= t > M_m:
                p_roc.append((t, 0.0, 1.0))
                p_pr.append((t, 1.0, 1.0))
            elif M_m >= t > m_m:
                p_roc.append((t, sf_m, 1.0))
                p_pr.append((t, 1.0, pp / (pp + pm * sf_m)))
        if reverse:
            if M_m > t > m_m:
                r_roc.append((t, sf_m, 0.0))
            elif m_m >= t > M_p:
                r_roc.append((t, 1.0, 0.0))
            elif M_p >= t > m_p:
                r_roc.append((t, 1.0, sf_p))
            if M_m > t > M_p:
                r_pr.append((t, 0.0, 0.0))
            elif M_p >= t > m_p:
                r_pr.append((t, sf_p, pp * sf_p / (pp * sf_p + pm)))
    return SeparationCurves(
        build(p_roc) if perfect else None,
        build(p_pr) if perfect else None,
        build(r_roc) if reverse else None,
        build(r_pr) if reverse else None,
    )


# --------------------------------------------------------------------------
# property verdicts


@dataclass(frozen=True)
class PropertyVerdict:
    name: str
    passed: bool | None  # None: not applicable
    detail: str

    def __post_init__(self):
        if self.passed is not None:
            object.__setattr__(self, "passed", bool(self.passed))

    @property
    def status(self) -> str:
        return {True: "pass", False: "FAIL", None: "n/a"}[self.passed]


def check_properties(
    model: ClassScoreModel, resolution: int = 2000, expected_monotonicity: str | None = None
) -> list[PropertyVerdict]:
    """Numerically verify the structural ROC/PR properties for ``model``."""
    grid = default_grid(resolution)
    roc = np.asarray(eval_roc(model, grid))
    pr = np.asarray(eval_pr(model, grid))
    limits = curve_limits(model)
    out = []

    roc_up = _monotone_flags(roc, 1e-12)[1]
    out.append(PropertyVerdict("P1 ROC nondecreasing", roc_up, f"roc({grid[0]:.0e})={roc[0]:.6g}, roc(1-eps)={roc[-1]:.6g}"))
    near0 = np.asarray(eval_roc(model, LIMIT_PROBES))
    # near x = 1 the curves are evaluated through the tail mass 1 - x, which
    # can go far below the spacing of doubles next to 1
    near1 = np.asarray(model.plus.sf(model.minus.quantile(LIMIT_PROBES)))
    p1_lim = abs(near0[-1] - limits.roc_at_0) < LIMIT_TOL and abs(near1[-1] - limits.roc_at_1) < LIMIT_TOL
    out.append(PropertyVerdict(
        "P1 ROC limits", p1_lim,
        f"limits (0+, 1-) = ({limits.roc_at_0:.6g}, {limits.roc_at_1:.6g}); "
        f"roc({LIMIT_PROBES[-1]:.0e}) = {near0[-1]:.6g}, roc(1-{LIMIT_PROBES[-1]:.0e}) = {near1[-1]:.6g}",
    ))
    fa = float(model.minus.sf(model.plus.quantile(LIMIT_PROBES[-1])))
    pr_near1 = model.pi_plus / (model.pi_plus + model.pi_minus * fa)
    p2a = abs(pr_near1 - limits.pr_at_1) < LIMIT_TOL
    out.append(PropertyVerdict("P2a PR limit at 1", p2a, f"pr(1-) = {limits.pr_at_1:.6g} [{limits.p2_branch}]"))
    if limits.pr_at_0 is None:
        out.append(PropertyVerdict("P2b/c PR limit at 0", None, "no densities"))
    else:
        pr_near0 = np.asarray(eval_pr(model, LIMIT_PROBES))
        out.append(PropertyVerdict(
            "P2b/c PR limit at 0", abs(pr_near0[-1] - limits.pr_at_0) < LIMIT_TOL,
            f"pr(0+) = {limits.pr_at_0:.6g}, pr({LIMIT_PROBES[0]:.0e}) = {pr_near0[0]:.6g}, "
            f"pr({LIMIT_PROBES[-1]:.0e}) = {pr_near0[-1]:.6g}",
        ))

    verdict = classify_pr_monotonicity(model, resolution)
    consistent = True
    if verdict.p3a_applies and verdict.classification != "nonincreasing":
        consistent = False
    if verdict.p3b_applies and verdict.classification != "nondecreasing":
        consistent = False
    detail = f"PR {verdict.classification}"
    if verdict.roc_concave is not None:
        detail += f"; ROC concave={verdict.roc_concave} convex={verdict.roc_convex}"
    if expected_monotonicity is not None:
        consistent = consistent and verdict.classification == expected_monotonicity
        detail += f"; expected {expected_monotonicity}"
    out.append(PropertyVerdict("P3 PR monotonicity", consistent, detail))

    chance = ClassScoreModel(model.plus, model.plus, model.pi_plus)
    c_roc = np.asarray(eval_roc(chance, grid))
    c_pr = np.asarray(eval_pr(chance, grid))
    if model.plus.is_continuous:
        gap = max(float(np.max(np.abs(c_roc - grid))), float(np.max(np.abs(c_pr - model.pi_plus))))
        p4 = gap <= 1e-8
        detail = f"with F- := F+, max |roc - x|, |pr - pi+| = {gap:.2g}"
    else:
        # atoms make sf(isf(x)) fall below x between achievable levels
        p4 = bool(np.all(c_roc <= grid + 1e-9) and np.all(c_pr >= model.pi_plus - 1e-9))
        detail = "with F- := F+, roc <= x and pr >= pi+ (discrete + law)"
    out.append(PropertyVerdict("P4 chance curves", p4, detail))

    try:
        sep = separation_curves(model, np.concatenate([model.plus.isf(grid), model.minus.isf(grid)]))
        ok = all(
            c is None or (np.all((c.x >= 0) & (c.x <= 1)) and np.all((c.y >= 0) & (c.y <= 1)))
            for c in (sep.perfect_roc, sep.perfect_pr, sep.reverse_roc, sep.reverse_pr)
        )
        out.append(PropertyVerdict("P5 perfect separation", ok if sep.perfect_pr is not None else None, "supports disjoint"))
    except NotApplicableError as exc:
        out.append(PropertyVerdict("P5 perfect separation", None, str(exc)))

    bound = pr_lower_bound(model.pi_plus, grid)
    out.append(PropertyVerdict("P6 PR lower bound", bool(np.all(pr >= bound - 1e-12)), "pr >= pi+ x / (pi+ x + pi-)"))

    moved = model.transformed(3.0, 2.0)
    d_roc = float(np.max(np.abs(np.asarray(eval_roc(moved, grid)) - roc)))
    d_pr = float(np.max(np.abs(np.asarray(eval_pr(moved, grid)) - pr)))
    out.append(PropertyVerdict(
        "P7 invariance", max(d_roc, d_pr) <= 1e-9, f"max change under s -> 3 + 2 s: {max(d_roc, d_pr):.2e}"
    ))
    return out
