"""Empirical PR curves from labeled scores.

Three estimators are provided:

* ``pr_star``: threshold sweep over the distinct pooled scores using strict
  inequalities (``score > t``); precision is undefined at the largest score.
* ``pr_zero``: the same sweep with weak inequalities (``score >= t``).
* ``eval_pr_hat``: the functional estimator, i.e. the population PR formula
  with both class distributions replaced by their empirical counterparts.
  It is a right-continuous step-and-rise function made of at most ``n+``
  segments, see ``pr_hat_segments``.

Recall values that are integer multiples of ``1/n+`` up to floating-point
noise are snapped onto that lattice before counting, so that the functional
estimator reproduces the threshold-sweep precision exactly at every achieved
recall.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_consistent_length, check_is_fitted, column_or_1d

from .exceptions import DomainError

__all__ = [
    "EmpiricalDistribution",
    "EmpiricalSample",
    "PRPoint",
    "PRPointSet",
    "Segment",
    "PRHatCurve",
    "EmpiricalPRCurve",
    "build_empirical",
    "normalize_labels",
    "pr_star",
    "pr_zero",
    "eval_pr_hat",
    "pr_hat_segments",
]

# Distance to the nearest integer below which n * p is treated as that integer.
LATTICE_TOL = 1e-9

POSITIVE_LABELS = frozenset({"+", "1", "pos", "true"})
NEGATIVE_LABELS = frozenset({"-", "0", "neg", "false"})


def _snap(m: np.ndarray) -> np.ndarray:
    r = np.rint(m)
    return np.where(np.abs(m - r) <= LATTICE_TOL, r, m)


def _finish(out: np.ndarray):
    return float(out) if out.ndim == 0 else out


class EmpiricalDistribution:
    """Step distribution function of a finite sample, ties counted with multiplicity."""

    def __init__(self, scores):
        values = np.sort(np.asarray(scores, dtype=float).ravel())
        if values.size == 0:
            raise DomainError("an empirical distribution needs at least one score")
        if not np.all(np.isfinite(values)):
            raise DomainError("scores must be finite")
        self.sorted = values
        self.count = values.size

    def count_le(self, t) -> np.ndarray:
        return np.searchsorted(self.sorted, t, side="right")

    def count_gt(self, t) -> np.ndarray:
        return self.count - np.searchsorted(self.sorted, t, side="right")

    def count_ge(self, t) -> np.ndarray:
        return self.count - np.searchsorted(self.sorted, t, side="left")

    def cdf(self, t):
        return _finish(np.asarray(self.count_le(np.asarray(t, dtype=float)) / self.count))

    def quantile(self, p):
        """``inf{z : F(z) >= p}``: the ``ceil(p * count)``-th order statistic, ``-inf`` at 0."""
        p = np.asarray(p, dtype=float)
        if np.any(~((p >= 0) & (p <= 1))):
            raise DomainError("probability levels must lie in [0, 1]")
        k = np.ceil(_snap(p * self.count)).astype(int)
        k = np.where(p > 0, np.maximum(k, 1), 0)
        out = np.where(k >= 1, self.sorted[np.clip(k - 1, 0, self.count - 1)], -math.inf)
        return _finish(out)


def build_empirical(scores) -> EmpiricalDistribution:
    return EmpiricalDistribution(scores)


def normalize_labels(labels) -> np.ndarray:
    """Map labels in ``{+, -, 1, 0, pos, neg, True, False}`` to a boolean array."""
    out = []
    for i, lab in enumerate(np.asarray(labels, dtype=object).ravel()):
        key = str(lab).strip().lower()
        if isinstance(lab, (bool, np.bool_)):
            out.append(bool(lab))
        elif key in POSITIVE_LABELS or key == "1.0":
            out.append(True)
        elif key in NEGATIVE_LABELS or key == "0.0":
            out.append(False)
        else:
            raise ValueError(f"unrecognized class label {lab!r} at position {i}")
    return np.asarray(out, dtype=bool)


@dataclass(frozen=True, eq=False)
class EmpiricalSample:
    """Observed scores of the ``+`` and ``-`` classes."""

    s_plus: np.ndarray
    s_minus: np.ndarray

    def __post_init__(self):
        plus = np.asarray(self.s_plus, dtype=float).ravel()
        minus = np.asarray(self.s_minus, dtype=float).ravel()
        if plus.size == 0 or minus.size == 0:
            raise DomainError("each class needs at least one score")
        if not (np.all(np.isfinite(plus)) and np.all(np.isfinite(minus))):
            raise DomainError("scores must be finite")
        object.__setattr__(self, "s_plus", plus)
        object.__setattr__(self, "s_minus", minus)
        object.__setattr__(self, "plus", EmpiricalDistribution(plus))
        object.__setattr__(self, "minus", EmpiricalDistribution(minus))

    @classmethod
    def from_labels(cls, scores, labels) -> "EmpiricalSample":
        scores = np.asarray(scores, dtype=float).ravel()
        mask = normalize_labels(labels)
        if mask.shape != scores.shape:
            raise DomainError("scores and labels differ in length")
        return cls(scores[mask], scores[~mask])

    @property
    def n_plus(self) -> int:
        return self.s_plus.size

    @property
    def n_minus(self) -> int:
        return self.s_minus.size

    @property
    def n(self) -> int:
        return self.n_plus + self.n_minus

    def thresholds(self) -> np.ndarray:
        """Distinct scores observed over both classes, ascending."""
        return np.unique(np.concatenate([self.s_plus, self.s_minus]))


class PRPoint(NamedTuple):
    t: float
    recall: float
    precision: float | None  # None marks an empty denominator


@dataclass(frozen=True)
class PRPointSet:
    points: tuple[PRPoint, ...]
    inclusive: bool

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def at(self, t: float) -> PRPoint:
        for p in self.points:
            if p.t == t:
                return p
        raise KeyError(t)


def _sweep(sample: EmpiricalSample, inclusive: bool) -> PRPointSet:
    t = sample.thresholds()
    count = (lambda d: d.count_ge(t)) if inclusive else (lambda d: d.count_gt(t))
    tp, fp = count(sample.plus), count(sample.minus)
    points = []
    for ti, a, b in zip(t.tolist(), tp.tolist(), fp.tolist()):
        precision = a / (a + b) if a + b > 0 else None
        points.append(PRPoint(ti, a / sample.n_plus, precision))
    return PRPointSet(tuple(points), inclusive)


def pr_star(sample: EmpiricalSample) -> PRPointSet:
    """(recall, precision) at each observed threshold, counting scores ``> t``."""
    return _sweep(sample, inclusive=False)


def pr_zero(sample: EmpiricalSample) -> PRPointSet:
    """(recall, precision) at each observed threshold, counting scores ``>= t``."""
    return _sweep(sample, inclusive=True)


def _recall_counts(sample: EmpiricalSample, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(~((x > 0) & (x <= 1))):
        raise DomainError("recall must lie in (0, 1]")
    m = x * sample.n_plus
    # never snap onto 0: any positive recall keeps a positive count
    return np.where(m < 0.5, m, _snap(m))


def eval_pr_hat(sample: EmpiricalSample, x):
    """Functional empirical precision at recall ``x`` in (0, 1].

    Equals ``1 / (1 + (n-/n+) [1 - F-^(F+^^{-1}(1 - x))] / x)``, evaluated as
    ``n+ x / (n+ x + #{S- > F+^^{-1}(1 - x)})``. At ``x = 1`` the quantile is
    ``-inf`` and the value is ``n+ / n``.
    """
    a = _recall_counts(sample, x)
    # ceil(n+ (1 - x)) = n+ - floor(n+ x)
    k = sample.n_plus - np.floor(a).astype(int)
    q = np.where(k >= 1, sample.plus.sorted[np.clip(k - 1, 0, sample.n_plus - 1)], -math.inf)
    b = sample.minus.count_gt(q)
    return _finish(a / (a + b))


class Segment(NamedTuple):
    x_start: float
    x_end: float
    threshold: float  # the + score returned by the empirical quantile on this piece
    false_count: int  # number of - scores above the threshold
    count_start: int  # n+ * x_start
    count_end: int


@dataclass(frozen=True, eq=False)
class PRHatCurve:
    """Segment decomposition of the functional empirical PR estimator.

    Segments are ordered by recall. The first is open at 0; the others are
    closed on the left and open on the right; the single point ``x = 1`` is
    handled separately. ``discontinuities`` lists interior breakpoints where
    the left limit strictly exceeds the value.
    """

    sample: EmpiricalSample
    segments: tuple[Segment, ...]
    breakpoints: np.ndarray
    discontinuities: np.ndarray
    left_limits: np.ndarray
    values_at_discontinuities: np.ndarray
    endpoint_value: float
    endpoint_left_limit: float

    def __call__(self, x):
        a = _recall_counts(self.sample, x)
        level = np.floor(a).astype(int)
        starts = np.array([s.count_start for s in self.segments])
        idx = np.clip(np.searchsorted(starts, level, side="right") - 1, 0, len(self.segments) - 1)
        b = np.array([s.false_count for s in self.segments])[idx]
        out = np.where(level >= self.sample.n_plus, self.endpoint_value, a / (a + b))
        return _finish(out)

    @property
    def n_segments(self) -> int:
        return len(self.segments)


def pr_hat_segments(sample: EmpiricalSample) -> PRHatCurve:
    """Decompose ``eval_pr_hat`` into its segments and locate its jumps."""
    n_plus = sample.n_plus
    values, counts = np.unique(sample.s_plus, return_counts=True)
    cum = np.cumsum(counts)  # n+ F+^(u_j)
    false_counts = sample.minus.count_gt(values)
    segments = []
    # the largest + score owns the segment nearest recall 0
    for j in range(values.size - 1, -1, -1):
        lo = n_plus - int(cum[j])
        hi = n_plus - (int(cum[j - 1]) if j > 0 else 0)
        segments.append(Segment(lo / n_plus, hi / n_plus, float(values[j]), int(false_counts[j]), lo, hi))
    segments[0] = segments[0]._replace(x_start=0.0)

    breaks, jumps, lefts, vals = [], [], [], []
    for left, right in zip(segments[:-1], segments[1:]):
        a = right.count_start
        breaks.append(right.x_start)
        if right.false_count > left.false_count:
            jumps.append(right.x_start)
            lefts.append(a / (a + left.false_count))
            vals.append(a / (a + right.false_count))
    last = segments[-1]
    return PRHatCurve(
        sample=sample,
        segments=tuple(segments),
        breakpoints=np.asarray(breaks),
        discontinuities=np.asarray(jumps),
        left_limits=np.asarray(lefts),
        values_at_discontinuities=np.asarray(vals),
        endpoint_value=n_plus / sample.n,
        endpoint_left_limit=n_plus / (n_plus + last.false_count),
    )


def check_scores_labels(scores, labels) -> tuple[np.ndarray, np.ndarray]:
    """Validate a score vector and its class labels; returns (scores, is_positive)."""
    scores = column_or_1d(np.asarray(scores, dtype=float), warn=True)
    labels = column_or_1d(np.asarray(labels, dtype=object))
    check_consistent_length(scores, labels)
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores contain NaN or infinity")
    mask = normalize_labels(labels)
    if mask.all() or not mask.any():
        raise ValueError("both classes must be present")
    return scores, mask


class EmpiricalPRCurve(BaseEstimator):
    """Estimator wrapper around the functional empirical PR curve.

    ``fit(scores, labels)`` stores the class samples and their segment
    decomposition; ``predict(recall)`` returns estimated precision.

    Parameters
    ----------
    point_sets : bool, default=True
        Also compute the threshold-sweep point sets ``pr_star_`` and ``pr_zero_``.
    """

    def __init__(self, point_sets: bool = True):
        self.point_sets = point_sets

    def fit(self, scores, labels):
        scores, mask = check_scores_labels(scores, labels)
        self.sample_ = EmpiricalSample(scores[mask], scores[~mask])
        self.curve_ = pr_hat_segments(self.sample_)
        self.n_plus_ = self.sample_.n_plus
        self.n_minus_ = self.sample_.n_minus
        self.pi_plus_ = self.n_plus_ / self.sample_.n
        if self.point_sets:
            self.pr_star_ = pr_star(self.sample_)
            self.pr_zero_ = pr_zero(self.sample_)
        return self

    def predict(self, recall) -> np.ndarray:
        check_is_fitted(self, "sample_")
        recall = column_or_1d(np.atleast_1d(np.asarray(recall, dtype=float)))
        return np.asarray(eval_pr_hat(self.sample_, recall))

    def transform(self, recall) -> np.ndarray:
        """Stack ``(recall, precision)`` columns."""
        recall = np.atleast_1d(np.asarray(recall, dtype=float)).ravel()
        return np.column_stack([recall, self.predict(recall)])
