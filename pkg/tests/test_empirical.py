import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

import oracles
from strategies import random_sample_with_ties
from prcurve.empirical import (
    EmpiricalPRCurve,
    EmpiricalSample,
    build_empirical,
    eval_pr_hat,
    pr_hat_segments,
    pr_star,
    pr_zero,
)
from prcurve.exceptions import DomainError
from prcurve.population import eval_pr
from prcurve.presets import PRESETS, preset_model

TOY = EmpiricalSample([0.9, 0.4], [0.5, 0.1])


class TestEcdf:
    def test_count(self):
        assert build_empirical([0.5, 0.1]).cdf(0.4) == 0.5

    def test_order_statistic_rule(self):
        d = build_empirical([0.5, 0.1])
        assert d.quantile(0.5) == 0.1
        assert d.quantile(0.75) == 0.5
        assert d.quantile(0.0) == -math.inf

    def test_ties_counted_with_multiplicity(self):
        d = build_empirical([1.0, 1.0, 2.0])
        assert d.cdf(1.0) == pytest.approx(2 / 3)
        assert d.quantile(2 / 3) == 1.0
        assert d.quantile(0.7) == 2.0

    def test_tiny_level_is_the_minimum(self):
        assert build_empirical([0.5, 0.1]).quantile(1e-12) == 0.1

    def test_empty(self):
        with pytest.raises(DomainError):
            build_empirical([])

    def test_quantile_out_of_range(self):
        with pytest.raises(DomainError):
            build_empirical([1.0]).quantile(1.2)


class TestPointSets:
    def test_pr_star_toy(self):
        ps = pr_star(TOY)
        assert ps.at(0.4) == (0.4, 0.5, 0.5)
        assert ps.at(0.9) == (0.9, 0.0, None)
        assert ps.at(0.1).recall == 1.0 and ps.at(0.1).precision == pytest.approx(2 / 3)

    def test_pr_zero_toy(self):
        ps = pr_zero(TOY)
        assert ps.at(0.9)[1:] == (0.5, 1.0)
        assert ps.at(0.1)[1:] == (1.0, 0.5)
        assert ps.at(0.5)[1:] == (0.5, 0.5)

    def test_thresholds_are_pooled_distinct_scores(self):
        s = EmpiricalSample([0.2, 0.2, 0.7], [0.7, 0.1])
        assert [p.t for p in pr_star(s)] == [0.1, 0.2, 0.7]

    def test_pr_zero_never_undefined(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            assert all(p.precision is not None for p in pr_zero(random_sample_with_ties(rng)))

    def test_missing_threshold(self):
        with pytest.raises(KeyError):
            pr_star(TOY).at(0.3)


class TestPrHat:
    def test_toy_values(self):
        assert eval_pr_hat(TOY, 0.5) == 0.5
        assert eval_pr_hat(TOY, 1.0) == 0.5

    def test_perfect_separation(self):
        s = EmpiricalSample([3.0, 4.0, 5.0], [0.0, 1.0])
        assert np.all(eval_pr_hat(s, np.array([1, 2]) / 3) == 1.0)

    @pytest.mark.parametrize("x", [0.0, -0.5, 1.5])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            eval_pr_hat(TOY, x)

    def test_below_first_recall(self):
        # quantile(1 - x) is the largest + score for every x < 1/n+
        assert eval_pr_hat(TOY, 0.1) == pytest.approx(1.0)

    def test_tiny_recall_keeps_positive_count(self):
        s = EmpiricalSample([0.0], [1.0])
        assert eval_pr_hat(s, 1e-10) == pytest.approx(1e-10)

    def test_from_labels(self):
        s = EmpiricalSample.from_labels([0.9, 0.5, 0.4, 0.1], ["+", "neg", 1, False])
        assert list(s.s_plus) == [0.9, 0.4] and list(s.s_minus) == [0.5, 0.1]


class TestSegments:
    def test_toy_jump(self):
        curve = pr_hat_segments(TOY)
        assert list(curve.discontinuities) == [0.5]
        assert curve.left_limits[0] == 1.0 and curve.values_at_discontinuities[0] == 0.5
        assert curve.endpoint_value == 0.5

    def test_single_positive(self):
        curve = pr_hat_segments(EmpiricalSample([0.3], [0.1, 0.5]))
        assert curve.n_segments == 1 and curve.discontinuities.size == 0

    def test_case_f_sample_jumps(self):
        preset = PRESETS["case-f"]
        s = EmpiricalSample(preset.plus.sample(400, 11), preset.minus.sample(400, 12))
        curve = pr_hat_segments(s)
        assert curve.discontinuities.size >= 3
        for xj, left, value in zip(curve.discontinuities, curve.left_limits, curve.values_at_discontinuities):
            assert left > value
            assert eval_pr_hat(s, xj) == value
            assert eval_pr_hat(s, xj - 1e-6 / s.n_plus) == pytest.approx(left, abs=1e-6)

    def test_at_most_n_plus_segments(self):
        rng = np.random.default_rng(8)
        for _ in range(200):
            s = random_sample_with_ties(rng)
            curve = pr_hat_segments(s)
            assert curve.n_segments <= s.n_plus
            assert curve.n_segments == np.unique(s.s_plus).size

    def test_evaluator_agrees_pointwise(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            s = random_sample_with_ties(rng)
            x = np.concatenate([rng.uniform(1e-6, 1, 50), np.arange(1, s.n_plus + 1) / s.n_plus])
            assert np.array_equal(pr_hat_segments(s)(x), eval_pr_hat(s, x))

    def test_monotone_within_segments(self):
        rng = np.random.default_rng(10)
        for _ in range(200):
            s = random_sample_with_ties(rng)
            for seg in pr_hat_segments(s).segments:
                x = np.linspace(max(seg.x_start, 1e-9), seg.x_end - 1e-6 / s.n_plus, 40)
                assert np.all(np.diff(eval_pr_hat(s, x)) >= 0)


# --------------------------------------------------------------------------
# oracle comparisons


def test_bridge_to_confusion_matrix():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        s = random_sample_with_ties(rng)
        plus, minus = s.s_plus.tolist(), s.s_minus.tolist()
        star = pr_star(s)
        for t in np.unique(s.s_plus):
            recall, precision = oracles.confusion_precision(plus, minus, t)
            if recall == 0:
                continue
            x = float(recall)
            assert eval_pr_hat(s, x) == float(precision)
            assert star.at(t).precision == float(precision)


def test_functional_definition_in_exact_arithmetic():
    rng = np.random.default_rng(77)
    for _ in range(300):
        s = random_sample_with_ties(rng, max_n=12)
        plus, minus = s.s_plus.tolist(), s.s_minus.tolist()
        for k in range(1, 4 * s.n_plus + 1):
            x = Fraction(k, 4 * s.n_plus)
            assert eval_pr_hat(s, float(x)) == pytest.approx(float(oracles.pr_hat(plus, minus, x)), abs=1e-15)


@settings(max_examples=300, deadline=None)
@given(
    st.lists(st.integers(0, 9), min_size=1, max_size=25),
    st.lists(st.integers(0, 9), min_size=1, max_size=25),
    st.floats(1e-9, 1.0, allow_nan=False),
)
def test_range_and_lower_bound(plus, minus, x):
    s = EmpiricalSample(np.array(plus) / 9, np.array(minus) / 9)
    value = eval_pr_hat(s, x)
    pi = s.n_plus / s.n
    assert 0.0 <= value <= 1.0
    assert value >= pi * x / (pi * x + 1 - pi) - 1e-12
    for p in pr_star(s):
        assert 0 <= p.recall <= 1 and (p.precision is None or 0 <= p.precision <= 1)


@pytest.mark.slow
def test_consistency_case_a():
    model = preset_model("case-a", 0.5)
    x = np.linspace(0.2, 0.8, 7)
    truth = np.asarray(eval_pr(model, x))
    hits = 0
    for seed in range(100):
        s = EmpiricalSample(model.plus.sample(50_000, 2 * seed), model.minus.sample(50_000, 2 * seed + 1))
        hits += np.count_nonzero(np.abs(eval_pr_hat(s, x) - truth) <= 0.01)
    assert hits / (100 * x.size) >= 0.99


class TestEstimator:
    def test_fit_predict(self):
        est = EmpiricalPRCurve().fit([0.9, 0.5, 0.4, 0.1], ["+", "-", "+", "-"])
        assert est.n_plus_ == 2 and est.pi_plus_ == 0.5
        assert list(est.predict([0.5, 1.0])) == [0.5, 0.5]
        assert est.transform([0.5]).shape == (1, 2)

    def test_sklearn_protocol(self):
        est = EmpiricalPRCurve(point_sets=False)
        assert clone(est).get_params() == {"point_sets": False}
        est.fit([1, 2, 3], [1, 0, 1])
        assert not hasattr(est, "pr_star_")

    def test_unfitted(self):
        with pytest.raises(NotFittedError):
            EmpiricalPRCurve().predict([0.5])

    def test_single_class(self):
        with pytest.raises(ValueError, match="both classes"):
            EmpiricalPRCurve().fit([0.1, 0.2], ["+", "+"])

    def test_unknown_label(self):
        with pytest.raises(ValueError, match="position 1"):
            EmpiricalPRCurve().fit([0.1, 0.2], ["+", "maybe"])

    def test_non_finite(self):
        with pytest.raises(ValueError):
            EmpiricalPRCurve().fit([0.1, math.nan], ["+", "-"])
