import json

import numpy as np
import pytest

import oracles
from prcurve.exceptions import DomainError
from prcurve.population import eval_pr
from prcurve.presets import preset_model
from prcurve.simulation import (
    SimulationConfig,
    compare_to_normal,
    histogram,
    is_bimodal,
    ks_distance,
    run_simulation,
    simulate_replicate,
    summarize,
)

CASE_A_SKEW_10 = preset_model("case-a", 1 / 11)


def small_config(**kw):
    base = dict(model=CASE_A_SKEW_10, n=200, replicates=60, grid=(0.25, 0.5, 1.0), seed=7)
    base.update(kw)
    return SimulationConfig(**base)


class TestConfig:
    @pytest.mark.parametrize(
        "kw",
        [
            {"n": 1},
            {"n": 10.5},
            {"replicates": 0},
            {"grid": (0.0, 0.5)},
            {"grid": (1.2,)},
            {"grid": ()},
            {"seed": -1},
            {"seed": 2**64},
            {"mode": "poisson"},
            {"n": 5, "mode": "fixed-expected"},
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(DomainError):
            small_config(**kw)

    def test_round_trip_dict(self):
        d = small_config().to_dict()
        assert d["n"] == 200 and d["grid"] == [0.25, 0.5, 1.0] and d["mode"] == "binomial"


class TestRun:
    def test_same_config_same_matrix(self):
        a, b = run_simulation(small_config()), run_simulation(small_config())
        assert np.array_equal(a.matrix, b.matrix)
        assert a.write_csv() == b.write_csv()

    def test_worker_count_does_not_matter(self):
        cfg = small_config(replicates=37)
        serial = run_simulation(cfg)
        parallel = run_simulation(cfg, workers=3)
        assert np.array_equal(serial.matrix, parallel.matrix)
        assert serial.write_csv() == parallel.write_csv()
        assert serial.write_json() == parallel.write_json()

    def test_replicates_are_independent_of_run_size(self):
        short = run_simulation(small_config(replicates=10))
        row, _, _ = simulate_replicate(small_config(replicates=10), 9)
        assert np.array_equal(short.matrix[9], row)

    def test_seed_changes_output(self):
        assert not np.array_equal(run_simulation(small_config()).matrix, run_simulation(small_config(seed=8)).matrix)

    def test_values_in_unit_interval(self):
        m = run_simulation(small_config()).matrix
        assert np.all((m >= 0) & (m <= 1))

    def test_mean_positive_count(self):
        res = run_simulation(small_config(n=500, replicates=500, grid=(0.5,)))
        assert abs(res.n_plus.mean() - 500 / 11) <= 1.0

    def test_redraws_counted(self):
        cfg = SimulationConfig(preset_model("case-a", 0.02), n=10, replicates=200, grid=(0.5,), seed=1)
        res = run_simulation(cfg)
        assert res.redraws > 0
        assert np.all((res.n_plus > 0) & (res.n_plus < 10))
        assert res.provenance["redraws"] == res.redraws

    def test_fixed_expected_mode(self):
        res = run_simulation(small_config(mode="fixed-expected"))
        assert np.all(res.n_plus == round(200 / 11)) and res.redraws == 0
        assert res.summary(1.0).flag == "degenerate"
        assert res.summary(1.0).comparison.point_mass == 1.0

    def test_summaries_recomputable(self):
        res = run_simulation(small_config())
        again = summarize(res.matrix, res.grid, res.config.model, res.config.n, res.config.mode)
        assert [s.to_dict() for s in again] == [s.to_dict() for s in res.summaries]

    def test_csv_layout(self):
        text = run_simulation(small_config(replicates=3)).write_csv()
        lines = text.splitlines()
        assert lines[0] == "x,replicate,pr_hat" and len(lines) == 1 + 3 * 3
        assert lines[1].startswith("0.25,0,") and lines[-1].startswith("1,2,")

    def test_json_is_strict(self):
        d = json.loads(run_simulation(small_config()).write_json())
        assert d["provenance"]["seed"] == 7
        assert [s["x"] for s in d["summaries"]] == [0.25, 0.5, 1.0]

    def test_off_grid_column(self):
        with pytest.raises(DomainError):
            run_simulation(small_config()).column(0.3)

    def test_bad_workers(self):
        with pytest.raises(DomainError):
            run_simulation(small_config(), workers=0)


class TestHistogram:
    def test_point(self):
        h = histogram(np.full(10, 0.4))
        assert h.rule == "point" and list(h.counts) == [10]

    def test_fallback_when_iqr_vanishes(self):
        h = histogram(np.r_[np.zeros(90), np.linspace(1, 2, 10)])
        assert h.rule == "fallback-30" and h.counts.size == 30 and h.counts.sum() == 100

    def test_freedman_diaconis(self):
        v = np.random.default_rng(0).normal(size=2000)
        h = histogram(v)
        iqr = np.subtract(*np.percentile(v, [75, 25]))
        assert h.rule == "freedman-diaconis"
        assert h.edges[1] - h.edges[0] <= 2 * iqr / np.cbrt(v.size) + 1e-12
        assert h.counts.sum() == v.size

    def test_lattice_bins_hold_whole_lattice_values(self):
        v = np.random.default_rng(1).binomial(1000, 0.5, 5000) / 1000
        h = histogram(v)
        assert h.rule == "freedman-diaconis-lattice" and h.counts.sum() == v.size
        centres = np.unique(v)
        assert not np.any(np.isclose(centres[:, None], h.edges[None, :], atol=1e-12))
        assert not is_bimodal(h.counts)


class TestBimodality:
    @pytest.mark.parametrize(
        "counts, expected",
        [
            ([10, 0, 10], True),
            ([10, 8, 10], False),
            ([10, 10], False),
            ([1, 5, 9, 5, 1], False),
            ([100, 0, 5], False),
            ([0, 20, 3, 3, 3, 25, 0], True),
            ([20, 20, 0, 0, 20, 20], True),
            ([], False),
        ],
    )
    def test_rule(self, counts, expected):
        assert is_bimodal(counts) is expected

    def test_normal_sample_unimodal(self):
        assert not is_bimodal(histogram(np.random.default_rng(3).normal(size=5000)).counts)

    def test_mixture_bimodal(self):
        rng = np.random.default_rng(4)
        assert is_bimodal(histogram(np.r_[rng.normal(-3, 1, 2500), rng.normal(3, 1, 2500)]).counts)


class TestCompareToNormal:
    def test_ks_matches_order_statistic_oracle(self):
        z = np.random.default_rng(5).normal(0.1, 1.1, 700)
        assert ks_distance(z) == pytest.approx(oracles.ks_statistic(z.tolist(), oracles.std_normal_cdf_fast), abs=1e-12)

    def test_standard_normal_draws(self):
        for seed in range(20):
            assert ks_distance(np.random.default_rng(seed).normal(size=5000)) <= 0.025

    @pytest.mark.slow
    def test_case_a_close_to_normal(self):
        cfg = SimulationConfig(CASE_A_SKEW_10, n=1000, replicates=5000, grid=(0.5,), seed=3)
        cmp = compare_to_normal(run_simulation(cfg, workers=2), x=0.5)
        assert cmp.flag == "ok" and cmp.ks <= 0.05
        assert abs(cmp.z_mean) < 0.2 and abs(cmp.z_sd - 1) < 0.1

    def test_case_d_degenerate(self):
        model = preset_model("case-d", 0.2)
        cfg = SimulationConfig(model, n=500, replicates=200, grid=(0.3,), seed=2)
        cmp = compare_to_normal(run_simulation(cfg), x=0.3)
        assert cmp.flag == "degenerate" and cmp.ks is None
        assert cmp.center == eval_pr(model, 0.3) == 1.0 and cmp.point_mass == 1.0

    def test_endpoint_reference(self):
        res = run_simulation(small_config(replicates=400))
        cmp = compare_to_normal(res, x=1.0)
        assert cmp.flag == "endpoint" and cmp.center == pytest.approx(1 / 11)
        assert np.allclose(res.column(1.0), res.n_plus / 200)

    def test_discrete_uses_plug_in_scale(self):
        cfg = SimulationConfig(preset_model("case-f", 0.5), n=200, replicates=100, grid=(0.5,), seed=1)
        cmp = compare_to_normal(run_simulation(cfg), x=0.5)
        assert cmp.flag == "plug-in-scale"
        assert cmp.z_sd == pytest.approx(1.0, abs=1e-12)

    def test_explicit_model_overrides(self):
        res = run_simulation(small_config())
        other = preset_model("case-c", 1 / 11)
        assert compare_to_normal(res, other, 0.5).center == pytest.approx(eval_pr(other, 0.5))


@pytest.mark.slow
def test_case_f_bimodal_at_04():
    cfg = SimulationConfig(preset_model("case-f", 0.5), n=1000, replicates=2000, grid=(0.4,), seed=11)
    summary = run_simulation(cfg, workers=2).summary(0.4)
    assert summary.bimodal and summary.ks >= 0.15


@pytest.mark.slow
def test_ks_improves_with_n():
    def mean_ks(n):
        out = []
        for seed in range(5):
            cfg = SimulationConfig(CASE_A_SKEW_10, n=n, replicates=1000, grid=(0.5,), seed=seed)
            out.append(compare_to_normal(run_simulation(cfg, workers=2), x=0.5).ks)
        return np.mean(out)

    assert mean_ks(1000) <= mean_ks(100)
