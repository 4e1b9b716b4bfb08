import math

import numpy as np
import pytest
from scipy import stats

from utils.bi_embedding import (
    bi_shot_noise, birth_process_ctmc, birth_process_mixed_poisson, embedding_batch,
    hill_on_branching_points, limit_law_checks, sigma_limit_law, simulate_branching_times,
    simulate_embedded_degrees, w_limit_law
)
from utils.pa_graph import Model, PaParams, enumerate_degree_law, grow
from utils.seeding import rep_seeds
from utils.validation_utils import empirical_law, ks_against, ks_two_sample, total_variation, within_standard_errors


class TestBranchingTimes:
    @pytest.mark.parametrize("model", ["A", "B"])
    def test_starts_at_zero_and_increases(self, model):
        times = simulate_branching_times(model, 0.3, 1_000, seed=1)
        assert times.times[0] == 0.0
        assert (times.gaps > 0).all()
        assert times.n == 1_000

    def test_start_times(self):
        a = simulate_branching_times("A", 0.0, 5, seed=2)
        b = simulate_branching_times("B", 0.0, 5, seed=2)
        assert np.array_equal(a.start_times, a.times)
        assert b.start_times[0] == 0.0 and b.start_times[1] == 0.0
        assert np.array_equal(b.start_times[1:], b.times[:-1])

    @pytest.mark.parametrize("model,delta", [("A", 0.0), ("B", 0.5)])
    def test_scaled_gaps_are_unit_exponential(self, model, delta):
        n = 50_000
        times = simulate_branching_times(model, delta, n, seed=7)
        rates = (2 + delta) * np.arange(1, n)
        if model == "B":
            rates = rates + 1 + delta
        scaled = times.gaps * rates
        assert within_standard_errors(scaled, 1.0)
        _, p_value = ks_against(scaled, stats.expon())
        assert p_value > 0.01

    def test_first_gap_mean(self):
        gaps = np.array([simulate_branching_times("A", 0.0, 2, s).times[1] for s in rep_seeds(3, 5_000)])
        assert within_standard_errors(gaps, 0.5)

    def test_single_node(self):
        assert simulate_branching_times("A", 0.0, 1, 0).times.tolist() == [0.0]

    def test_rejects(self):
        with pytest.raises(ValueError):
            simulate_branching_times("A", -1.0, 10, 0)
        with pytest.raises(ValueError):
            simulate_branching_times("A", 0.0, 0, 0)


class TestEmbeddedDegrees:
    @pytest.mark.parametrize("model,delta", [("A", 0.0), ("B", 0.5)])
    def test_degree_sum_and_times(self, model, delta):
        trace = simulate_embedded_degrees(model, delta, 2_000, seed=5)
        assert trace.degrees.sum() == 4_000
        assert (np.diff(trace.birth_times) >= 0).all()
        assert trace.w_hat > 0

    @pytest.mark.parametrize("model", ["A", "B"])
    def test_times_match_branching_times(self, model):
        trace = simulate_embedded_degrees(model, 0.2, 3_000, seed=9)
        times = simulate_branching_times(model, 0.2, 3_000, seed=9)
        assert trace.birth_times == pytest.approx(times.times, rel=1e-12)

    def test_one_target_per_node(self):
        trace = simulate_embedded_degrees("A", 0.0, 500, seed=4)
        assert len(trace.targets) == len(trace.birth_times) == 500

    def test_sigma_hat_first_node(self):
        trace = simulate_embedded_degrees("A", 0.0, 100, seed=1)
        expected = trace.degrees[0] * math.exp(-trace.branching.terminal)
        assert trace.sigma_hat[0] == pytest.approx(expected)

    @pytest.mark.parametrize("model,delta", [("A", 0.0), ("B", 0.0)])
    def test_max_degree_settles_on_limit_point(self, model, delta):
        n, reps = 1_000, 1_000
        direct = [grow(PaParams(model=model, delta=delta, n=n), s).degrees.max() / n ** (1 / (2 + delta))
                  for s in rep_seeds(61, reps)]
        limit = [simulate_embedded_degrees(model, delta, 4 * n, s).max_limit_point for s in rep_seeds(62, reps)]
        _, p_value = ks_two_sample(np.array(direct), np.array(limit))
        assert p_value > 0.01

    @pytest.mark.parametrize("model,delta,n", [("A", 0.0, 3), ("B", 0.0, 3), ("A", 0.5, 4)])
    def test_law_matches_enumeration(self, model, delta, n):
        exact = enumerate_degree_law(model, delta, n)
        draws = [tuple(simulate_embedded_degrees(model, delta, n, s).degrees.tolist())
                 for s in rep_seeds(21, 20_000)]
        assert total_variation(exact, empirical_law(draws)) < 0.02

    def test_limit_laws_moderate_size(self):
        table = embedding_batch("A", 0.0, 1_000, 400, seed=2019)
        checks = limit_law_checks(table, "A", 0.0)
        assert checks["passed"].all()
        assert list(table.columns) == ["rep", "T_n", "w_hat", "sigma_hat_1", "max_scaled_degree"]


class TestLimitLaws:
    def test_w_laws(self):
        assert w_limit_law("A", 0.7).mean() == pytest.approx(1.0)
        assert w_limit_law(Model.B, 0.0).mean() == pytest.approx(1.5)
        assert w_limit_law("B", 1.0).mean() == pytest.approx(5 / 3)

    @pytest.mark.parametrize("delta", [0.0, 0.5])
    def test_model_b_w_matches_sampler(self, delta):
        n = 10_000
        w = np.array([simulate_branching_times("B", delta, n, s).w_hat() for s in rep_seeds(88, 2_000)])
        c = (1 + delta) / (2 + delta)
        assert within_standard_errors(w, n * (1 + c) / (n + c))
        _, p_value = ks_against(w, w_limit_law("B", delta))
        assert p_value > 0.01
        _, p_value = ks_against(w, stats.gamma((3 + 2 * delta) / (1 + delta)))
        assert p_value < 0.01

    def test_sigma_laws(self):
        assert sigma_limit_law(0.0, 1).mean() == pytest.approx(2.0)
        assert sigma_limit_law(0.5, 3).mean() == pytest.approx(1.5)
        with pytest.raises(ValueError):
            sigma_limit_law(0.0, 0)


class TestBirthProcesses:
    def test_zero_horizon(self):
        sample = birth_process_mixed_poisson(1.0, 0.0, seed=1, size=100)
        assert (sample.count == 1).all()
        assert (birth_process_ctmc(2.0, 0.0, seed=1, size=50).count == 1).all()

    def test_mixed_poisson_mean(self):
        sample = birth_process_mixed_poisson(1.0, 2.0, seed=3, size=100_000)
        assert within_standard_errors(sample.count, math.e ** 2)
        assert sample.latent is not None and len(sample.latent) == 100_000

    def test_ctmc_mean(self):
        sample = birth_process_ctmc(1.0, 1.0, seed=4, size=50_000)
        assert within_standard_errors(sample.count, math.e)

    def test_two_routes_agree(self):
        mixed = birth_process_mixed_poisson(1.0, 1.0, seed=5, size=100_000).count
        direct = birth_process_ctmc(1.0, 1.0, seed=6, size=100_000).count
        _, p_value = ks_two_sample(mixed, direct)
        assert p_value > 0.01

    def test_scaled_limit_is_exponential(self):
        sample = birth_process_mixed_poisson(1.0, 8.0, seed=8, size=10_000)
        _, p_value = ks_against(sample.scaled, stats.expon())
        assert p_value > 0.01

    def test_rejects(self):
        with pytest.raises(ValueError):
            birth_process_mixed_poisson(0.0, 1.0, 0)
        with pytest.raises(ValueError):
            birth_process_ctmc(1.0, -1.0, 0)


class TestShotNoise:
    def test_no_immigration(self):
        assert (bi_shot_noise(0.0, 1.0, 8.0, seed=1, size=100) == 0).all()

    @pytest.mark.parametrize("theta", [1.0, 2.0])
    def test_gamma_limit(self, theta):
        t = 8.0
        counts = bi_shot_noise(theta, 1.0, t, seed=int(10 * theta), size=10_000)
        _, p_value = ks_against(counts * math.exp(-t), stats.gamma(theta))
        assert p_value > 0.01

    def test_mean(self):
        theta, lam, t = 1.5, 0.5, 3.0
        counts = bi_shot_noise(theta, lam, t, seed=2, size=50_000)
        # E BI(t) = (theta / lambda) (e^{lambda t} - 1)
        assert within_standard_errors(counts, theta / lam * math.expm1(lam * t))

    def test_rejects(self):
        with pytest.raises(ValueError):
            bi_shot_noise(-1.0, 1.0, 1.0, 0)


class TestHillOnBranchingPoints:
    @pytest.mark.parametrize("delta", [0.0, 1.0])
    def test_close_to_inverse_index(self, delta):
        k = 10_000
        value = hill_on_branching_points(delta, k + 1, k, seed=31)
        assert value == pytest.approx(1 / (2 + delta), rel=0.03)

    def test_two_computations_agree(self):
        for seed in range(5):
            telescoped = hill_on_branching_points(0.5, 2_000, 1_500, seed, method="telescoped")
            direct = hill_on_branching_points(0.5, 2_000, 1_500, seed, method="direct")
            assert telescoped == pytest.approx(direct, rel=1e-9)

    def test_rejects(self):
        with pytest.raises(ValueError):
            hill_on_branching_points(0.0, 10, 10, 0)
        with pytest.raises(ValueError):
            hill_on_branching_points(0.0, 10, 5, 0, method="other")
