"""
Long Monte Carlo checks of the headline results (run with --runslow)
"""

import time

import numpy as np
import pytest
from scipy import stats

from utils.bi_embedding import (
    bi_shot_noise, embedding_batch, hill_on_branching_points, limit_law_checks, simulate_embedded_degrees
)
from utils.degree_law import expected_tail_counts
from utils.experiments import (
    ExperimentConfig, concentration_sweep, consistency_sweep, pareto_sanity, qq_data, replicate
)
from utils.pa_graph import PaParams, degree_counts, enumerate_degree_law, grow
from utils.seeding import rep_seeds
from utils.tail_estimation import SortedSample, kn_default, tail_empirical
from utils.validation_utils import empirical_law, ks_against, total_variation

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def desk_summary(tmp_path_factory):
    config = ExperimentConfig(model="B", deltas=[-0.5, 0.0, 0.5], ns=[10_000], reps=100, workers=4,
                              output_dir=str(tmp_path_factory.mktemp("desk")))
    return replicate(config).summary.set_index("delta")


@pytest.mark.parametrize("delta,published,tolerance", [(0.0, 2.028, 0.10), (0.5, 2.557, 0.12), (-0.5, 1.484, 0.08)])
def test_model_b_table_cells(desk_summary, delta, published, tolerance):
    row = desk_summary.loc[delta]
    assert abs(row["mean_alpha_hat"] - published) <= tolerance
    if delta == -0.5:
        assert row["mean_alpha_hat"] < 1.5


def test_model_b_qq_correlation(tmp_path):
    config = ExperimentConfig(model="B", deltas=[0.0], ns=[100_000], reps=500, workers=4, output_dir=str(tmp_path))
    records = replicate(config, write=False).records
    estimates = records.loc[records["error"].isna(), "alpha_hat"].to_numpy(dtype=float)
    assert len(estimates) == 500
    assert qq_data(estimates).correlation >= 0.98


def test_iid_pareto_min_distance():
    table = pareto_sanity(1.5, 10_000, 100, seed=2019)
    inside = table["alpha_hat"].between(1.35, 1.65)
    assert inside.mean() >= 0.95


def test_desk_run_is_byte_identical(tmp_path):
    config = dict(model="B", deltas=[0.0], ns=[10_000], reps=20)
    replicate(ExperimentConfig(output_dir=str(tmp_path / "a"), **config))
    replicate(ExperimentConfig(output_dir=str(tmp_path / "b"), workers=3, **config))
    assert (tmp_path / "a" / "summary.csv").read_bytes() == (tmp_path / "b" / "summary.csv").read_bytes()


@pytest.mark.parametrize("delta", [0.0, 1.0])
def test_hill_consistency(delta):
    table = consistency_sweep([delta], [100_000], 20, seed=2019, workers=4)
    target = 1.0 / (2.0 + delta)
    assert table.loc[0, "abs_error"] <= 0.1 * target
    if delta == 0.0:
        assert 0.45 <= table.loc[0, "mean_hill"] <= 0.55


def test_hill_error_shrinks_with_n():
    table = consistency_sweep([0.0], [10_000, 100_000], 20, seed=2019, workers=4).set_index("n")
    assert table.loc[100_000, "abs_error"] <= table.loc[10_000, "abs_error"]


def test_tail_measure_at_two():
    n = 100_000
    k_n = kn_default(n)
    values = [tail_empirical(SortedSample.from_values(grow(PaParams(model="A", delta=0.0, n=n), s).degrees), k_n, 2.0)
              for s in rep_seeds(5, 20)]
    assert abs(np.mean(values) - 0.25) <= 0.05


def test_concentration():
    table = concentration_sweep(0.0, [1_000, 10_000, 100_000], 20, seed=2019)
    assert (table["normalized"] <= 3).all()


@pytest.mark.parametrize("model", ["A", "B"])
@pytest.mark.parametrize("delta", [0.0, 0.5])
def test_three_way_agreement(model, delta):
    n, reps = 4, 100_000
    exact = enumerate_degree_law(model, delta, n)
    seeds = rep_seeds(404, reps)
    embedded = empirical_law(tuple(simulate_embedded_degrees(model, delta, n, s).degrees.tolist()) for s in seeds)
    direct = empirical_law(tuple(grow(PaParams(model=model, delta=delta, n=n), s).degrees.tolist()) for s in seeds)
    assert total_variation(exact, embedded) <= 0.01
    assert total_variation(exact, direct) <= 0.01


@pytest.mark.parametrize("model", ["A", "B"])
def test_limit_laws(model):
    table = embedding_batch(model, 0.0, 10_000, 10_000, seed=2019)
    checks = limit_law_checks(table, model, 0.0).set_index("statistic")
    assert checks.loc["w_hat", "passed"]
    if model == "A":
        assert checks.loc["sigma_hat_1", "passed"]


@pytest.mark.parametrize("theta", [1.0, 2.0])
def test_shot_noise_limit(theta):
    counts = bi_shot_noise(theta, 1.0, 8.0, seed=2019, size=10_000)
    _, p_value = ks_against(counts * np.exp(-8.0), stats.gamma(theta))
    assert p_value >= 0.01


@pytest.mark.parametrize("model", ["A", "B"])
def test_expected_counts_monte_carlo(model):
    n, kmax, reps = 100, 10, 100_000
    tails = np.zeros((reps, kmax + 1))
    for rep, seed in enumerate(rep_seeds(77, reps)):
        counts = degree_counts(grow(PaParams(model=model, delta=0.0, n=n), seed))
        tails[rep] = [counts.n_gt(k) for k in range(kmax + 1)]
    mu = expected_tail_counts(model, 0.0, n, kmax).mu[-1]
    se = tails.std(axis=0, ddof=1) / np.sqrt(reps)
    assert (np.abs(tails.mean(axis=0) - mu) <= 3 * np.maximum(se, 1e-9)).all()


def test_hill_spread_shrinks_with_k():
    reps = 1_000
    spreads = {}
    for k in (100, 10_000):
        values = [hill_on_branching_points(0.0, k + 1, k, s) for s in rep_seeds(k, reps)]
        spreads[k] = np.std(values, ddof=1)
    assert 8 <= spreads[100] / spreads[10_000] <= 12


def test_growth_speed():
    params = PaParams(model="B", delta=0.5, n=1_000_000)
    grow(PaParams(model="B", delta=0.5, n=10), 0)
    start = time.perf_counter()
    graph = grow(params, 2019)
    assert time.perf_counter() - start <= 5.0
    assert graph.degrees.sum() == 2_000_000
