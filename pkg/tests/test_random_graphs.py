import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xpk.errors import InvalidParams
from xpk.graph import complete_graph, connected_components, subset_stats
from xpk.random_graphs import (
    GnpSpec,
    giant_fraction_limit,
    giant_params,
    giant_pipeline,
    gnp,
    monte_carlo_prop1,
    monte_carlo_prop2,
    pair_from_index,
    touch_params,
    trial_seed,
    trim_count,
    wilson_interval,
)


def fixed_point(c, iters=2000):
    y = 1.0
    for _ in range(iters):
        y = 1 - math.exp(-c * y)
    return y


def test_extremes():
    assert gnp(GnpSpec(30, 0.0, 1)).m == 0
    assert gnp(GnpSpec(12, 1.0, 1)) == complete_graph(12)
    with pytest.raises(InvalidParams):
        GnpSpec(10, 1.5, 0)


@pytest.mark.parametrize("p", [0.02, 0.5])
def test_determinism(p):
    a = gnp(GnpSpec(500, p, 42))
    b = gnp(GnpSpec(500, p, 42))
    assert np.array_equal(a.edge_array, b.edge_array)
    assert not np.array_equal(a.edge_array, gnp(GnpSpec(500, p, 43)).edge_array)


def test_mean_edge_count():
    n, p = 10 ** 4, 2 / 10 ** 4
    N = n * (n - 1) // 2
    counts = [gnp(GnpSpec(n, p, trial_seed(5, i))).m for i in range(100)]
    sd_mean = math.sqrt(N * p * (1 - p) / 100)
    assert abs(np.mean(counts) - N * p) <= 3 * sd_mean


@pytest.mark.parametrize("p", [0.05, 0.3])
def test_pairs_uniform(p):
    # every pair of K_8 should appear with frequency p, for both sampling routes
    n, reps = 8, 4000
    hits = np.zeros((n, n))
    for s in range(reps):
        e = gnp(GnpSpec(n, p, trial_seed(9, s))).edge_array
        hits[e[:, 0], e[:, 1]] += 1
    freq = hits[np.triu_indices(n, 1)]
    sd = math.sqrt(reps * p * (1 - p))
    assert np.all(np.abs(freq - reps * p) <= 5 * sd)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 3000))
def test_pair_index_bijective(n):
    N = n * (n - 1) // 2
    k = np.unique(np.r_[0, N - 1, np.linspace(0, N - 1, 200).astype(np.int64)])
    u, v = pair_from_index(k, n)
    assert np.all((0 <= u) & (u < v) & (v < n))
    # lexicographic rank of (u, v) recovers the index
    rank = u * n - u * (u + 1) // 2 + (v - u - 1)
    assert np.array_equal(rank, k)


def test_wilson():
    lo, hi = wilson_interval(0, 20)
    assert lo == 0 and hi == pytest.approx(0.16113, abs=1e-4)
    lo, hi = wilson_interval(10, 20)
    assert lo == pytest.approx(0.29929, abs=1e-4) and hi == pytest.approx(0.70071, abs=1e-4)


def test_local_sparsity_trials_vacuous():
    r = monte_carlo_prop1(100, 1.2, 1.1, 5)
    assert r.params["alpha_n"] < 1
    assert r.violations == 0 and r.passes == 5
    assert all(row["status"] == "PASS_EXACT" for row in r.rows)
    with pytest.raises(InvalidParams):
        monte_carlo_prop1(100, 1.5, 1.5, 1)


def test_touch_trials_vacuous_cases():
    assert touch_params(100, 0.01)[0] == 0
    r = monte_carlo_prop2(100, 2, 0.01, 3)
    assert r.violations == 0
    r = monte_carlo_prop2(2000, 0, 0.1, 3)
    assert r.violations == 0 and all(row["m"] == 0 for row in r.rows)
    with pytest.raises(InvalidParams):
        monte_carlo_prop2(100, 2, 0.5, 1)


def test_trials_parallel_matches_serial():
    a = monte_carlo_prop2(3000, 3, 0.05, 4, seed=3, jobs=1)
    b = monte_carlo_prop2(3000, 3, 0.05, 4, seed=3, jobs=2)
    assert a.rows == b.rows


def test_giant_constants():
    assert giant_fraction_limit(1.2) == pytest.approx(fixed_point(1.2), abs=1e-12)
    assert giant_fraction_limit(1.2) == pytest.approx(0.3137, abs=1e-4)
    assert giant_fraction_limit(0.9) == 0
    assert trim_count(10 ** 5, 0.2) == 248
    p = giant_params(0.2)
    assert p.c1 == 1 + Fraction(1, 175) and p.c2 == 1 + Fraction(1, 350) and p.delta_cap == 6
    with pytest.raises(InvalidParams):
        giant_pipeline(1000, -0.5, 0)


def test_giant_report_consistent():
    r = giant_pipeline(5000, 0.3, 4)
    G = gnp(GnpSpec(5000, 1.3 / 5000, 4))
    giant = connected_components(G)[0]
    assert r.giant_size == len(giant)
    assert r.giant_density == Fraction(subset_stats(G, giant).within, len(giant))
    assert r.trimmed_size == r.giant_size - r.trim_count
    assert (r.extraction is None) == (r.extraction_error is not None)
