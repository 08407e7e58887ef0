import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from corpus import graphs, random_connected
from xpk.errors import IsolatedVertex, TooLarge, TooSmall
from xpk.graph import (
    build_graph,
    complete_graph,
    cycle_graph,
    disjoint_union,
    empty_graph,
    is_connected,
    path_graph,
    subset_stats,
)
from xpk.spectral import cheeger_exact, lambda1, sweep_cut


def hypercube(d):
    n = 1 << d
    return build_graph(n, [(v, v ^ (1 << i)) for v in range(n) for i in range(d) if v < v ^ (1 << i)])


def complete_bipartite(a, b):
    return build_graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def two_triangles_bridge():
    return build_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


# closed-form second eigenvalues of the normalized Laplacian
CLOSED_FORM = [
    (complete_graph(2), 2.0),
    (cycle_graph(4), 1.0),
    (complete_graph(4), 4 / 3),
    (complete_graph(9), 9 / 8),
    (cycle_graph(8), 1 - math.cos(math.pi / 4)),
    (cycle_graph(100), 1 - math.cos(2 * math.pi / 100)),
    (cycle_graph(301), 1 - math.cos(2 * math.pi / 301)),
    (path_graph(10), 1 - math.cos(math.pi / 9)),
    (path_graph(150), 1 - math.cos(math.pi / 149)),
    (hypercube(4), 2 / 4),
    (hypercube(7), 2 / 7),
    (complete_bipartite(3, 70), 1.0),
]


@pytest.mark.parametrize("G, lam", CLOSED_FORM, ids=lambda x: repr(x) if isinstance(x, float) else None)
def test_lambda1_closed_form(G, lam):
    r = lambda1(G)
    assert r.lambda1 == pytest.approx(lam, rel=1e-8, abs=1e-10)
    assert abs(np.linalg.norm(r.eigvec) - 1) < 1e-12
    w = np.sqrt(G.degrees.astype(float))
    assert abs(w @ r.eigvec) <= 1e-6 * np.linalg.norm(w)


def test_lambda1_errors():
    with pytest.raises(TooSmall):
        lambda1(empty_graph(1))
    with pytest.raises(IsolatedVertex):
        lambda1(disjoint_union(complete_graph(3), empty_graph(1)))


def test_disconnected_is_zero():
    r = lambda1(disjoint_union(complete_graph(3), complete_graph(3)))
    assert r.lambda1 == 0.0
    cut = sweep_cut(disjoint_union(complete_graph(3), complete_graph(3)), r)
    assert len(cut.cut_set) == 3 and cut.edge_boundary == 0


def test_sweep_examples():
    G = two_triangles_bridge()
    cut = sweep_cut(G, lambda1(G))
    assert cut.cut_set.members in ((0, 1, 2), (3, 4, 5))
    assert cut.edge_boundary == 1 and cut.conductance == Fraction(1, 7)
    G = cycle_graph(8)
    cut = sweep_cut(G, lambda1(G))
    m = sorted(cut.cut_set.members)
    assert len(m) == 4 and cut.edge_boundary == 2 and cut.conductance == Fraction(1, 4)
    # four consecutive vertices around the cycle
    assert subset_stats(G, m).within == 3


def test_cheeger_examples():
    assert cheeger_exact(complete_graph(2)).h == 1
    r = cheeger_exact(cycle_graph(4))
    assert r.h == Fraction(1, 2) and len(r.witness) == 2
    assert subset_stats(cycle_graph(4), r.witness).within == 1
    assert cheeger_exact(two_triangles_bridge()).h == Fraction(1, 7)
    r = cheeger_exact(disjoint_union(complete_graph(3), complete_graph(2)))
    assert r.h == 0 and r.witness.members == (3, 4)
    with pytest.raises(TooLarge):
        cheeger_exact(cycle_graph(21))


def test_c4_tight():
    assert abs(lambda1(cycle_graph(4)).lambda1 - 2 * float(cheeger_exact(cycle_graph(4)).h)) < 1e-9


@pytest.mark.parametrize("seed", range(12))
def test_iterative_matches_dense(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(16, 65))
    G = random_connected(n, float(rng.uniform(3, 8)) / n, seed)
    dense = lambda1(G, method="dense").lambda1
    lanczos = lambda1(G, method="lanczos").lambda1
    assert lanczos == pytest.approx(dense, rel=1e-8, abs=1e-10)


def test_large_sparse_matches_closed_form():
    # two long cycles joined by an edge: compare against the dense route
    G = build_graph(120, [(i, (i + 1) % 60) for i in range(60)]
                    + [(60 + i, 60 + (i + 1) % 60) for i in range(60)] + [(0, 60)])
    assert lambda1(G, method="lanczos").lambda1 == pytest.approx(
        lambda1(G, method="dense").lambda1, rel=1e-8)


@settings(max_examples=80, deadline=None)
@given(graphs(min_n=2, max_n=10))
def test_zero_iff_disconnected(G):
    if G.degrees.min() == 0:
        return
    lam = lambda1(G).lambda1
    assert (lam < 1e-9) == (not is_connected(G))
    assert -1e-12 <= lam <= 2 + 1e-9


@settings(max_examples=80, deadline=None)
@given(graphs(min_n=2, max_n=11))
def test_sweep_consistent(G):
    if G.degrees.min() == 0:
        return
    spec = lambda1(G)
    cut = sweep_cut(G, spec)
    s = subset_stats(G, cut.cut_set)
    total = 2 * G.m
    assert s.boundary == cut.edge_boundary and s.volume == cut.vol_W
    assert 2 * cut.vol_W <= total
    assert cut.edge_boundary <= math.sqrt(2 * spec.lambda1) * cut.vol_W + 1e-9 * cut.vol_W
