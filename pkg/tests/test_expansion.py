import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings

from corpus import graphs
from xpk.errors import TooLarge
from xpk.expansion import (
    expansion_ratio,
    is_separator,
    min_separator_exact,
    separator_lower_bound,
    vertex_expansion_exact,
)
from xpk.graph import (
    complete_graph,
    cycle_graph,
    disjoint_union,
    empty_graph,
    is_connected,
    path_graph,
    subset_stats,
)


def naive_expansion(G):
    best = None
    for k in range(1, G.n // 2 + 1):
        for W in itertools.combinations(range(G.n), k):
            r = Fraction(len(subset_stats(G, W).ext_neighborhood), k)
            best = r if best is None else min(best, r)
    return best


def naive_min_separator(G):
    n = G.n
    for s in range(n + 1):
        for S in itertools.combinations(range(n), s):
            rest = [v for v in range(n) if v not in S]
            for k in range(1, len(rest)):
                for A in itertools.combinations(rest, k):
                    B = [v for v in rest if v not in A]
                    if 3 * len(A) > 2 * n or 3 * len(B) > 2 * n:
                        continue
                    if not set(subset_stats(G, A).ext_neighborhood) & set(B):
                        return s
    return None


def test_expansion_examples():
    assert vertex_expansion_exact(complete_graph(4)).gamma == 1
    p = vertex_expansion_exact(cycle_graph(8))
    assert p.gamma == Fraction(1, 2) and p.worst_set.members == (0, 1, 2, 3)
    assert vertex_expansion_exact(disjoint_union(cycle_graph(5), empty_graph(1))).gamma == 0
    with pytest.raises(TooLarge):
        vertex_expansion_exact(cycle_graph(25))


def test_separator_examples():
    sep = min_separator_exact(path_graph(3))
    assert sep.S.members == (1,)
    assert min_separator_exact(complete_graph(4)) is None
    sep = min_separator_exact(cycle_graph(6))
    assert len(sep.S) == 2 and is_separator(cycle_graph(6), sep)
    with pytest.raises(TooLarge):
        min_separator_exact(cycle_graph(17))


def test_lower_bound_examples():
    assert separator_lower_bound(1, 12) == 2
    assert separator_lower_bound(0, 9) == 0
    assert separator_lower_bound(Fraction(2, 3), 6) == Fraction(4, 5)


@settings(max_examples=120, deadline=None)
@given(graphs(min_n=2, max_n=8))
def test_expansion_matches_naive(G):
    p = vertex_expansion_exact(G)
    assert p.gamma == naive_expansion(G)
    assert expansion_ratio(G, p.worst_set) == p.gamma
    assert 2 * len(p.worst_set) <= G.n


@settings(max_examples=80, deadline=None)
@given(graphs(min_n=2, max_n=7))
def test_separator_matches_naive(G):
    sep = min_separator_exact(G)
    want = naive_min_separator(G)
    if want is None:
        assert sep is None
    else:
        assert len(sep.S) == want and is_separator(G, sep)


@settings(max_examples=120, deadline=None)
@given(graphs(min_n=2, max_n=11))
def test_gamma_zero_iff_disconnected(G):
    assert (vertex_expansion_exact(G).gamma == 0) == (not is_connected(G))
