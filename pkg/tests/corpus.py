"""Pre-registered graph corpora shared by the test modules.

Every corpus is a pure function of the constants below, so the graphs are
fixed before any test looks at them.
"""

from fractions import Fraction
from functools import lru_cache

import numpy as np
from hypothesis import strategies as st

from xpk.extraction import ExtractionParams
from xpk.graph import (
    build_graph,
    complete_graph,
    cycle_graph,
    disjoint_union,
    grid_graph,
    is_connected,
    path_graph,
    petersen_graph,
    star_graph,
)
from xpk.random_graphs import GnpSpec, gnp, trial_seed

CHEEGER_SEED = 20240601
SMALL_SEED = 20240602
EXTRACTION_SEED = 20240603
ORACLE_SEED = 20240604


@st.composite
def graphs(draw, min_n=1, max_n=12):
    """Hypothesis strategy: arbitrary simple graph on ``min_n..max_n`` vertices."""
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return build_graph(n, [e for e, k in zip(pairs, keep) if k])


def random_connected(n, p, seed):
    """First connected sample of G(n, p) along the trial-seed stream of ``seed``."""
    for i in range(10_000):
        G = gnp(GnpSpec(n, p, trial_seed(seed, i)))
        if is_connected(G):
            return G
    raise RuntimeError("no connected sample")


def wheel_graph(k):
    rim = [(i, (i + 1) % k) for i in range(k)]
    return build_graph(k + 1, rim + [(k, i) for i in range(k)])


def k33():
    return build_graph(6, [(i, j) for i in range(3) for j in range(3, 6)])


def icosahedron():
    top = [(0, i) for i in range(1, 6)] + [(i, i % 5 + 1) for i in range(1, 6)]
    mid = [(i, i + 5) for i in range(1, 6)] + [(i, (i % 5) + 6) for i in range(1, 6)]
    low = [(i, i % 5 + 6) for i in range(6, 11)] + [(i, 11) for i in range(6, 11)]
    return build_graph(12, top + mid + low)


def clique_path(k, length, bridge=True):
    """``K_k`` next to a path on ``length`` vertices, joined by one edge if ``bridge``."""
    clique = [(i, j) for i in range(k) for j in range(i + 1, k)]
    path = [(v, v + 1) for v in range(k, k + length - 1)]
    return build_graph(k + length, clique + [(k - 1, k)] * bridge + path)


def named_graphs():
    out = {f"K{k}": complete_graph(k) for k in range(1, 7)}
    out.update({f"C{k}": cycle_graph(k) for k in range(3, 11)})
    out.update({f"P{k}": path_graph(k) for k in range(2, 9)})
    out.update({f"star{k}": star_graph(k) for k in (3, 5)})
    out.update({f"W{k}": wheel_graph(k) for k in (4, 5, 6)})
    out.update({"petersen": petersen_graph(), "K33": k33(), "icosahedron": icosahedron(),
                "grid2x3": grid_graph(2, 3), "grid3x3": grid_graph(3, 3), "grid3x4": grid_graph(3, 4),
                "K4+K3": disjoint_union(complete_graph(4), complete_graph(3))})
    return out


@lru_cache(maxsize=None)
def cheeger_corpus():
    """500 connected G(n, p) graphs, 4 <= n <= 14."""
    rng = np.random.default_rng(CHEEGER_SEED)
    out = []
    for i in range(500):
        n = int(rng.integers(4, 15))
        p = float(rng.uniform(0.25, 0.8))
        out.append(random_connected(n, p, trial_seed(CHEEGER_SEED, i)))
    return tuple(out)


@lru_cache(maxsize=None)
def small_corpus():
    """Named graphs plus 200 seeded G(n, p) graphs with 4 <= n <= 12, as (name, graph)."""
    out = list(named_graphs().items())
    rng = np.random.default_rng(SMALL_SEED)
    for i in range(200):
        n = int(rng.integers(4, 13))
        p = float(rng.uniform(0.15, 0.85))
        out.append((f"gnp{i}", gnp(GnpSpec(n, p, trial_seed(SMALL_SEED, i)))))
    return tuple(out)


def _capped_random(n, deg_cap, attempts, rng):
    """Random edges added in seeded order while both endpoints stay under the cap."""
    deg = np.zeros(n, dtype=int)
    edges = set()
    for _ in range(attempts):
        u, v = (int(x) for x in rng.choice(n, size=2, replace=False))
        e = (min(u, v), max(u, v))
        if e not in edges and deg[u] < deg_cap and deg[v] < deg_cap:
            edges.add(e)
            deg[u] += 1
            deg[v] += 1
    return build_graph(n, sorted(edges))


ORACLE_PARAMS = ExtractionParams(Fraction(3, 2), Fraction(13, 10), Fraction(1, 4), 4)


@lru_cache(maxsize=None)
def oracle_candidates():
    """Degree-capped random graphs on 4..12 vertices; callers filter by the hypotheses."""
    rng = np.random.default_rng(ORACLE_SEED)
    out = [complete_graph(4), complete_graph(5), petersen_graph(), grid_graph(3, 4)]
    for _ in range(400):
        n = int(rng.integers(4, 13))
        out.append(_capped_random(n, 4, int(rng.integers(2 * n, 4 * n)), rng))
    return tuple(out)


def _params_for(G, alpha):
    """Parameters the graph meets: c1 its density (2 decimals down), c2 halfway to 1."""
    c1 = Fraction(int(100 * Fraction(G.m, G.n)), 100)
    c2 = 1 + (c1 - 1) / 2
    return ExtractionParams(c1, c2, alpha, G.max_degree)


@lru_cache(maxsize=None)
def extraction_corpus():
    """200 (name, graph, params) triples meeting the extraction preconditions, n <= 2000."""
    rng = np.random.default_rng(EXTRACTION_SEED)
    alphas = (Fraction(1, 20), Fraction(1, 10), Fraction(1, 4))
    out = []
    i = 0
    while len(out) < 120:
        n = int(rng.choice([12, 16, 20, 50, 100, 200, 500, 1000, 2000]))
        c = float(rng.uniform(3.0, 8.0))
        G = gnp(GnpSpec(n, min(1.0, c / n), trial_seed(EXTRACTION_SEED, i)))
        i += 1
        if Fraction(G.m, G.n) >= Fraction(11, 10):
            out.append((f"gnp{n}_{i}", G, _params_for(G, alphas[len(out) % 3])))
    for j in range(40):
        k = int(rng.integers(5, 26))
        length = int(rng.integers(1, 4 * k))
        G = clique_path(k, length, bridge=j % 2 == 0)
        out.append((f"clique{k}+path{length}{'b' * (j % 2 == 0)}", G, _params_for(G, alphas[j % 3])))
    while len(out) < 200:
        r, c = (int(x) for x in rng.integers(3, 41, size=2))
        G = grid_graph(r, c)
        if r * c > r + c + 4:
            out.append((f"grid{r}x{c}", G, _params_for(G, alphas[len(out) % 3])))
    return tuple(out)
