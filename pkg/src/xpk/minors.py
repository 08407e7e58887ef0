"""Clique minors: exhaustive search on tiny graphs, greedy contraction beyond."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import Disconnected, InternalInvariantViolated, TooLarge
from .graph import Graph, VertexSet, induced, is_connected, subset_stats

EXACT_MAX_N = 12
EXACT_MAX_T = 5
EXACT_ANY_T_N = 10      # below this size any t is cheap enough
GREEDY_RESTARTS = 10
CLIQUE_SCAN_MAX = 64


@dataclass(frozen=True)
class MinorModel:
    branch_sets: tuple[VertexSet, ...]

    @property
    def order(self) -> int:
        return len(self.branch_sets)


def validate_clique_model(G: Graph, model: MinorModel) -> bool:
    """Disjoint, connected, pairwise-adjacent branch sets."""
    seen = set()
    for B in model.branch_sets:
        if len(B) == 0 or seen & set(B):
            return False
        seen |= set(B)
        H, _ = induced(G, B.mask(G.n))
        if not is_connected(H):
            return False
    ext = [set(subset_stats(G, B).ext_neighborhood) for B in model.branch_sets]
    for i in range(model.order):
        for j in range(i + 1, model.order):
            if not ext[i] & set(model.branch_sets[j]):
                return False
    return True


def _connected_subsets(G: Graph):
    """All connected vertex subsets as bitmasks, with their neighbourhood unions."""
    n = G.n
    nb = G.neighbor_bits
    found = set()
    frontier = {1 << v for v in range(n)}
    while frontier:
        found |= frontier
        nxt = set()
        for s in frontier:
            reach = 0
            x = s
            while x:
                low = x & -x
                reach |= nb[low.bit_length() - 1]
                x ^= low
            reach &= ~s
            while reach:
                low = reach & -reach
                t = s | low
                if t not in found:
                    nxt.add(t)
                reach ^= low
        frontier = nxt
    masks = np.array(sorted(found), dtype=np.int64)
    union = np.zeros_like(masks)
    for v in range(n):
        has = (masks >> v) & 1 == 1
        union[has] |= nb[v]
    return masks, union


def _union_of(G: Graph, s: int) -> int:
    out = 0
    while s:
        low = s & -s
        out |= G.neighbor_bits[low.bit_length() - 1]
        s ^= low
    return out


def _components(G: Graph, allowed: int):
    """Connected components of ``G[allowed]`` as bitmasks."""
    out = []
    while allowed:
        comp = allowed & -allowed
        while True:
            grown = comp | (_union_of(G, comp) & allowed)
            if grown == comp:
                break
            comp = grown
        out.append(comp)
        allowed &= ~comp
    return out


def clique_minor_exact(G: Graph, t: int) -> MinorModel | None:
    """A ``K_t`` model, or ``None`` if ``G`` has no ``K_t`` minor.

    Within a connected component every model can be grown until its branch
    sets partition the component (add any unused vertex to a neighbouring
    set). So the search only looks at partitions: each new branch set is a
    connected set containing the smallest unused vertex and adjacent to all
    earlier sets, and the last set is whatever remains.
    """
    n = G.n
    if n > EXACT_MAX_N:
        raise TooLarge(f"clique_minor_exact is exhaustive; n={n} > {EXACT_MAX_N}")
    if t > EXACT_MAX_T and n > EXACT_ANY_T_N:
        raise TooLarge(f"clique_minor_exact supports t <= {EXACT_MAX_T} when n > {EXACT_ANY_T_N}, got {t}")
    if t <= 0:
        return MinorModel(())
    if t > n:
        return None
    masks, union = _connected_subsets(G)
    sizes = np.bitwise_count(masks)
    connected = set(masks.tolist())
    nb = G.neighbor_bits
    chosen: list[int] = []

    def edges_in(s: int) -> int:
        return sum(bin(nb[v] & s).count("1") for v in range(n) if s >> v & 1) // 2

    def feasible(left: int, need: int) -> bool:
        # need disjoint connected sets covering left, each touching every chosen set
        k = bin(left).count("1")
        if k < need or edges_in(left) < need * (need - 1) // 2 + k - need:
            return False
        return all(bin(_union_of(G, c) & left).count("1") >= need for c in chosen)

    def search(pool: np.ndarray, left: int):
        need = t - len(chosen)
        if need == 1:
            reach = _union_of(G, left)
            if left in connected and all(reach & c for c in chosen):
                chosen.append(left)
                return True
            return False
        first = left & -left
        biggest = bin(left).count("1") - need + 1
        cand = pool[((masks[pool] & first) != 0) & ((masks[pool] & ~left) == 0)
                    & (sizes[pool] <= biggest)]
        for i in cand.tolist():
            s = int(masks[i])
            chosen.append(s)
            if feasible(left & ~s, need - 1):
                rest = pool[((masks[pool] & s) == 0) & ((union[pool] & s) != 0)]
                if search(rest, left & ~s):
                    return True
            chosen.pop()
        return False

    for comp in _components(G, (1 << n) - 1):
        if bin(comp).count("1") < t:
            continue
        if t == 1:
            chosen.append(comp & -comp)
            break
        pool = np.flatnonzero((masks & ~comp) == 0)
        if feasible(comp, t) and search(pool, comp):
            break
        chosen.clear()
    if not chosen:
        return None
    model = MinorModel(tuple(VertexSet.from_mask(s) for s in chosen))
    if not validate_clique_model(G, model):
        raise InternalInvariantViolated("exact search returned an invalid model")
    return model


def max_clique_minor_exact(G: Graph, t_max: int | None = None) -> MinorModel:
    """Largest ``K_t`` model with ``t <= t_max`` (exhaustive).

    The default cap is ``n`` for small graphs, so the result is the true
    maximum there, and ``EXACT_MAX_T`` otherwise.
    """
    if t_max is None:
        t_max = G.n if G.n <= EXACT_ANY_T_N else EXACT_MAX_T
    best = MinorModel(())
    for t in range(1, min(t_max, G.n) + 1):
        m = clique_minor_exact(G, t)
        if m is None:
            break
        best = m
    return best


def _contract_once(sets, adj, rng):
    """Contract the edge that leaves the largest minimum degree.

    Ties go to the edge leaving the fewest vertices at that minimum degree,
    then to endpoints sharing fewer neighbours, then to a seeded random
    choice.
    """
    deg = {x: len(adj[x]) for x in adj}
    hist = Counter(deg.values())
    by_deg = sorted(adj, key=deg.__getitem__)
    edges = [(a, b) for a in adj for b in adj[a] if a < b]
    rng.shuffle(edges)
    best, best_key = None, None
    for a, b in edges:
        common = adj[a] & adj[b]
        new_deg = len(adj[a] | adj[b]) - 2
        changed = Counter({new_deg: 1})
        removed = Counter([deg[a], deg[b]])
        for w in common:
            removed[deg[w]] += 1
            changed[deg[w] - 1] += 1
        lo = min(changed)
        for x in by_deg:
            if x != a and x != b and x not in common:
                lo = min(lo, deg[x])
                break
        at_lo = hist[lo] - removed[lo] + changed[lo]
        key = (lo, -len(common), -at_lo)
        if best_key is None or key > best_key:
            best, best_key = (a, b), key
    a, b = best
    sets[a] |= sets.pop(b)
    for w in adj.pop(b):
        adj[w].discard(b)
        if w != a:
            adj[w].add(a)
            adj[a].add(w)


def _max_clique(adj) -> list:
    """Largest clique of a small graph (Bron-Kerbosch with pivoting)."""
    best: list = []

    def expand(r, p, x):
        nonlocal best
        if not p and not x:
            if len(r) > len(best):
                best = list(r)
            return
        if len(r) + len(p) <= len(best):
            return
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in list(p - adj[pivot]):
            expand(r + [v], p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand([], set(adj), set())
    return best


def _is_complete(adj) -> bool:
    k = len(adj)
    return all(len(v) == k - 1 for v in adj.values())


def clique_minor_greedy(G: Graph, seed: int = 0, restarts: int = GREEDY_RESTARTS) -> MinorModel:
    """Greedy contraction until the minor is complete; best of ``restarts`` runs.

    Once the minor is small enough, its largest clique is recorded after
    every contraction, and the best clique over all runs is returned. The
    order found is only a lower bound on the largest clique minor.
    """
    if G.n == 0 or not is_connected(G):
        raise Disconnected("clique_minor_greedy needs a connected graph")
    best = None
    for r in range(restarts):
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), r]))
        sets = {v: {v} for v in range(G.n)}
        adj = {v: set(G.adjacency[v]) for v in range(G.n)}
        while True:
            # a clique inside any intermediate minor is already a model
            if len(adj) <= CLIQUE_SCAN_MAX:
                clique = _max_clique(adj)
                if best is None or len(clique) > best.order:
                    best = MinorModel(tuple(sorted((VertexSet.of(sets[x]) for x in clique),
                                                   key=lambda B: B.members[0])))
            if _is_complete(adj):
                break
            _contract_once(sets, adj, rng)
    if not validate_clique_model(G, best):
        raise InternalInvariantViolated("greedy contraction produced an invalid model")
    return best
