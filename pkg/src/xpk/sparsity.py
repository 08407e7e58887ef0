"""Local sparsity and edge-touch verifiers.

Both verifiers answer with one of four states. ``PASS_EXACT`` means the whole
range of sets was enumerated; ``PASS_CERTIFIED`` means a sound bound settled
the question without enumeration; ``VIOLATION`` comes with a witness that has
been rechecked by :func:`subset_stats`; ``INCONCLUSIVE`` means only a
heuristic search ran and found nothing.
"""

from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _bits
from .errors import CountTooLarge, InternalInvariantViolated, InvalidParams
from .extraction import as_fraction
from .graph import Graph, VertexSet, subset_stats, top_degree_order

EXACT_MAX_N = 20
EXACT_MAX_SIZE = 3
DEFAULT_EFFORT = 10 ** 6


class Status(str, enum.Enum):
    PASS_EXACT = "PASS_EXACT"
    PASS_CERTIFIED = "PASS_CERTIFIED"
    VIOLATION = "VIOLATION"
    INCONCLUSIVE = "INCONCLUSIVE"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SparsityVerdict:
    status: Status
    witness: VertexSet | None = None
    effort_used: int = 0
    best_density: Fraction | None = None     # densest admissible set seen
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status in (Status.PASS_EXACT, Status.PASS_CERTIFIED)


def _too_dense(within: int, size: int, c2: Fraction, strict: bool) -> bool:
    lhs, rhs = within * c2.denominator, size * c2.numerator
    return lhs >= rhs if strict else lhs > rhs


def _violation(G, W, c2, strict, effort, what):
    W = VertexSet.of(W)
    st = subset_stats(G, W)
    if not _too_dense(st.within, len(W), c2, strict):
        raise InternalInvariantViolated(f"witness {W} does not recheck")
    return SparsityVerdict(Status.VIOLATION, W, effort, Fraction(st.within, len(W)), what)


# -- exact tier --------------------------------------------------------------

def _exact_powerset(G, c2, kmax, strict):
    n = G.n
    within = _bits.within(G).astype(np.int64)
    ms = _bits.masks(n)
    size = _bits.popcount(ms).astype(np.int64)
    ok = (size >= 1) & (size <= kmax)
    lhs, rhs = within * c2.denominator, size * c2.numerator
    bad = ok & ((lhs >= rhs) if strict else (lhs > rhs))
    r = np.where(ok, within / np.maximum(size, 1), -1.0)
    i = int(np.argmax(r))
    best = Fraction(int(within[i]), int(size[i])) if ok.any() else None
    hits = ms[bad]
    if hits.size:
        return VertexSet.from_mask(_bits.first_by_size_then_lex(hits, n)), 1 << n, best
    return None, 1 << n, best


def _exact_tiny(G, c2, kmax, strict):
    """Sets of at most three vertices: the densest are an edge, a triangle or a path."""
    adj = G.adjacency
    effort = 0
    cands = []
    if kmax >= 1:
        cands.append(((0,), 0))
    if kmax >= 2 and G.m:
        u, v = G.edge_array[0].tolist()
        cands.append(((u, v), 1))
    if kmax >= 3:
        path = None
        for v in range(G.n):
            nb = adj[v]
            effort += len(nb)
            if len(nb) >= 2 and path is None:
                path = (nb[0], v, nb[1])
            s = set(nb)
            tri = next(((v, u, w) for u in nb if u > v for w in adj[u] if w > u and w in s), None)
            if tri is not None:
                cands.append((tri, 3))
                break
        if path is not None:
            cands.append((path, 2))
    best = max(Fraction(w, len(W)) for W, w in cands)
    viol = [W for W, w in cands if _too_dense(w, len(W), c2, strict)]
    return (min(viol, key=len) if viol else None), effort, best


# -- heuristic tier ----------------------------------------------------------

def _peel(G: Graph, kmax: int, c2: Fraction, strict: bool):
    """Min-degree peeling; best set of size <= kmax along the way.

    Returns (best_set, best_ratio, violating_set_or_None, work).
    """
    n = G.n
    adj = G.adjacency
    deg = G.degrees.tolist()
    alive = [True] * n
    heap = [(d, v) for v, d in enumerate(deg)]
    heapq.heapify(heap)
    edges = G.m
    size = n
    order = []
    best_ratio, best_at = Fraction(-1), None
    viol_at = None
    work = 0
    while heap:
        d, v = heapq.heappop(heap)
        if not alive[v] or d != deg[v]:
            continue
        if size <= kmax:
            r = Fraction(edges, size)
            if r > best_ratio:
                best_ratio, best_at = r, len(order)
            if viol_at is None and _too_dense(edges, size, c2, strict):
                viol_at = len(order)
        alive[v] = False
        order.append(v)
        edges -= d
        size -= 1
        for u in adj[v]:
            work += 1
            if alive[u]:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], u))

    def suffix(k):
        return None if k is None else VertexSet.of(order[k:])
    return suffix(best_at), best_ratio, suffix(viol_at), work


def _two_core(G: Graph) -> np.ndarray:
    deg = G.degrees.astype(np.int64).copy()
    alive = deg > 0
    stack = list(np.flatnonzero(deg == 1))
    adj = G.adjacency
    while stack:
        v = stack.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for u in adj[v]:
            if alive[u]:
                deg[u] -= 1
                if deg[u] <= 1:
                    stack.append(u)
    return np.flatnonzero(alive & (deg >= 2))


def _grow(G: Graph, start: int, kmax: int, c2, strict, rng, budget: int):
    """Greedily add the frontier vertex with most edges into the set."""
    adj = G.adjacency
    inside = {start}
    order = [start]
    edges = 0
    links: dict[int, int] = {}
    for u in adj[start]:
        links[u] = 1
    work = len(adj[start])
    best = (Fraction(0), 1)
    while len(order) < kmax and links and work < budget:
        top = max(links.values())
        pool = [u for u, c in links.items() if c == top]
        work += len(links)
        u = pool[int(rng.integers(len(pool)))] if len(pool) > 1 else pool[0]
        edges += links.pop(u)
        inside.add(u)
        order.append(u)
        for w in adj[u]:
            work += 1
            if w not in inside:
                links[w] = links.get(w, 0) + 1
        r = Fraction(edges, len(order))
        if r > best[0]:
            best = (r, len(order))
        if _too_dense(edges, len(order), c2, strict):
            return VertexSet.of(order), best[0], work, True
    return VertexSet.of(order[: best[1]]), best[0], work, False


def local_sparsity_verdict(G: Graph, c2, alpha, effort: int = DEFAULT_EFFORT, *,
                           strict: bool = True, seed: int = 0) -> SparsityVerdict:
    """Does every ``W`` with ``|W| <= alpha n`` span fewer than ``c2 |W|`` edges?

    With ``strict=False`` the bound is "at most ``c2 |W|``" instead. The exact
    tier runs when ``n <= 20`` or ``alpha n <= 3``; otherwise min-degree
    peeling and seeded greedy growth from the 2-core share the ``effort``
    budget, counted in adjacency entries scanned.
    """
    c2 = as_fraction(c2)
    alpha = as_fraction(alpha)
    if not c2 > 1:
        raise InvalidParams(f"need c2 > 1, got {c2}")
    if not 0 < alpha < 1:
        raise InvalidParams(f"need 0 < alpha < 1, got {alpha}")
    kmax = math.floor(alpha * G.n)
    if kmax < 1:
        return SparsityVerdict(Status.PASS_EXACT, None, 0, None, "no admissible sets (alpha n < 1)")
    if G.n <= EXACT_MAX_N:
        W, work, best = _exact_powerset(G, c2, kmax, strict)
        if W is not None:
            return _violation(G, W, c2, strict, work, "exhaustive")
        return SparsityVerdict(Status.PASS_EXACT, None, work, best, "exhaustive over all subsets")
    if kmax <= EXACT_MAX_SIZE:
        W, work, best = _exact_tiny(G, c2, kmax, strict)
        if W is not None:
            return _violation(G, W, c2, strict, work, "exhaustive (|W| <= 3)")
        return SparsityVerdict(Status.PASS_EXACT, None, work, best, "exhaustive over |W| <= 3")

    best_set, best, viol, work = _peel(G, kmax, c2, strict)
    if viol is not None:
        return _violation(G, viol, c2, strict, work, "peeling")
    rng = np.random.default_rng(seed)
    core = _two_core(G)
    restarts = 0
    while work < effort and core.size:
        start = int(core[rng.integers(core.size)])
        W, r, used, hit = _grow(G, start, kmax, c2, strict, rng, effort - work)
        work += used + 1
        restarts += 1
        if hit:
            return _violation(G, W, c2, strict, work, f"greedy growth, restart {restarts}")
        if r > best:
            best, best_set = r, W
    return SparsityVerdict(Status.INCONCLUSIVE, None, work, best if best >= 0 else None,
                           f"no violation found by peeling and {restarts} growth restarts")


def touch_bound_verdict(G: Graph, m: int, t: int) -> SparsityVerdict:
    """Does every set of ``m`` vertices touch fewer than ``t`` edges?

    Touching is monotone in ``W``, so sets of exactly ``m`` vertices suffice.
    The sum of the ``m`` largest degrees bounds every such set from above;
    the ``m`` highest-degree vertices themselves give the natural witness.
    """
    m, t = int(m), int(t)
    if m < 0 or m > G.n:
        raise CountTooLarge(f"cannot choose {m} of {G.n} vertices")
    top = np.sort(top_degree_order(G)[:m])
    top_sum = int(G.degrees[top].sum())
    if top_sum < t:
        return SparsityVerdict(Status.PASS_CERTIFIED, None, G.n,
                               detail=f"top-{m} degree sum {top_sum} < {t}")
    st = subset_stats(G, top)
    if st.touching >= t:
        return SparsityVerdict(Status.VIOLATION, VertexSet.of(top), G.n,
                               detail=f"top-{m} degree set touches {st.touching} >= {t}")
    if G.n <= EXACT_MAX_N:
        n = G.n
        ms = _bits.masks(n)
        size = _bits.popcount(ms)
        touch = _bits.within(G) + _bits.boundary(G)
        hits = ms[(size == m) & (touch >= t)]
        if hits.size:
            W = VertexSet.from_mask(_bits.first_by_size_then_lex(hits, n))
            if subset_stats(G, W).touching < t:
                raise InternalInvariantViolated("touch witness does not recheck")
            return SparsityVerdict(Status.VIOLATION, W, 1 << n, detail="exhaustive")
        best = int(touch[size == m].max())
        return SparsityVerdict(Status.PASS_EXACT, None, 1 << n,
                               detail=f"max touched by {m} vertices is {best} < {t}")
    return SparsityVerdict(Status.INCONCLUSIVE, None, G.n,
                           detail=f"top-{m} set touches {st.touching} < {t}; degree sum {top_sum} >= {t}")
