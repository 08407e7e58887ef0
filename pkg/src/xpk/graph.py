"""Immutable simple graphs and set-level counting primitives.

Vertices are the dense integers ``0..n-1``. Adjacency is stored in CSR form
(``indptr``/``indices``) with every neighbour list sorted, so two graphs built
from the same edge multiset are bit-identical.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import (
    CountTooLarge,
    DuplicateEdge,
    EdgeListFormatError,
    EmptySet,
    SelfLoop,
    VertexOutOfRange,
)


@dataclass(frozen=True)
class VertexSet:
    """A sorted, duplicate-free tuple of vertex ids."""

    members: tuple[int, ...] = ()

    def __post_init__(self):
        m = tuple(int(v) for v in self.members)
        if any(m[i] >= m[i + 1] for i in range(len(m) - 1)):
            s = sorted(m)
            if len(set(s)) != len(s):
                raise ValueError(f"duplicate vertex ids in {m}")
            m = tuple(s)
        object.__setattr__(self, "members", m)

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "VertexSet":
        if isinstance(vertices, VertexSet):
            return vertices
        if isinstance(vertices, np.ndarray):
            return cls(tuple(vertices.tolist()))
        return cls(tuple(vertices))

    @classmethod
    def from_mask(cls, mask) -> "VertexSet":
        """From a boolean array or a python int bitmask."""
        if isinstance(mask, (int, np.integer)):
            mask = int(mask)
            out = []
            v = 0
            while mask:
                if mask & 1:
                    out.append(v)
                mask >>= 1
                v += 1
            return cls(tuple(out))
        return cls(tuple(np.flatnonzero(mask).tolist()))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, v):
        return v in self._set

    @cached_property
    def _set(self):
        return frozenset(self.members)

    def array(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.int64)

    def mask(self, n: int) -> np.ndarray:
        check_vertices(self.members, n)
        out = np.zeros(n, dtype=bool)
        out[list(self.members)] = True
        return out

    def bits(self) -> int:
        b = 0
        for v in self.members:
            b |= 1 << v
        return b


def check_vertices(vertices, n):
    for v in vertices:
        if not 0 <= v < n:
            raise VertexOutOfRange(v, n)


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph on vertices ``0..n-1``.

    Build with :func:`build_graph`; the constructor trusts its arguments.
    """

    n: int
    indptr: np.ndarray = field(repr=False)
    indices: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.diff(self.indptr)
        d.setflags(write=False)
        return d

    @cached_property
    def m(self) -> int:
        return int(self.indices.size // 2)

    @cached_property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    @cached_property
    def density(self) -> Fraction:
        return Fraction(self.m, self.n) if self.n else Fraction(0)

    @cached_property
    def edge_array(self) -> np.ndarray:
        """``(m, 2)`` array of edges ``u < v`` in lexicographic order."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        keep = src < self.indices
        out = np.stack([src[keep], self.indices[keep]], axis=1)
        out.setflags(write=False)
        return out

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        idx = self.indices.tolist()
        ptr = self.indptr.tolist()
        return tuple(tuple(idx[ptr[v]:ptr[v + 1]]) for v in range(self.n))

    @cached_property
    def neighbor_bits(self) -> tuple[int, ...]:
        """Neighbourhood of each vertex as a python int bitmask."""
        out = []
        for nb in self.adjacency:
            b = 0
            for u in nb:
                b |= 1 << u
            out.append(b)
        return tuple(out)

    def edges(self) -> list[tuple[int, int]]:
        return [tuple(e) for e in self.edge_array.tolist()]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < nb.size and nb[i] == v)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __hash__(self):
        return hash((self.n, self.indices.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m}, max_degree={self.max_degree})"


@dataclass(frozen=True)
class SubsetStats:
    within: int
    boundary: int
    touching: int
    volume: int
    ext_neighborhood: VertexSet


def _from_pairs(n: int, u: np.ndarray, v: np.ndarray) -> Graph:
    """CSR graph from pairs already known to be valid, ``u < v`` and unique."""
    src = np.concatenate([u, v]).astype(np.int64)
    dst = np.concatenate([v, u]).astype(np.int64)
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    counts = np.bincount(src, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return Graph(n, indptr, dst)


def build_graph(n: int, edges) -> Graph:
    """Validate an edge list and return the canonical graph.

    Raises :class:`SelfLoop`, :class:`DuplicateEdge` or
    :class:`VertexOutOfRange` naming the first offending edge.
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be non-negative")
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                     dtype=np.int64).reshape(-1, 2)
    if arr.size:
        bad = np.flatnonzero((arr < 0).any(axis=1) | (arr >= n).any(axis=1))
        if bad.size:
            raise VertexOutOfRange(tuple(arr[bad[0]].tolist()), n)
        loops = np.flatnonzero(arr[:, 0] == arr[:, 1])
        if loops.size:
            raise SelfLoop(arr[loops[0]].tolist())
    u = np.minimum(arr[:, 0], arr[:, 1])
    v = np.maximum(arr[:, 0], arr[:, 1])
    key = u * max(n, 1) + v
    order = np.argsort(key, kind="stable")
    sk = key[order]
    dup = np.flatnonzero(sk[1:] == sk[:-1])
    if dup.size:
        raise DuplicateEdge(arr[order[dup[0] + 1]].tolist())
    return _from_pairs(n, u[order], v[order])


def empty_graph(n: int) -> Graph:
    return build_graph(n, [])


def _as_mask(G: Graph, W) -> np.ndarray:
    if isinstance(W, np.ndarray) and W.dtype == bool:
        if W.shape != (G.n,):
            raise ValueError("mask length differs from vertex count")
        return W
    vs = VertexSet.of(W)
    return vs.mask(G.n)


def subset_stats(G: Graph, W) -> SubsetStats:
    """Edge counts, volume and external neighbourhood of ``W`` in one pass."""
    mask = _as_mask(G, W)
    e = G.edge_array
    a = mask[e[:, 0]]
    b = mask[e[:, 1]]
    within = int(np.count_nonzero(a & b))
    cross = a ^ b
    boundary = int(np.count_nonzero(cross))
    volume = int(G.degrees[mask].sum())
    ends = e[cross].ravel()
    ext = np.unique(ends[~mask[ends]])
    return SubsetStats(within, boundary, within + boundary, volume, VertexSet.of(ext))


def induced(G: Graph, mask: np.ndarray) -> tuple[Graph, np.ndarray]:
    """``G[mask]`` plus the array of kept original ids (new id = position)."""
    kept = np.flatnonzero(mask)
    new_id = np.full(G.n, -1, dtype=np.int64)
    new_id[kept] = np.arange(kept.size)
    e = G.edge_array
    keep = mask[e[:, 0]] & mask[e[:, 1]]
    sub = e[keep]
    return _from_pairs(kept.size, new_id[sub[:, 0]], new_id[sub[:, 1]]), kept


def induced_subgraph(G: Graph, W) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph on ``W`` and the relabelling map old -> new."""
    mask = _as_mask(G, W)
    if not mask.any():
        raise EmptySet("induced subgraph of the empty set")
    H, kept = induced(G, mask)
    return H, {int(old): i for i, old in enumerate(kept.tolist())}


def top_degree_order(G: Graph) -> np.ndarray:
    """Vertices by decreasing degree, ties by smaller id."""
    return np.lexsort((np.arange(G.n), -G.degrees))


def trim_high_degree(G: Graph, count: int) -> tuple[Graph, VertexSet]:
    """Delete every edge at the ``count`` highest-degree vertices.

    The vertex set is kept intact so ids (and n) stay stable.
    """
    if count < 0 or count > G.n:
        raise CountTooLarge(f"cannot remove {count} of {G.n} vertices")
    removed = np.sort(top_degree_order(G)[:count])
    gone = np.zeros(G.n, dtype=bool)
    gone[removed] = True
    e = G.edge_array
    keep = ~(gone[e[:, 0]] | gone[e[:, 1]])
    return _from_pairs(G.n, e[keep, 0], e[keep, 1]), VertexSet.of(removed)


def component_labels(G: Graph) -> tuple[int, np.ndarray]:
    """Label vertices by BFS in order of smallest vertex id."""
    labels = [-1] * G.n
    ptr = G.indptr.tolist()
    idx = G.indices.tolist()
    k = 0
    for s in range(G.n):
        if labels[s] >= 0:
            continue
        labels[s] = k
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in idx[ptr[x]:ptr[x + 1]]:
                if labels[y] < 0:
                    labels[y] = k
                    queue.append(y)
        k += 1
    return k, np.asarray(labels, dtype=np.int64)


def connected_components(G: Graph) -> list[VertexSet]:
    """Components ordered by decreasing size, then smallest id."""
    k, labels = component_labels(G)
    if k == 0:
        return []
    order = np.argsort(labels, kind="stable")
    bounds = np.cumsum(np.bincount(labels, minlength=k))[:-1]
    parts = [VertexSet.of(p) for p in np.split(order, bounds)]
    parts.sort(key=lambda p: (-len(p), p.members[0]))
    return parts


def is_connected(G: Graph) -> bool:
    return G.n > 0 and component_labels(G)[0] == 1


# -- edge-list text format ---------------------------------------------------

def format_edge_list(G: Graph) -> str:
    lines = [f"n {G.n}"]
    lines.extend(f"{u} {v}" for u, v in G.edge_array.tolist())
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    """Parse the ``u v`` per line format; ``#`` comments, optional ``n <count>`` header."""
    n_decl = None
    pairs = []
    where = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "n":
            if n_decl is not None or pairs:
                raise EdgeListFormatError(line_no, "header 'n <count>' must come first and only once")
            if len(parts) != 2:
                raise EdgeListFormatError(line_no, "expected 'n <count>'")
            try:
                n_decl = int(parts[1])
            except ValueError:
                raise EdgeListFormatError(line_no, f"bad vertex count {parts[1]!r}") from None
            if n_decl < 0:
                raise EdgeListFormatError(line_no, "negative vertex count")
            continue
        if len(parts) != 2:
            raise EdgeListFormatError(line_no, f"expected two integers, got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListFormatError(line_no, f"non-integer vertex in {line!r}") from None
        if u < 0 or v < 0:
            raise EdgeListFormatError(line_no, f"negative vertex id in {line!r}")
        if u == v:
            raise EdgeListFormatError(line_no, f"self-loop ({u}, {v})")
        pairs.append((u, v))
        where.append(line_no)
    n = n_decl if n_decl is not None else (max(max(p) for p in pairs) + 1 if pairs else 0)
    seen = {}
    for (u, v), line_no in zip(pairs, where):
        if u >= n or v >= n:
            raise EdgeListFormatError(line_no, f"vertex out of range [0, {n}) in ({u}, {v})")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise EdgeListFormatError(line_no, f"duplicate edge ({u}, {v}), first on line {seen[key]}")
        seen[key] = line_no
    return build_graph(n, pairs)


def read_edge_list(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def write_edge_list(G: Graph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_edge_list(G))


def fingerprint(G: Graph) -> str:
    return hashlib.sha256(format_edge_list(G).encode()).hexdigest()


# -- small named graphs used throughout tests and examples --------------------

def complete_graph(n: int) -> Graph:
    return build_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n: int) -> Graph:
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return build_graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def grid_graph(rows: int, cols: int) -> Graph:
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return build_graph(rows * cols, edges)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return build_graph(10, outer + spokes + inner)


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    off = 0
    for H in graphs:
        edges.extend((u + off, v + off) for u, v in H.edges())
        off += H.n
    return build_graph(off, edges)
