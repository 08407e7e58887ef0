"""Exact vertex expansion and minimum balanced separators on small graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _bits
from .errors import TooLarge, TooSmall
from .graph import Graph, VertexSet

EXPANSION_MAX_N = 24
SEPARATOR_MAX_N = 16
_LCM = math.lcm(*range(1, EXPANSION_MAX_N // 2 + 1))


@dataclass(frozen=True)
class ExpansionProfile:
    gamma: Fraction
    worst_set: VertexSet


def _expansion_chunks(G: Graph, chunk_bits: int = 20):
    """Yield (masks, |N(W)|, |W|) over all masks, in chunks to bound memory."""
    n = G.n
    lo_bits = min(n, chunk_bits)
    lo_table = _bits.neighbor_union(_restrict(G, lo_bits))
    hi_n = n - lo_bits
    lo_masks = _bits.masks(lo_bits).astype(np.int64)
    nb = G.neighbor_bits
    for hi in range(1 << hi_n):
        hi_union = 0
        for j in range(hi_n):
            if hi >> j & 1:
                hi_union |= nb[lo_bits + j]
        ms = lo_masks | (hi << lo_bits)
        union = lo_table.astype(np.int64) | hi_union
        ext = _bits.popcount(union & ~ms)
        yield ms, ext, _bits.popcount(ms)


class _restrict:
    """View of G exposing neighbour bitmasks of the first ``k`` vertices only."""

    def __init__(self, G, k):
        self.n = k
        self.neighbor_bits = G.neighbor_bits[:k]


def vertex_expansion_exact(G: Graph) -> ExpansionProfile:
    """``min |N(W)| / |W|`` over nonempty ``W`` with ``|W| <= n/2``.

    The worst set is the smallest minimiser, then the lexicographically first.
    """
    n = G.n
    if n > EXPANSION_MAX_N:
        raise TooLarge(f"vertex_expansion_exact enumerates subsets; n={n} > {EXPANSION_MAX_N}")
    if n < 2:
        raise TooSmall("need at least 2 vertices")
    half = n // 2
    best_key = None
    best_masks = []
    for ms, ext, size in _expansion_chunks(G):
        ok = (size >= 1) & (size <= half)
        # ext / size scaled to an exact integer key
        key = ext[ok].astype(np.int64) * (_LCM // np.maximum(size[ok], 1))
        if key.size == 0:
            continue
        k = int(key.min())
        if best_key is None or k < best_key:
            best_key, best_masks = k, [ms[ok][key == k]]
        elif k == best_key:
            best_masks.append(ms[ok][key == k])
    cands = np.concatenate(best_masks)
    w = _bits.first_by_size_then_lex(cands, n)
    return ExpansionProfile(Fraction(best_key, _LCM), VertexSet.from_mask(w))


def expansion_ratio(G: Graph, W) -> Fraction:
    W = VertexSet.of(W)
    ext = set()
    for v in W:
        ext.update(int(u) for u in G.neighbors(v))
    ext -= set(W)
    return Fraction(len(ext), len(W))


@dataclass(frozen=True)
class Separator:
    S: VertexSet
    A: VertexSet
    B: VertexSet


def min_separator_exact(G: Graph) -> Separator | None:
    """Smallest ``S`` with ``V = A + B + S``, no A-B edges, ``1 <= |A|, |B| <= 2n/3``.

    For a fixed ``A`` the best ``B`` is as much of ``V - A - N(A)`` as the
    size cap allows, so only ``A`` is enumerated. Returns ``None`` when no
    valid partition exists.
    """
    n = G.n
    if n > SEPARATOR_MAX_N:
        raise TooLarge(f"min_separator_exact enumerates subsets; n={n} > {SEPARATOR_MAX_N}")
    if n < 2:
        return None
    cap = (2 * n) // 3
    full = (1 << n) - 1
    ms = _bits.masks(n)
    size_a = _bits.popcount(ms)
    rest = full & ~ms & ~_bits.neighbor_union(G)
    size_b = np.minimum(_bits.popcount(rest), cap)
    ok = (size_a >= 1) & (size_a <= cap) & (size_b >= 1)
    if not ok.any():
        return None
    s = np.where(ok, n - size_a - size_b, n + 1)
    best = int(s.min())
    a = _bits.first_by_size_then_lex(ms[s == best], n)
    r = _bits.bits_to_list(int(rest[a]))
    B = VertexSet(tuple(r[: int(size_b[a])]))
    A = VertexSet.from_mask(a)
    S = VertexSet(tuple(v for v in range(n) if v not in A and v not in B))
    return Separator(S, A, B)


def is_separator(G: Graph, sep: Separator) -> bool:
    n = G.n
    parts = [set(sep.S), set(sep.A), set(sep.B)]
    if sum(map(len, parts)) != n or set().union(*parts) != set(range(n)):
        return False
    if not sep.A or not sep.B or 3 * len(sep.A) > 2 * n or 3 * len(sep.B) > 2 * n:
        return False
    return not any((u in parts[1] and v in parts[2]) or (u in parts[2] and v in parts[1])
                   for u, v in G.edges())


def separator_lower_bound(gamma, n: int) -> Fraction:
    """``gamma n / (3 (gamma + 1))``: no separator of a gamma-expander is smaller."""
    gamma = Fraction(gamma)
    if gamma < 0:
        raise ValueError("gamma must be non-negative")
    return gamma * n / (3 * (gamma + 1))
