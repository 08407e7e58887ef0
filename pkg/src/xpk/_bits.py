"""Whole-power-set tables for the exhaustive small-graph routines.

Every table is indexed by a subset bitmask ``0 .. 2**n - 1`` and is filled by
doubling: the entries for masks whose top bit is ``i`` are derived from the
entries below ``2**i`` in one vectorised step.
"""

from __future__ import annotations

import numpy as np

MAX_BITS = 26


def _dtype(n):
    if n > MAX_BITS:
        raise ValueError(f"power-set tables are capped at {MAX_BITS} vertices")
    return np.int32 if n <= 30 else np.int64


def masks(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=_dtype(n))


def popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).astype(np.int32)


def neighbor_union(G) -> np.ndarray:
    """``table[S]`` = union of the neighbourhoods of the vertices in ``S``."""
    n = G.n
    t = np.zeros(1 << n, dtype=_dtype(n))
    for i, nb in enumerate(G.neighbor_bits):
        t[1 << i: 1 << (i + 1)] = t[: 1 << i] | nb
    return t


def volume(G) -> np.ndarray:
    n = G.n
    t = np.zeros(1 << n, dtype=np.int32)
    for i, d in enumerate(G.degrees.tolist()):
        t[1 << i: 1 << (i + 1)] = t[: 1 << i] + d
    return t


def within(G) -> np.ndarray:
    """``table[S]`` = number of edges with both endpoints in ``S``."""
    n = G.n
    t = np.zeros(1 << n, dtype=np.int32)
    for i, nb in enumerate(G.neighbor_bits):
        low = nb & ((1 << i) - 1)
        base = masks(i)
        t[1 << i: 1 << (i + 1)] = t[: 1 << i] + popcount(base & low)
    return t


def boundary(G) -> np.ndarray:
    """``table[S]`` = number of edges with exactly one endpoint in ``S``."""
    n = G.n
    t = np.zeros(1 << n, dtype=np.int32)
    deg = G.degrees.tolist()
    for i, nb in enumerate(G.neighbor_bits):
        low = nb & ((1 << i) - 1)
        base = masks(i)
        t[1 << i: 1 << (i + 1)] = t[: 1 << i] + deg[i] - 2 * popcount(base & low)
    return t


def bit_reverse(a: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros_like(a)
    for i in range(n):
        out |= ((a >> i) & 1) << (n - 1 - i)
    return out


def first_by_size_then_lex(candidates: np.ndarray, n: int) -> int:
    """Smallest set, ties broken by the lexicographically first sorted tuple.

    For equal-size sets, ``A`` precedes ``B`` lexicographically exactly when the
    smallest element of the symmetric difference lies in ``A``, i.e. when the
    bit-reversed mask of ``A`` is larger.
    """
    if candidates.size == 0:
        raise ValueError("no candidates")
    sizes = popcount(candidates)
    cand = candidates[sizes == sizes.min()]
    return int(cand[np.argmax(bit_reverse(cand, n))])


def bits_to_list(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out
