"""Explicit families of edge sets over E(K_n)."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import EdgeListFormatError, InvalidParams, TooLarge
from ..extraction import as_fraction
from .engine import edge_endpoints, edge_id

MAX_MEMBERS = 2_000_000


@dataclass(frozen=True)
class Family:
    n: int
    members: tuple[tuple[int, ...], ...]
    tag: str = "user"

    def __post_init__(self):
        size = self.n * (self.n - 1) // 2
        clean = []
        for m in self.members:
            m = tuple(sorted(set(int(e) for e in m)))
            if not m:
                raise InvalidParams("family members must be nonempty")
            if m[0] < 0 or m[-1] >= size:
                raise InvalidParams(f"member {m} is not inside E(K_{self.n})")
            clean.append(m)
        object.__setattr__(self, "members", tuple(clean))

    def __len__(self):
        return len(self.members)

    @property
    def max_size(self) -> int:
        return max((len(m) for m in self.members), default=0)

    def matrix(self) -> np.ndarray:
        """Members as rows of edge ids, padded with -1."""
        out = np.full((len(self.members), max(self.max_size, 1)), -1, dtype=np.int64)
        for i, m in enumerate(self.members):
            out[i, : len(m)] = m
        return out

    def first_contained(self, edges) -> tuple[int, ...] | None:
        """First member all of whose edges lie in ``edges`` (a set of edge ids)."""
        s = set(int(e) for e in edges)
        return next((m for m in self.members if s.issuperset(m)), None)


def _guard(count: int):
    if count > MAX_MEMBERS:
        raise TooLarge(f"family would have {count} members (cap {MAX_MEMBERS})")


def triangles(n: int) -> Family:
    mem = [(edge_id(n, a, b), edge_id(n, a, c), edge_id(n, b, c))
           for a, b, c in itertools.combinations(range(n), 3)]
    return Family(n, tuple(mem), f"triangles(K_{n})")


def touch_threshold(n: int, eps) -> int:
    """Fewest edges that break "at most eps n / 4 touched edges"."""
    return math.floor(as_fraction(eps) * n / 4) + 1


def span_threshold(k: int, eps) -> int:
    """Fewest edges on ``k`` vertices that break "at most (1 + eps/8) k"."""
    return math.floor((1 + as_fraction(eps) / 8) * k) + 1


def f1_family(n: int, eps, delta) -> Family:
    """Edge sets of ``touch_threshold`` edges coverable by ``floor(delta n)`` vertices."""
    q = touch_threshold(n, eps)
    s = math.floor(as_fraction(delta) * n)
    eu, ev = edge_endpoints(n)
    seen = set()
    for cover in itertools.combinations(range(n), s):
        c = np.zeros(n, dtype=bool)
        c[list(cover)] = True
        touched = np.flatnonzero(c[eu] | c[ev]).tolist()
        _guard(len(seen) + math.comb(len(touched), q))
        seen.update(itertools.combinations(touched, q))
    return Family(n, tuple(sorted(seen)), f"F1(n={n}, eps={eps}, delta={delta})")


def f2_family(n: int, eps, delta) -> Family:
    """Edge sets on ``k <= floor(delta n)`` vertices with ``span_threshold(k)`` edges."""
    kmax = math.floor(as_fraction(delta) * n)
    seen = set()
    for k in range(1, kmax + 1):
        q = span_threshold(k, eps)
        if q > k * (k - 1) // 2:
            continue
        for U in itertools.combinations(range(n), k):
            inner = [edge_id(n, a, b) for a, b in itertools.combinations(U, 2)]
            _guard(len(seen) + math.comb(len(inner), q))
            seen.update(itertools.combinations(inner, q))
    return Family(n, tuple(sorted(seen)), f"F2(n={n}, eps={eps}, delta={delta})")


def union(*fams: Family) -> Family:
    n = fams[0].n
    mem = sorted(set(itertools.chain.from_iterable(f.members for f in fams)))
    return Family(n, tuple(mem), "+".join(f.tag for f in fams))


def parse_family(text: str, n: int) -> Family:
    """Blocks of ``u v`` lines separated by blank lines; ``#`` starts a comment."""
    members, cur = [], []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            if cur:
                members.append(tuple(cur))
                cur = []
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListFormatError(no, f"expected two vertex ids, got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            cur.append(edge_id(n, u, v))
        except ValueError as e:
            raise EdgeListFormatError(no, str(e))
    if cur:
        members.append(tuple(cur))
    return Family(n, tuple(members), "file")


def format_family(fam: Family) -> str:
    eu, ev = edge_endpoints(fam.n)
    blocks = ["\n".join(f"{eu[e]} {ev[e]}" for e in m) for m in fam.members]
    return "\n\n".join(blocks) + "\n"


def weight_sum(fam: Family, b: int) -> Fraction:
    return sum((Fraction(1, (1 + b) ** len(m)) for m in fam.members), Fraction(0))
