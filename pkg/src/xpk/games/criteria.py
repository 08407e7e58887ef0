"""Weight-sum criteria and the three sparsity properties of a player's graph."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import InvalidParams
from ..extraction import as_fraction
from ..graph import Graph
from ..sparsity import SparsityVerdict, local_sparsity_verdict, touch_bound_verdict
from .families import Family, touch_threshold, weight_sum


@dataclass(frozen=True)
class CriterionSums:
    beck_sum: Fraction
    dk_sum: Fraction
    beck_holds: bool
    dk_holds: bool


def criterion_sums(fam: Family, b: int) -> CriterionSums:
    """``sum (1+b)^-|H|``; the blocker criterion needs < 1, the Client one < 1/2."""
    if b < 1:
        raise InvalidParams(f"bias must be >= 1, got {b}")
    s = weight_sum(fam, b)
    return CriterionSums(s, s, s < 1, s < Fraction(1, 2))


@dataclass(frozen=True)
class P123Report:
    edges: int
    edges_needed: Fraction
    p1: bool
    p2: SparsityVerdict
    p3: SparsityVerdict
    set_size: int
    touch_limit: int

    @property
    def p2_holds(self) -> bool:
        return self.p2.passed

    @property
    def p3_holds(self) -> bool:
        return self.p3.passed

    @property
    def all_hold(self) -> bool:
        return self.p1 and self.p2_holds and self.p3_holds


def check_p123(G: Graph, n: int, eps, delta, *, effort: int = 10 ** 5, seed: int = 0) -> P123Report:
    """Edge count, local sparsity and touch bound of a graph on the board's vertices.

    P1: at least ``(1 + eps/2) n`` edges. P2: every ``k <= delta n`` vertices
    span at most ``(1 + eps/8) k`` edges. P3: every ``delta n`` vertices touch
    at most ``eps n / 4`` edges. Containing a member of the first toy family
    is the same as failing P3, and containing one of the second is the same
    as failing P2.
    """
    eps, delta = as_fraction(eps), as_fraction(delta)
    if not 0 < eps or not 0 < delta < 1:
        raise InvalidParams(f"need eps > 0 and 0 < delta < 1, got eps={eps}, delta={delta}")
    if G.n != n:
        raise InvalidParams(f"graph has {G.n} vertices, board has {n}")
    need = (1 + eps / 2) * n
    p1 = G.m >= need
    p2 = local_sparsity_verdict(G, 1 + eps / 8, delta, effort, strict=False, seed=seed)
    s = math.floor(delta * n)
    t = touch_threshold(n, eps)
    p3 = touch_bound_verdict(G, s, t)
    return P123Report(G.m, need, p1, p2, p3, s, t)
