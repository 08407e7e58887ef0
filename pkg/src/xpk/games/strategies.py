"""Strategies: random, greedy-degree and potential-based players.

All randomness comes from a generator seeded at construction, so a fresh
strategy with the same seed replays the same game against the same opponent.
"""

from __future__ import annotations

import numpy as np

from .engine import FREE, SIDE_A, SIDE_B, GameState
from .families import Family


def _other(side: int) -> int:
    return SIDE_B if side == SIDE_A else SIDE_A


class RandomEdge:
    """Uniformly random free edges; offers are random full-size batches."""

    name = "random"

    def __init__(self, seed: int = 0):
        self.rng = np.random.default_rng(seed)

    def claim(self, state: GameState, side: int, count: int):
        free = state.free_edges()
        return self.rng.choice(free, size=count, replace=False).tolist()

    def offer(self, state: GameState, max_count: int):
        return self.claim(state, SIDE_B, max_count)

    def choose(self, state: GameState, offered):
        return offered[int(self.rng.integers(len(offered)))]


def _argmax_random(scores: np.ndarray, candidates: np.ndarray, rng) -> int:
    s = scores[candidates]
    top = candidates[s == s.max()]
    return int(top[rng.integers(top.size)]) if top.size > 1 else int(top[0])


class GreedyDegree:
    """Prefer edges whose endpoints already have high degree in the player's graph.

    Ties are broken by a seeded random choice. As Waiter it offers the edges
    with the highest Client degree sums.
    """

    name = "greedy"

    def __init__(self, seed: int = 0):
        self.rng = np.random.default_rng(seed)

    def _score(self, state, side, owner):
        own = owner == side
        d = (np.bincount(state.eu[own], minlength=state.n)
             + np.bincount(state.ev[own], minlength=state.n))
        return (d[state.eu] + d[state.ev]).astype(np.int64)

    def claim(self, state: GameState, side: int, count: int):
        owner = state.owner.copy()
        out = []
        for _ in range(count):
            free = np.flatnonzero(owner == FREE)
            e = _argmax_random(self._score(state, side, owner), free, self.rng)
            owner[e] = side
            out.append(e)
        return out

    def offer(self, state: GameState, max_count: int):
        sc = self._score(state, SIDE_A, state.owner)
        free = state.free_edges()
        key = sc[free] + self.rng.random(free.size) * 0.5
        return free[np.argsort(-key, kind="stable")[:max_count]].tolist()

    def choose(self, state: GameState, offered):
        off = np.asarray(offered)
        return _argmax_random(self._score(state, SIDE_A, state.owner), off, self.rng)


class _Potential:
    """Exact integer weights ``(1+b)^(L - free(H))`` of live members.

    A member is live for ``side`` while ``side`` owns none of its edges;
    ``L`` is the largest member size, so every weight is an integer and the
    weight order matches ``(1+b)^(-free(H))``.
    """

    def __init__(self, fam: Family, b: int):
        self.fam = fam
        self.b = int(b)
        self.M = fam.matrix()
        self.valid = self.M >= 0
        self.L = fam.max_size
        big = (1 + self.b) ** max(self.L, 1) >= 2 ** 62
        self.dtype = object if big else np.int64

    def edge_scores(self, owner: np.ndarray, live_for: int) -> np.ndarray:
        """Sum of live-member weights over members containing each free edge."""
        size = owner.size
        out = np.zeros(size, dtype=self.dtype)
        if self.M.size == 0:
            return out
        own = np.where(self.valid, owner[np.where(self.valid, self.M, 0)], -1)
        live = ~((own == live_for).any(axis=1))
        free = ((own == FREE) & self.valid).sum(axis=1)
        expo = (self.L - free)[live]
        w = np.array([(1 + self.b) ** int(x) for x in expo], dtype=self.dtype)
        rows = self.M[live]
        mask = (own[live] == FREE)
        np.add.at(out, rows[mask], np.repeat(w, mask.sum(axis=1)))
        return out

    def phi(self, owner: np.ndarray, live_for: int) -> int:
        if self.M.size == 0:
            return 0
        own = np.where(self.valid, owner[np.where(self.valid, self.M, 0)], -1)
        live = ~((own == live_for).any(axis=1))
        free = ((own == FREE) & self.valid).sum(axis=1)
        return sum((1 + self.b) ** int(self.L - f) for f in free[live])


class PotentialBlocker(_Potential):
    """Blocker for the side claiming ``b`` edges per round.

    Each pick takes the free edge whose live members carry the most weight
    (ties by smallest edge id), then recomputes; members the blocker has
    touched are dead and drop out.
    """

    name = "potential-blocker"

    def claim(self, state: GameState, side: int, count: int):
        owner = state.owner.copy()
        out = []
        for _ in range(count):
            sc = self.edge_scores(owner, side)
            free = np.flatnonzero(owner == FREE)
            vals = sc[free]
            best = max(vals.tolist()) if free.size else 0
            e = int(free[[i for i, x in enumerate(vals.tolist()) if x == best][0]])
            owner[e] = side
            out.append(e)
        return out


class PotentialAttacker(_Potential):
    """Single-edge player pushing towards a complete member.

    Picks the free edge with the largest weight of members the opponent has
    not touched yet, ties broken by a seeded random choice. As Waiter it
    offers the most dangerous edges to Client.
    """

    name = "adversarial"

    def __init__(self, fam: Family, b: int, seed: int = 0):
        super().__init__(fam, b)
        self.rng = np.random.default_rng(seed)

    def _pick(self, owner, live_for, candidates):
        sc = self.edge_scores(owner, live_for)
        vals = [sc[c] for c in candidates.tolist()]
        best = max(vals)
        top = [c for c, v in zip(candidates.tolist(), vals) if v == best]
        return int(top[self.rng.integers(len(top))])

    def claim(self, state: GameState, side: int, count: int):
        owner = state.owner.copy()
        out = []
        for _ in range(count):
            e = self._pick(owner, _other(side), np.flatnonzero(owner == FREE))
            owner[e] = side
            out.append(e)
        return out

    def offer(self, state: GameState, max_count: int):
        # members Waiter has touched are safe for Client; rank the rest
        sc = self.edge_scores(state.owner, SIDE_B)
        free = state.free_edges()
        vals = np.array([float(sc[e]) for e in free.tolist()]) + self.rng.random(free.size) * 0.5
        return free[np.argsort(-vals, kind="stable")[:max_count]].tolist()

    def choose(self, state: GameState, offered):
        return self._pick(state.owner, SIDE_B, np.asarray(offered))


class PotentialClient(_Potential):
    """Client avoiding family members: take the offered edge of least exposure.

    Exposure of an edge is the weight of members it lies in that Waiter has
    not touched (those could still end up entirely Client's). Ties go to the
    smallest edge id.
    """

    name = "potential-client"

    def choose(self, state: GameState, offered):
        sc = self.edge_scores(state.owner, SIDE_B)
        return min(offered, key=lambda e: (sc[e], e))


def make_strategy(name: str, *, seed: int = 0, family: Family | None = None, b: int = 1):
    if name == "random":
        return RandomEdge(seed)
    if name == "greedy":
        return GreedyDegree(seed)
    if family is None:
        raise ValueError(f"strategy {name!r} needs a family")
    if name == "adversarial":
        return PotentialAttacker(family, b, seed)
    if name == "potential-blocker":
        return PotentialBlocker(family, b)
    if name == "potential-client":
        return PotentialClient(family, b)
    raise ValueError(f"unknown strategy {name!r}")


STRATEGIES = ("random", "greedy", "adversarial", "potential-blocker", "potential-client")
