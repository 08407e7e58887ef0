"""Biased positional games on the edge set of K_n.

Edges of K_n are numbered lexicographically over pairs ``u < v``. Side ``A``
is the single-edge player (Maker, Avoider, Client); side ``B`` claims ``b``
edges per round (Breaker, Enforcer) or offers up to ``b + 1`` (Waiter).

A strategy is any object with the methods the engine calls:

* ``claim(state, side, count) -> sequence of edge ids`` for Maker-Breaker
  and Avoider-Enforcer moves;
* ``offer(state, max_count) -> sequence of edge ids`` for Waiter;
* ``choose(state, offered) -> edge id`` for Client.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ..errors import IllegalMove, InvalidParams
from ..graph import Graph, _from_pairs

FREE, SIDE_A, SIDE_B = 0, 1, 2


class Kind(str, enum.Enum):
    MAKER_BREAKER = "maker-breaker"
    AVOIDER_ENFORCER = "avoider-enforcer"
    CLIENT_WAITER = "client-waiter"

    def __str__(self):
        return self.value


SIDE_NAMES = {
    Kind.MAKER_BREAKER: ("Maker", "Breaker"),
    Kind.AVOIDER_ENFORCER: ("Avoider", "Enforcer"),
    Kind.CLIENT_WAITER: ("Client", "Waiter"),
}


def edge_endpoints(n: int) -> tuple[np.ndarray, np.ndarray]:
    u, v = np.triu_indices(n, 1)
    return u.astype(np.int64), v.astype(np.int64)


def edge_id(n: int, u: int, v: int) -> int:
    if u == v or not (0 <= u < n and 0 <= v < n):
        raise ValueError(f"({u}, {v}) is not an edge of K_{n}")
    if u > v:
        u, v = v, u
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


@dataclass(frozen=True)
class Move:
    side: int
    edges: tuple[int, ...]
    offered: tuple[int, ...] | None = None    # Client-Waiter rounds only


@dataclass
class GameState:
    n: int
    b: int
    kind: Kind
    first: int = SIDE_A
    seed: int = 0
    owner: np.ndarray = field(default=None, repr=False)
    history: list[Move] = field(default_factory=list, repr=False)
    rounds: int = 0

    def __post_init__(self):
        self.kind = Kind(self.kind)
        if self.n < 2:
            raise InvalidParams("board needs n >= 2")
        if self.b < 1:
            raise InvalidParams(f"bias must be >= 1, got {self.b}")
        if self.first not in (SIDE_A, SIDE_B):
            raise InvalidParams("first must be SIDE_A or SIDE_B")
        self.eu, self.ev = edge_endpoints(self.n)
        if self.owner is None:
            self.owner = np.zeros(self.eu.size, dtype=np.int8)

    @property
    def board_size(self) -> int:
        return int(self.eu.size)

    def free_edges(self) -> np.ndarray:
        return np.flatnonzero(self.owner == FREE)

    def degrees(self, side: int) -> np.ndarray:
        own = self.owner == side
        return (np.bincount(self.eu[own], minlength=self.n)
                + np.bincount(self.ev[own], minlength=self.n))

    def graph(self, side: int) -> Graph:
        own = self.owner == side
        return _from_pairs(self.n, self.eu[own], self.ev[own])

    def count(self, side: int) -> int:
        return int(np.count_nonzero(self.owner == side))

    @property
    def finished(self) -> bool:
        return not (self.owner == FREE).any()

    def transcript(self) -> dict:
        a, b = SIDE_NAMES[self.kind]
        names = {SIDE_A: a, SIDE_B: b}
        moves = []
        for mv in self.history:
            row = {"side": names[mv.side], "edges": [[int(self.eu[e]), int(self.ev[e])] for e in mv.edges]}
            if mv.offered is not None:
                row["offered"] = [[int(self.eu[e]), int(self.ev[e])] for e in mv.offered]
            moves.append(row)
        return {"kind": self.kind.value, "n": self.n, "b": self.b, "first": names[self.first],
                "seed": self.seed, "rounds": self.rounds, "moves": moves,
                "owner": self.owner.tolist()}


@dataclass(frozen=True)
class GameResult:
    state: GameState
    graph_a: Graph
    graph_b: Graph


def _check_edges(state: GameState, edges, count_lo: int, count_hi: int, who: str) -> tuple[int, ...]:
    try:
        edges = tuple(int(e) for e in edges)
    except TypeError:
        raise IllegalMove(f"{who} returned a non-sequence", list(state.history))
    if not count_lo <= len(edges) <= count_hi:
        raise IllegalMove(f"{who} returned {len(edges)} edges, allowed {count_lo}..{count_hi}",
                          list(state.history))
    if len(set(edges)) != len(edges):
        raise IllegalMove(f"{who} repeated an edge", list(state.history))
    for e in edges:
        if not 0 <= e < state.board_size or state.owner[e] != FREE:
            raise IllegalMove(f"{who} picked edge {e}, which is not free", list(state.history))
    return edges


def _quota(state: GameState, side: int) -> int:
    free = int(np.count_nonzero(state.owner == FREE))
    return min(1 if side == SIDE_A else state.b, free)


def play_game(state: GameState, strat_a, strat_b, *, max_rounds: int | None = None) -> GameResult:
    """Run the game until the board is exhausted (or ``max_rounds`` rounds).

    ``strat_a`` plays side A, ``strat_b`` side B. A round is one move of each
    side (one offer-and-choice in Client-Waiter).
    """
    names = SIDE_NAMES[state.kind]
    while not state.finished and (max_rounds is None or state.rounds < max_rounds):
        if state.kind is Kind.CLIENT_WAITER:
            hi = min(state.b + 1, int(np.count_nonzero(state.owner == FREE)))
            offered = _check_edges(state, strat_b.offer(state, hi), 1, hi, names[1])
            pick = int(strat_a.choose(state, offered))
            if pick not in offered:
                raise IllegalMove(f"{names[0]} chose edge {pick}, which was not offered",
                                  list(state.history))
            rest = tuple(e for e in offered if e != pick)
            state.owner[pick] = SIDE_A
            state.owner[list(rest)] = SIDE_B
            state.history.append(Move(SIDE_A, (pick,), offered))
        else:
            for side in (state.first, SIDE_B if state.first == SIDE_A else SIDE_A):
                q = _quota(state, side)
                if q == 0:
                    break
                strat = strat_a if side == SIDE_A else strat_b
                edges = _check_edges(state, strat.claim(state, side, q), q, q, names[side - 1])
                state.owner[list(edges)] = side
                state.history.append(Move(side, edges))
        state.rounds += 1
    return GameResult(state, state.graph(SIDE_A), state.graph(SIDE_B))
