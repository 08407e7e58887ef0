"""Maker-Breaker, Avoider-Enforcer and Client-Waiter games on E(K_n)."""

from .criteria import CriterionSums, P123Report, check_p123, criterion_sums
from .engine import FREE, SIDE_A, SIDE_B, GameResult, GameState, Kind, edge_id, play_game
from .families import Family, f1_family, f2_family, triangles
from .pipeline import calibrate_delta, maker_minor_pipeline
from .strategies import (
    GreedyDegree,
    PotentialAttacker,
    PotentialBlocker,
    PotentialClient,
    RandomEdge,
    make_strategy,
)
