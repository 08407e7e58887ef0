"""Random Maker against a biased Breaker, then trim, extract and find a clique minor.

Maker plays uniformly random edges for ``ceil((1 + eps/2) n)`` rounds. Her
graph is checked for the three sparsity properties at a radius ``delta``
taken from a frozen calibration table, its ``floor(delta n)`` highest-degree
vertices are trimmed, the expander extraction runs on the rest, and greedy
contraction looks for a clique minor inside the certified expander.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import BiasTooLarge, InternalInvariantViolated, InvalidParams, XpkError
from ..extraction import (
    ExpanderCertificate,
    ExtractionOutcome,
    ExtractionParams,
    Verification,
    as_fraction,
    extract_expander,
    verify_outcome,
)
from ..graph import Graph, induced, trim_high_degree
from ..minors import MinorModel, clique_minor_greedy
from .criteria import P123Report, check_p123
from .engine import SIDE_A, GameState, Kind, play_game
from .families import touch_threshold
from .strategies import RandomEdge, make_strategy

CALIBRATION_VERSION = 1
CALIBRATION_SEEDS = range(1000, 1050)

# delta per (n, eps, b), frozen from calibrate_delta over CALIBRATION_SEEDS
DELTA_TABLE: dict[tuple[int, Fraction, int], Fraction] = {
    (60, Fraction(2, 5), 18): Fraction(1, 60),
}


def maker_rounds(n: int, eps) -> int:
    return math.ceil((1 + as_fraction(eps) / 2) * n)


def check_bias(n: int, eps, b: int):
    if b > (1 - as_fraction(eps)) * n / 2:
        raise BiasTooLarge(f"b={b} exceeds (1 - eps) n / 2 = {float((1 - as_fraction(eps)) * n / 2)}")


def play_random_maker(n: int, eps, b: int, seed: int, breaker="random") -> GameState:
    """Random Maker (moving first) against ``breaker`` for the Maker's rounds."""
    check_bias(n, eps, b)
    state = GameState(n, b, Kind.MAKER_BREAKER, SIDE_A, seed)
    rng = np.random.SeedSequence(int(seed)).spawn(2)
    maker = RandomEdge(rng[0])
    if isinstance(breaker, str):
        breaker = make_strategy(breaker, seed=rng[1])
    play_game(state, maker, breaker, max_rounds=maker_rounds(n, eps))
    return state


def candidate_deltas(n: int, eps) -> list[Fraction]:
    """``delta`` with ``delta n = 1, 2, ...`` up to the touch bound ``eps n / 4``."""
    top = max(1, math.floor(as_fraction(eps) * n / 4))
    return [Fraction(k, n) for k in range(1, top + 1)]


def calibrate_delta(n: int, eps, b: int, seeds=CALIBRATION_SEEDS, breaker="random"):
    """Joint P2-and-P3 pass rate per candidate delta; best rate wins, ties to larger delta.

    Returns ``(best_delta, {delta: rate})``. The seeds are disjoint from the
    evaluation seeds so the chosen value is fixed before evaluation.
    """
    eps = as_fraction(eps)
    cands = candidate_deltas(n, eps)
    hits = {d: 0 for d in cands}
    seeds = list(seeds)
    for s in seeds:
        G = play_random_maker(n, eps, b, s, breaker).graph(SIDE_A)
        for d in cands:
            r = check_p123(G, n, eps, d, seed=s)
            hits[d] += r.p2_holds and r.p3_holds
    rates = {d: hits[d] / len(seeds) for d in cands}
    best = max(cands, key=lambda d: (rates[d], d))
    return best, rates


def lookup_delta(n: int, eps, b: int) -> Fraction:
    key = (n, as_fraction(eps), b)
    if key not in DELTA_TABLE:
        raise InvalidParams(f"no calibrated delta for (n, eps, b) = {key}; run calibrate_delta")
    return DELTA_TABLE[key]


def pipeline_params(eps, delta) -> ExtractionParams:
    """Density ``1 + eps/4``, local density ``1 + eps/8``, radius ``delta``, cap ``eps/(2 delta)``."""
    eps, delta = as_fraction(eps), as_fraction(delta)
    return ExtractionParams(1 + eps / 4, 1 + eps / 8, delta, max(1, math.floor(eps / (2 * delta))))


@dataclass(frozen=True)
class MakerPipelineReport:
    n: int
    eps: Fraction
    b: int
    seed: int
    delta: Fraction
    maker_edges: int
    props: P123Report
    trimmed_max_degree: int
    degree_cap: Fraction
    params: ExtractionParams
    outcome: ExtractionOutcome | None = field(repr=False)
    extraction_error: str | None
    verification: Verification | None
    minor: MinorModel | None

    @property
    def minor_order(self) -> int:
        return self.minor.order if self.minor is not None else 0

    @property
    def certified(self) -> bool:
        return (isinstance(self.outcome, ExpanderCertificate) and self.verification is not None
                and self.verification.ok)


def maker_minor_pipeline(n: int, eps, b: int, seed: int, breaker="random", *,
                         delta=None) -> MakerPipelineReport:
    eps = as_fraction(eps)
    check_bias(n, eps, b)
    delta = lookup_delta(n, eps, b) if delta is None else as_fraction(delta)
    state = play_random_maker(n, eps, b, seed, breaker)
    M0 = state.graph(SIDE_A)
    props = check_p123(M0, n, eps, delta, seed=seed)
    M1, _ = trim_high_degree(M0, math.floor(delta * n))
    cap = eps / (2 * delta)
    if props.p3_holds and M1.max_degree > cap:
        raise InternalInvariantViolated(
            f"touch bound held but trimmed max degree {M1.max_degree} > {float(cap)}")
    params = pipeline_params(eps, delta)
    outcome, err, ver, minor = None, None, None, None
    try:
        outcome = extract_expander(M1, params)
        ver = verify_outcome(M1, params, outcome)
        if isinstance(outcome, ExpanderCertificate):
            H, _ = induced(M1, outcome.vertices.mask(n))
            minor = clique_minor_greedy(H, seed)
    except XpkError as e:
        err = f"{type(e).__name__}: {e}"
    return MakerPipelineReport(n, eps, b, seed, delta, M0.m, props, M1.max_degree, cap,
                               params, outcome, err, ver, minor)
