"""Seeded G(n, p) and the Monte-Carlo experiments built on it.

Generator: numpy's PCG64 seeded through ``SeedSequence(seed)``. Trial ``i``
of an experiment with master seed ``s`` uses the 64-bit seed
``trial_seed(s, i)``, so trials can run in any order or in parallel and still
reproduce bit for bit.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidParams, XpkError
from .extraction import (
    ExtractionParams,
    ExtractionOutcome,
    Verification,
    as_fraction,
    extract_expander,
    sparsity_alpha,
    verify_outcome,
)
from .graph import (
    Graph,
    _from_pairs,
    connected_components,
    induced,
    top_degree_order,
)
from .sparsity import Status, local_sparsity_verdict, touch_bound_verdict

log = logging.getLogger(__name__)

PRNG_NAME = "numpy.PCG64/SeedSequence v1"
SKIP_MAX_P = 0.1
_DENSE_ROWS = 2048


@dataclass(frozen=True)
class GnpSpec:
    n: int
    p: float
    seed: int

    def __post_init__(self):
        if self.n < 0:
            raise InvalidParams(f"n must be non-negative, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise InvalidParams(f"p must lie in [0, 1], got {self.p}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise InvalidParams("seed must be a 64-bit unsigned value")


def trial_seed(master: int, i: int) -> int:
    return int(np.random.SeedSequence([int(master), int(i)]).generate_state(1, np.uint64)[0])


def pair_from_index(k: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Invert the lexicographic numbering of pairs ``u < v`` of ``0..n-1``."""
    k = np.asarray(k, dtype=np.int64)
    b = 2 * n - 1
    u = np.floor((b - np.sqrt(float(b) ** 2 - 8.0 * k)) / 2).astype(np.int64)
    start = u * (2 * n - u - 1) // 2
    # float rounding can be off by one either way near row boundaries
    low = start > k
    u[low] -= 1
    start = u * (2 * n - u - 1) // 2
    nxt = (u + 1) * (2 * n - u - 2) // 2
    high = nxt <= k
    u[high] += 1
    start = u * (2 * n - u - 1) // 2
    v = k - start + u + 1
    return u, v


def _skip_sample(n: int, p: float, rng: np.random.Generator):
    """Pair indices of G(n, p) by geometric jumps, in batches."""
    total = n * (n - 1) // 2
    batch = max(1024, int(total * p * 1.1) + 64)
    out = []
    pos = -1
    while True:
        gaps = rng.geometric(p, size=batch).astype(np.int64)
        idx = pos + np.cumsum(gaps)
        if idx[-1] >= total:
            out.append(idx[idx < total])
            break
        out.append(idx)
        pos = int(idx[-1])
    return np.concatenate(out)


def gnp(spec: GnpSpec) -> Graph:
    """Each of the ``C(n, 2)`` pairs independently with probability ``p``."""
    n, p = spec.n, spec.p
    if n < 2 or p == 0.0:
        return _from_pairs(n, np.zeros(0, np.int64), np.zeros(0, np.int64))
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(spec.seed))))
    if p == 1.0:
        u, v = np.triu_indices(n, 1)
        return _from_pairs(n, u.astype(np.int64), v.astype(np.int64))
    if p <= SKIP_MAX_P:
        u, v = pair_from_index(_skip_sample(n, p, rng), n)
        return _from_pairs(n, u, v)
    us, vs = [], []
    for r0 in range(0, n, _DENSE_ROWS):
        r1 = min(n, r0 + _DENSE_ROWS)
        hit = rng.random((r1 - r0, n)) < p
        rows, cols = np.nonzero(hit)
        rows = rows + r0
        keep = cols > rows
        us.append(rows[keep])
        vs.append(cols[keep])
    return _from_pairs(n, np.concatenate(us).astype(np.int64), np.concatenate(vs).astype(np.int64))


def wilson_interval(k: int, n: int, z: float = 1.96) -> tuple[float, float]:
    if n == 0:
        return (0.0, 1.0)
    ph = k / n
    den = 1 + z * z / n
    mid = (ph + z * z / (2 * n)) / den
    half = z * math.sqrt(ph * (1 - ph) / n + z * z / (4 * n * n)) / den
    return (max(0.0, mid - half), min(1.0, mid + half))


@dataclass(frozen=True)
class MonteCarloResult:
    trials: int
    violations: int
    inconclusive: int
    passes: int
    violation_ci: tuple[float, float]
    params: dict
    rows: tuple[dict, ...] = field(repr=False)

    @property
    def violation_rate(self) -> float:
        return self.violations / self.trials if self.trials else 0.0


def _run_trials(fn, args_list, jobs: int):
    if jobs > 1 and len(args_list) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, args_list))
    return [fn(a) for a in args_list]


def _summarise(rows, params) -> MonteCarloResult:
    v = sum(r["status"] == Status.VIOLATION.value for r in rows)
    inc = sum(r["status"] == Status.INCONCLUSIVE.value for r in rows)
    return MonteCarloResult(len(rows), v, inc, len(rows) - v - inc, wilson_interval(v, len(rows)),
                            params, tuple(rows))


def _sparsity_trial(args):
    i, n, c1, c2, alpha, effort, seed = args
    s = trial_seed(seed, i)
    G = gnp(GnpSpec(n, c1 / n, s))
    v = local_sparsity_verdict(G, c2, alpha, effort, seed=s)
    return {"trial": i, "seed": s, "m": G.m, "status": v.status.value,
            "best_density": None if v.best_density is None else float(v.best_density),
            "effort": v.effort_used, "witness_size": None if v.witness is None else len(v.witness)}


def monte_carlo_prop1(n: int, c1, c2, trials: int, effort: int = 10 ** 6, *,
                      seed: int = 0, jobs: int = 1) -> MonteCarloResult:
    """Local sparsity of G(n, c1/n) at the radius ``sparsity_alpha(c1, c2)``."""
    c1, c2 = float(c1), float(c2)
    alpha = sparsity_alpha(c1, c2)
    args = [(i, n, c1, c2, alpha, effort, seed) for i in range(trials)]
    rows = _run_trials(_sparsity_trial, args, jobs)
    return _summarise(rows, {"n": n, "c1": c1, "c2": c2, "alpha": alpha, "alpha_n": alpha * n,
                             "effort": effort, "seed": seed, "prng": PRNG_NAME})


def touch_params(n: int, delta: float) -> tuple[int, int]:
    """Set size ``floor(delta n / ln(1/delta))`` and edge bound ``ceil(delta n)``."""
    d = as_fraction(delta)
    m = math.floor(float(d) * n / math.log(1 / float(d)))
    return m, math.ceil(d * n)


def _touch_trial(args):
    i, n, C, m, t, seed = args
    s = trial_seed(seed, i)
    G = gnp(GnpSpec(n, min(1.0, C / n), s))
    v = touch_bound_verdict(G, m, t)
    return {"trial": i, "seed": s, "m": G.m, "status": v.status.value, "detail": v.detail,
            "witness_size": None if v.witness is None else len(v.witness)}


def monte_carlo_prop2(n: int, C, delta, trials: int, *, seed: int = 0, jobs: int = 1) -> MonteCarloResult:
    """Do ``delta n / ln(1/delta)`` vertices of G(n, C/n) touch fewer than ``delta n`` edges?"""
    C, delta = float(C), float(delta)
    if C < 0:
        raise InvalidParams(f"need C >= 0, got {C}")
    if not 0 < delta < 1 / math.e:
        raise InvalidParams(f"need 0 < delta < 1/e, got {delta}")
    m, t = touch_params(n, delta)
    args = [(i, n, C, m, t, seed) for i in range(trials)]
    rows = _run_trials(_touch_trial, args, jobs)
    return _summarise(rows, {"n": n, "C": C, "delta": delta, "set_size": m, "edge_bound": t,
                             "seed": seed, "prng": PRNG_NAME})


# -- giant component pipeline -------------------------------------------------

def giant_fraction_limit(c: float) -> float:
    """Positive root of ``y = 1 - exp(-c y)`` (zero when ``c <= 1``)."""
    if c <= 1:
        return 0.0
    return brentq(lambda y: y - 1 + math.exp(-c * y), 1e-12, 1.0, xtol=1e-15)


def trim_count(n: int, eps: float) -> int:
    return math.floor(eps ** 3 / (2 * math.log(1 / eps)) * n)


def giant_params(eps: float) -> ExtractionParams:
    """Extraction constants matched to the trimmed giant of G(n, (1+eps)/n).

    Density ``1 + eps^2/7``, local density ``1 + eps^2/14``, the matching
    sparsity radius and degree cap ``floor(4 ln(1/eps))``.
    """
    c1 = 1 + Fraction(repr(eps)) ** 2 / 7
    c2 = 1 + Fraction(repr(eps)) ** 2 / 14
    alpha = sparsity_alpha(c1, c2)
    return ExtractionParams(c1, c2, alpha, max(1, math.floor(4 * math.log(1 / eps))))


@dataclass(frozen=True)
class PipelineReport:
    n: int
    eps: float
    seed: int
    edges: int
    giant_size: int
    giant_edges: int
    trim_count: int
    trimmed_size: int
    trimmed_edges: int
    trimmed_max_degree: int
    extraction: ExtractionOutcome | None = field(repr=False)
    extraction_error: str | None
    verification: Verification | None

    @property
    def giant_fraction(self) -> float:
        return self.giant_size / self.n

    @property
    def giant_density(self) -> Fraction:
        return Fraction(self.giant_edges, self.giant_size) if self.giant_size else Fraction(0)

    @property
    def trimmed_density(self) -> Fraction:
        return Fraction(self.trimmed_edges, self.trimmed_size) if self.trimmed_size else Fraction(0)


def giant_pipeline(n: int, eps: float, seed: int, params: ExtractionParams | None = None) -> PipelineReport:
    """G(n, (1+eps)/n) -> largest component -> drop top-degree vertices -> extract.

    The trimmed giant is ``G[C - R]`` where ``R`` holds the
    ``floor(eps^3 / (2 ln(1/eps)) n)`` highest-degree vertices of the giant
    ``C``. Extraction errors (typically an unmet density precondition) are
    captured in the report instead of raised.
    """
    if not 0 < eps < 1:
        raise InvalidParams(f"need 0 < eps < 1, got {eps}")
    if params is None:
        params = giant_params(eps)
    G = gnp(GnpSpec(n, min(1.0, (1 + eps) / n), seed))
    comps = connected_components(G)
    giant_mask = comps[0].mask(n) if comps else np.zeros(n, bool)
    C, _ = induced(G, giant_mask)
    r = min(trim_count(n, eps), C.n)
    keep = np.ones(C.n, dtype=bool)
    keep[top_degree_order(C)[:r]] = False
    T, _ = induced(C, keep)
    outcome, err, ver = None, None, None
    try:
        outcome = extract_expander(T, params)
        ver = verify_outcome(T, params, outcome)
    except XpkError as e:
        err = f"{type(e).__name__}: {e}"
        log.info("seed %d: extraction did not run: %s", seed, err)
    return PipelineReport(n, eps, seed, G.m, C.n, C.m, r, T.n, T.m, T.max_degree,
                          outcome, err, ver)
