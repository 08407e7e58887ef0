"""Expander-or-dense-set extraction for locally sparse bounded-degree graphs.

Three entry points:

* :func:`extract_expander` -- the polynomial-time peeling loop. Each round
  either certifies the current induced subgraph through its spectral gap or
  uses a sweep cut to shrink it, until a small dense set is left.
* :func:`existential_oracle` -- the exhaustive density-halving iteration,
  only usable on tiny graphs; it serves as a test oracle.
* :func:`certify_spectral_expansion` -- turns a spectral gap into a vertex
  expansion lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from . import _bits
from .errors import (
    HypothesisViolated,
    InternalInvariantViolated,
    InvalidParams,
    PreconditionDegree,
    PreconditionDensity,
    TooLarge,
)
from .expansion import vertex_expansion_exact
from .graph import Graph, VertexSet, induced, subset_stats
from .spectral import DEFAULT_TOL, lambda1, sweep_cut


def as_fraction(x) -> Fraction:
    """Exact value of a parameter; floats are read at their decimal repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class ExtractionParams:
    c1: Fraction
    c2: Fraction
    alpha: Fraction
    delta_cap: int

    def __post_init__(self):
        for name in ("c1", "c2", "alpha"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if not self.c1 > self.c2 > 1:
            raise InvalidParams(f"need c1 > c2 > 1, got c1={self.c1}, c2={self.c2}")
        if not 0 < self.alpha < 1:
            raise InvalidParams(f"need 0 < alpha < 1, got {self.alpha}")
        if int(self.delta_cap) != self.delta_cap or self.delta_cap < 1:
            raise InvalidParams(f"degree cap must be a positive integer, got {self.delta_cap}")
        object.__setattr__(self, "delta_cap", int(self.delta_cap))


def ceil_log2_inverse(alpha: Fraction) -> int:
    """Smallest L with 2**L * alpha >= 1."""
    L = 0
    while alpha * 2 ** L < 1:
        L += 1
    return L


@dataclass(frozen=True)
class Thresholds:
    """Constants derived from :class:`ExtractionParams`.

    ``density_step`` and ``gamma_existential`` belong to the exhaustive
    iteration (``levels`` halvings, density targets dropping by one step each).
    ``shrink_steps`` is the log-ratio ``log(alpha) / log(1 - 1/(2*Delta))``
    bounding how many keep-steps the peeling loop can take; ``peel_slack`` is the
    per-step density loss it can afford. The spectral threshold
    ``lambda_threshold = peel_slack**2 / (2 Delta**2)`` is where the sweep-cut
    guarantee ``e(W) <= sqrt(2 lambda) Delta |W|`` stops implying
    ``e(W) <= peel_slack |W|``; at or above it the certified expansion is
    ``gamma_algorithmic = lambda_threshold / (2 Delta)``.
    """

    params: ExtractionParams
    levels: int
    density_step: Fraction
    gamma_existential: Fraction
    shrink_steps: float
    shrink_steps_ceil: int
    peel_slack: float
    lambda_threshold: float
    gamma_algorithmic: float

    def density_target(self, i: int) -> Fraction:
        return self.params.c1 - i * self.density_step


def derive_thresholds(p: ExtractionParams) -> Thresholds:
    if not isinstance(p, ExtractionParams):
        raise InvalidParams("expected ExtractionParams")
    levels = ceil_log2_inverse(p.alpha)
    step = (p.c1 - p.c2) / levels
    gamma_ex = step / p.delta_cap
    k = math.log(float(p.alpha)) / math.log1p(-1.0 / (2 * p.delta_cap))
    slack = float(p.c1 - p.c2) / (2 * k)
    lam = slack ** 2 / (2 * p.delta_cap ** 2)
    return Thresholds(p, levels, step, gamma_ex, k, math.ceil(k), slack, lam,
                      lam / (2 * p.delta_cap))


def sparsity_alpha(c1, c2) -> float:
    """Radius ``(c2 / (5 c1)) ** (c2 / (c2 - 1))`` below which G(n, c1/n) is locally sparse."""
    c1, c2 = float(c1), float(c2)
    if not c1 > c2 > 1:
        raise InvalidParams(f"need c1 > c2 > 1, got c1={c1}, c2={c2}")
    return (c2 / (5 * c1)) ** (c2 / (c2 - 1))


# -- peeling loop ------------------------------------------------------------

@dataclass(frozen=True)
class TraceStep:
    iteration: int
    size: int
    edges: int
    action: str                    # isolated | certify | delete | keep | witness
    keep_steps: int
    lambda1: float | None = None
    cut_size: int | None = None
    cut_boundary: int | None = None
    cut_touching: int | None = None
    removed: int = 0

    @property
    def density(self) -> Fraction:
        return Fraction(self.edges, self.size)


@dataclass(frozen=True)
class ExpanderCertificate:
    vertices: VertexSet
    lambda_achieved: float
    gamma_lower_bound: float
    trace: tuple[TraceStep, ...] = field(repr=False)

    kind = "ExpanderCertificate"


@dataclass(frozen=True)
class DenseWitness:
    w: VertexSet
    spanned_edges: int
    trace: tuple[TraceStep, ...] = field(repr=False)

    kind = "DenseWitness"


ExtractionOutcome = Union[ExpanderCertificate, DenseWitness]


def check_preconditions(G: Graph, p: ExtractionParams):
    if G.n == 0 or Fraction(G.m, G.n) < p.c1:
        raise PreconditionDensity(f"density {G.m}/{G.n} is below c1={p.c1}")
    if G.max_degree > p.delta_cap:
        raise PreconditionDegree(f"max degree {G.max_degree} exceeds cap {p.delta_cap}")


def extract_expander(G: Graph, p: ExtractionParams, *, tol: float | None = None) -> ExtractionOutcome:
    """Find an induced expander on at least ``alpha n`` vertices, or a dense set of at most ``alpha n``.

    Every branch is recorded in the returned trace. Raises
    :class:`InternalInvariantViolated` if the density bookkeeping ever fails,
    which would indicate a bug rather than bad input.
    """
    check_preconditions(G, p)
    th = derive_thresholds(p)
    if tol is None:
        tol = max(min(DEFAULT_TOL, th.lambda_threshold * 1e-3), 1e-14)
    n = G.n
    small = p.alpha * n
    current = np.ones(n, dtype=bool)
    keeps = 0
    trace: list[TraceStep] = []
    for it in range(n + 1):
        H, ids = induced(G, current)
        size, edges = H.n, H.m
        if Fraction(edges, size) < p.c2:
            raise InternalInvariantViolated(
                f"iteration {it}: density {edges}/{size} fell below c2={p.c2} at size {size}")
        if size > small:
            if keeps > th.shrink_steps_ceil:
                raise InternalInvariantViolated(f"{keeps} keep-steps exceed {th.shrink_steps_ceil}")
            floor = float(p.c1) - keeps * th.peel_slack
            if edges / size < floor - 1e-9:
                raise InternalInvariantViolated(f"density {edges / size} below loop floor {floor}")
        if size <= small:
            trace.append(TraceStep(it, size, edges, "witness", keeps))
            out = DenseWitness(VertexSet.of(ids), edges, tuple(trace))
            _check_witness(G, p, out)
            return out
        iso = H.degrees == 0
        if iso.any():
            trace.append(TraceStep(it, size, edges, "isolated", keeps, removed=int(iso.sum())))
            current[ids[iso]] = False
            continue
        spec = lambda1(H, tol)
        if spec.lambda1 >= th.lambda_threshold:
            trace.append(TraceStep(it, size, edges, "certify", keeps, lambda1=spec.lambda1))
            out = ExpanderCertificate(VertexSet.of(ids), spec.lambda1,
                                      spec.lambda1 / (2 * p.delta_cap), tuple(trace))
            if size < small or out.lambda_achieved < th.lambda_threshold:
                raise InternalInvariantViolated("certificate invariants fail")
            return out
        cut = sweep_cut(H, spec)
        st = subset_stats(H, cut.cut_set)
        wmask = cut.cut_set.mask(size)
        # delete on ties: touching <= d_i |W|
        if st.touching * size <= edges * len(cut.cut_set):
            action = "delete"
            current[ids[wmask]] = False
        else:
            action = "keep"
            keeps += 1
            if st.boundary > th.peel_slack * len(cut.cut_set) * (1 + 1e-9):
                raise InternalInvariantViolated(
                    f"sweep boundary {st.boundary} exceeds slack {th.peel_slack} * {len(cut.cut_set)}")
            current[ids[~wmask]] = False
        trace.append(TraceStep(it, size, edges, action, keeps, lambda1=spec.lambda1,
                               cut_size=len(cut.cut_set), cut_boundary=st.boundary,
                               cut_touching=st.touching))
    raise InternalInvariantViolated("peeling loop did not terminate within n iterations")


def _check_witness(G, p, out: DenseWitness):
    st = subset_stats(G, out.w)
    if st.within != out.spanned_edges or st.within < p.c2 * len(out.w) or len(out.w) > p.alpha * G.n:
        raise InternalInvariantViolated("dense witness invariants fail")


@dataclass(frozen=True)
class Verification:
    ok: bool
    detail: str
    lambda_recomputed: float | None = None
    exact_gamma: Fraction | None = None


def verify_outcome(G: Graph, p: ExtractionParams, outcome: ExtractionOutcome, *,
                   exact_max_n: int = 20) -> Verification:
    """Recheck an outcome from scratch, independently of the loop that produced it."""
    th = derive_thresholds(p)
    if isinstance(outcome, DenseWitness):
        st = subset_stats(G, outcome.w)
        ok = (len(outcome.w) > 0 and st.within * p.c2.denominator >= p.c2.numerator * len(outcome.w)
              and len(outcome.w) <= p.alpha * G.n and st.within == outcome.spanned_edges)
        return Verification(ok, f"|W|={len(outcome.w)} spans {st.within} edges")
    H, _ = induced(G, outcome.vertices.mask(G.n))
    lam = lambda1(H, max(min(DEFAULT_TOL, th.lambda_threshold * 1e-3), 1e-14)).lambda1
    ok = lam >= th.lambda_threshold and H.n >= p.alpha * G.n
    gamma = None
    if H.n <= exact_max_n:
        gamma = vertex_expansion_exact(H).gamma
        ok = ok and gamma >= th.gamma_algorithmic
    return Verification(ok, f"|V*|={H.n}, lambda={lam:.6g}", lam, gamma)


# -- exhaustive oracle --------------------------------------------------------

ORACLE_MAX_N = 14


@dataclass(frozen=True)
class OracleLevel:
    level: int
    target: Fraction
    graph_vertices: VertexSet
    minimal_dense: VertexSet
    next_vertices: VertexSet | None


@dataclass(frozen=True)
class OracleResult:
    subgraph: VertexSet
    gamma_verified: Fraction
    levels: tuple[OracleLevel, ...]


def check_hypotheses(G: Graph, p: ExtractionParams, within=None):
    """Exhaustively test global density, local sparsity and the degree cap."""
    n = G.n
    if n == 0 or Fraction(G.m, n) < p.c1:
        raise HypothesisViolated(f"density {G.m}/{n} below c1={p.c1}", VertexSet(tuple(range(n))))
    if G.max_degree > p.delta_cap:
        v = int(np.argmax(G.degrees))
        raise HypothesisViolated(f"vertex {v} has degree {G.max_degree} > {p.delta_cap}", VertexSet((v,)))
    if within is None:
        within = _bits.within(G)
    ms = _bits.masks(n)
    size = _bits.popcount(ms)
    kmax = math.floor(p.alpha * n)
    bad = ms[(size >= 1) & (size <= kmax)
             & (within.astype(np.int64) * p.c2.denominator >= size.astype(np.int64) * p.c2.numerator)]
    if bad.size:
        w = _bits.first_by_size_then_lex(bad, n)
        raise HypothesisViolated(f"set of size <= {kmax} spans >= c2|W| edges", VertexSet.from_mask(w))


def _first_dense_submask(pool: int, within, size_lo, size_hi, target: Fraction, n: int):
    """First (size, lex) nonempty W within ``pool`` with size in range and within(W) >= target |W|."""
    ms = _bits.masks(n)
    sub = ms[(ms & ~pool) == 0]
    sz = _bits.popcount(sub)
    w = within[sub].astype(np.int64)
    ok = (sz >= max(size_lo, 1)) & (sz <= size_hi) & (w * target.denominator >= sz.astype(np.int64) * target.numerator)
    hits = sub[ok]
    if hits.size == 0:
        return None
    return _bits.first_by_size_then_lex(hits, n)


def existential_oracle(G: Graph, p: ExtractionParams) -> OracleResult:
    """Run the density-halving iteration literally, by exhaustive search.

    At level ``i`` the current graph ``G_i`` has density at least
    ``c1 - i * step``. Its smallest (hence inclusion-minimal) induced subgraph
    ``H_i`` meeting that density is found; if ``H_i`` contains a set ``W`` with
    ``alpha n <= |W| <= |H_i| / 2`` meeting the next target, iterate on
    ``G[W]``; otherwise ``H_i`` is returned with its exact vertex expansion.
    """
    n = G.n
    if n > ORACLE_MAX_N:
        raise TooLarge(f"existential_oracle is exhaustive; n={n} > {ORACLE_MAX_N}")
    within = _bits.within(G)
    check_hypotheses(G, p, within)
    th = derive_thresholds(p)
    pool = (1 << n) - 1
    levels = []
    for i in range(th.levels + 1):
        target = th.density_target(i)
        u = _first_dense_submask(pool, within, 1, n, target, n)
        if u is None:
            raise InternalInvariantViolated(f"level {i}: no subgraph of density >= {target}")
        usize = bin(u).count("1")
        lo = math.ceil(p.alpha * n)
        nxt = _first_dense_submask(u, within, lo, usize // 2, th.density_target(i + 1), n)
        levels.append(OracleLevel(i, target, VertexSet.from_mask(pool), VertexSet.from_mask(u),
                                  VertexSet.from_mask(nxt) if nxt is not None else None))
        if nxt is None:
            sub = VertexSet.from_mask(u)
            if len(sub) < p.alpha * n:
                raise InternalInvariantViolated(f"final subgraph has {len(sub)} < alpha n vertices")
            H, _ = induced(G, sub.mask(n))
            gamma = vertex_expansion_exact(H).gamma
            return OracleResult(sub, gamma, tuple(levels))
        pool = nxt
    raise InternalInvariantViolated("iteration passed the last level; local sparsity must fail")


def certify_spectral_expansion(G: Graph) -> float:
    """Lower bound ``lambda1 / (2 * max_degree)`` on the vertex expansion of ``G``."""
    spec = lambda1(G)
    return spec.lambda1 / (2 * G.max_degree)
