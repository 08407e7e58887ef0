import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import clique_path, graphs
from xpk.errors import (
    HypothesisViolated,
    InvalidParams,
    PreconditionDegree,
    PreconditionDensity,
    TooLarge,
)
from xpk.expansion import vertex_expansion_exact
from xpk.extraction import (
    DenseWitness,
    ExpanderCertificate,
    ExtractionParams,
    certify_spectral_expansion,
    derive_thresholds,
    existential_oracle,
    extract_expander,
    sparsity_alpha,
    verify_outcome,
)
from xpk.graph import (
    VertexSet,
    build_graph,
    complete_graph,
    cycle_graph,
    disjoint_union,
    empty_graph,
    grid_graph,
    induced_subgraph,
    path_graph,
    star_graph,
)

# high-precision values of log(1/4) / log(7/8) and the quantities derived from it
SHRINK_STEPS = 10.3817861393688632
PEEL_SLACK = 0.0240806347427994866
LAMBDA_STAR = 1.81211553005038030e-05


def test_thresholds_exact_part():
    th = derive_thresholds(ExtractionParams(2, 1.5, 0.25, 4))
    assert th.levels == 2
    assert th.density_step == Fraction(1, 4)
    assert th.gamma_existential == Fraction(1, 16)
    assert th.density_target(th.levels) == Fraction(3, 2)


def test_thresholds_float_part():
    th = derive_thresholds(ExtractionParams(2, 1.5, 0.25, 4))
    assert th.shrink_steps == pytest.approx(SHRINK_STEPS, rel=1e-14)
    assert th.shrink_steps_ceil == 11
    assert th.peel_slack == pytest.approx(PEEL_SLACK, rel=1e-14)
    assert th.lambda_threshold == pytest.approx(LAMBDA_STAR, rel=1e-13)
    assert th.gamma_algorithmic == pytest.approx(LAMBDA_STAR / 8, rel=1e-13)


def test_sparsity_alpha():
    assert sparsity_alpha(2, 1.5) == pytest.approx(0.003375, rel=1e-12)
    assert sparsity_alpha(1.2, 1.1) == pytest.approx((1.1 / 6) ** 11, rel=1e-12)
    with pytest.raises(InvalidParams):
        sparsity_alpha(1.5, 1.5)


@pytest.mark.parametrize("c1, c2, alpha, cap", [
    (1.5, 1.5, 0.1, 3), (1.5, 1.0, 0.1, 3), (2, 1.5, 0, 3), (2, 1.5, 1, 3), (2, 1.5, 0.1, 0),
])
def test_params_rejected(c1, c2, alpha, cap):
    with pytest.raises(InvalidParams):
        ExtractionParams(c1, c2, alpha, cap)


@settings(max_examples=200, deadline=None)
@given(st.fractions(Fraction(101, 100), 5), st.fractions(Fraction(1, 100), 4),
       st.fractions(Fraction(1, 1000), Fraction(99, 100)), st.integers(1, 40))
def test_threshold_invariants(c2, gap, alpha, cap):
    p = ExtractionParams(c2 + gap, c2, alpha, cap)
    th = derive_thresholds(p)
    assert th.density_target(th.levels) == p.c2
    assert 0 < th.gamma_algorithmic <= th.gamma_existential
    assert th.lambda_threshold > 0 and th.peel_slack > 0
    assert 2 ** th.levels * alpha >= 1 > 2 ** (th.levels - 1) * alpha


def test_k5_plus_isolated():
    G = disjoint_union(complete_graph(5), empty_graph(1))
    p = ExtractionParams(1.5, 1.2, 0.5, 4)
    out = extract_expander(G, p)
    assert isinstance(out, ExpanderCertificate)
    assert out.vertices.members == (0, 1, 2, 3, 4)
    assert out.lambda_achieved == pytest.approx(1.25, rel=1e-12)
    assert [s.action for s in out.trace] == ["isolated", "certify"]
    assert verify_outcome(G, p, out).ok


def test_clique_path_degree_cap():
    # the bridge gives the clique endpoint degree 25, above a cap of 24
    G = clique_path(25, 475)
    assert G.m == 775 and Fraction(G.m, G.n) == Fraction(31, 20)
    with pytest.raises(PreconditionDegree):
        extract_expander(G, ExtractionParams(1.5, 1.2, 0.1, 24))
    p = ExtractionParams(1.5, 1.2, 0.1, 25)
    out = extract_expander(G, p)
    assert verify_outcome(G, p, out).ok


def test_clique_beside_path_gives_witness():
    G = clique_path(25, 475, bridge=False)
    p = ExtractionParams(1.5, 1.2, 0.1, 24)
    out = extract_expander(G, p)
    assert isinstance(out, DenseWitness)
    assert out.w.members == tuple(range(25)) and out.spanned_edges == 300
    assert verify_outcome(G, p, out).ok


def test_grid_either_branch():
    G = grid_graph(20, 20)
    assert Fraction(G.m, G.n) == Fraction(19, 10)
    p = ExtractionParams(1.9, 1.5, 0.1, 4)
    out = extract_expander(G, p)
    assert verify_outcome(G, p, out).ok


def test_preconditions():
    with pytest.raises(PreconditionDensity):
        extract_expander(cycle_graph(10), ExtractionParams(1.5, 1.2, 0.1, 4))
    with pytest.raises(PreconditionDegree):
        extract_expander(complete_graph(6), ExtractionParams(2, 1.2, 0.1, 4))


def test_verify_rejects_tampering():
    G = disjoint_union(complete_graph(5), path_graph(20))
    p = ExtractionParams(Fraction(29, 25), Fraction(11, 10), Fraction(1, 4), 4)
    out = extract_expander(G, p)
    assert isinstance(out, DenseWitness) and verify_outcome(G, p, out).ok
    fake = DenseWitness(VertexSet.of(range(5, 11)), out.spanned_edges, out.trace)
    assert not verify_outcome(G, p, fake).ok
    fake = ExpanderCertificate(VertexSet.of(range(0, 10)), 1.0, 0.1, ())
    assert not verify_outcome(G, p, fake).ok


def _trace_ok(G, p, out):
    th = derive_thresholds(p)
    keeps = 0
    sizes = []
    for s in out.trace:
        sizes.append(s.size)
        if s.size > p.alpha * G.n:
            assert s.keep_steps <= th.shrink_steps_ceil
            assert s.edges / s.size >= float(p.c1) - s.keep_steps * th.peel_slack - 1e-9
        assert s.keep_steps >= keeps
        keeps = s.keep_steps
    assert all(a > b for a, b in zip(sizes, sizes[1:]))
    assert len(out.trace) <= G.n


@pytest.mark.parametrize("k, length, bridge", [(6, 30, False), (8, 40, False), (10, 12, True),
                                              (7, 60, False), (12, 100, True)])
def test_trace_invariants(k, length, bridge):
    G = clique_path(k, length, bridge)
    c1 = Fraction(int(100 * Fraction(G.m, G.n)), 100)
    p = ExtractionParams(c1, 1 + (c1 - 1) / 2, Fraction(1, 5), G.max_degree)
    out = extract_expander(G, p)
    assert verify_outcome(G, p, out).ok
    _trace_ok(G, p, out)


def test_oracle_k6():
    G = complete_graph(6)
    p = ExtractionParams(2, 1.5, 0.5, 5)
    r = existential_oracle(G, p)
    # the smallest induced subgraph of density >= 2 is K5
    assert len(r.subgraph) == 5
    assert r.gamma_verified == Fraction(3, 2) >= derive_thresholds(p).gamma_existential


def test_oracle_two_k4_bridge():
    G = build_graph(8, [(u, v) for u in range(4) for v in range(u + 1, 4)]
                    + [(u, v) for u in range(4, 8) for v in range(u + 1, 8)] + [(3, 4)])
    assert G.m == 13
    p = ExtractionParams(1.5, 1.3, 0.25, 4)
    r = existential_oracle(G, p)
    assert len(r.subgraph) >= 2 and r.gamma_verified >= Fraction(1, 40)
    H, _ = induced_subgraph(G, r.subgraph)
    assert vertex_expansion_exact(H).gamma == r.gamma_verified


def test_oracle_errors():
    with pytest.raises(HypothesisViolated):
        existential_oracle(star_graph(5), ExtractionParams(1.5, 1.3, 0.25, 5))
    with pytest.raises(HypothesisViolated) as exc:
        existential_oracle(complete_graph(6), ExtractionParams(2, 1.2, 0.7, 5))
    assert exc.value.witness is not None
    with pytest.raises(TooLarge):
        existential_oracle(cycle_graph(15), ExtractionParams(1.5, 1.3, 0.25, 4))


def test_certify_examples():
    assert certify_spectral_expansion(complete_graph(4)) == pytest.approx(2 / 9, rel=1e-12)
    c8 = certify_spectral_expansion(cycle_graph(8))
    assert c8 == pytest.approx((1 - math.cos(math.pi / 4)) / 4, rel=1e-10)
    assert c8 <= vertex_expansion_exact(cycle_graph(8)).gamma
    assert certify_spectral_expansion(disjoint_union(complete_graph(3), complete_graph(3))) == 0


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=2, max_n=14))
def test_certify_below_exact(G):
    if G.degrees.min() == 0:
        return
    assert certify_spectral_expansion(G) <= float(vertex_expansion_exact(G).gamma) + 1e-12
