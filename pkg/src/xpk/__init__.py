"""Certified induced expanders in locally sparse graphs.

Graph primitives, spectral tools, the expander extraction loop and its
verifiers, random-graph experiments, clique minors and biased positional
games on the edges of K_n.
"""

__version__ = "0.1.0"

from .graph import (
    Graph,
    SubsetStats,
    VertexSet,
    build_graph,
    connected_components,
    induced_subgraph,
    subset_stats,
    trim_high_degree,
)
from .spectral import SpectralResult, SweepCut, cheeger_exact, lambda1, sweep_cut
from .extraction import (
    DenseWitness,
    ExpanderCertificate,
    ExtractionParams,
    certify_spectral_expansion,
    derive_thresholds,
    existential_oracle,
    extract_expander,
    verify_outcome,
)
from .expansion import min_separator_exact, separator_lower_bound, vertex_expansion_exact
from .sparsity import SparsityVerdict, Status, local_sparsity_verdict, touch_bound_verdict
