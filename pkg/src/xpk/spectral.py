"""Normalized-Laplacian spectral gap, sweep cuts and exact Cheeger constants.

``lambda1`` has two routes. Up to ``DENSE_MAX_N`` vertices it diagonalises the
dense normalized Laplacian; above that it runs Lanczos on the pseudo-inverse
of the Laplacian restricted to the complement of the trivial eigenvector
``sqrt(deg)``. The pseudo-inverse is applied through a sparse factorisation of
the grounded combinatorial Laplacian, which makes the wanted eigenvalue the
dominant one. Disconnected graphs are detected up front: their gap is exactly
zero and a null vector is written down from the components.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from . import _bits
from .errors import IsolatedVertex, NoConvergence, TooLarge, TooSmall
from .graph import Graph, VertexSet, component_labels

log = logging.getLogger(__name__)

DENSE_MAX_N = 64
DEFAULT_TOL = 1e-8
MATVEC_BUDGET = 10_000
RESTARTS = 10
LANCZOS_BLOCK = 60
CHEEGER_MAX_N = 20


@dataclass(frozen=True)
class SpectralResult:
    lambda1: float
    eigvec: np.ndarray
    residual: float
    method: str = "dense"


@dataclass(frozen=True)
class SweepCut:
    cut_set: VertexSet
    edge_boundary: int
    vol_W: int
    conductance: Fraction


def _check_spectral_input(G: Graph):
    if G.n < 2:
        raise TooSmall(f"need at least 2 vertices, got {G.n}")
    iso = np.flatnonzero(G.degrees == 0)
    if iso.size:
        raise IsolatedVertex(int(iso[0]))


def normalized_laplacian(G: Graph, dense: bool = False):
    d = G.degrees.astype(float)
    inv = np.zeros_like(d)
    inv[d > 0] = 1.0 / np.sqrt(d[d > 0])
    e = G.edge_array
    w = -inv[e[:, 0]] * inv[e[:, 1]]
    A = sp.coo_matrix((np.r_[w, w], (np.r_[e[:, 0], e[:, 1]], np.r_[e[:, 1], e[:, 0]])),
                      shape=(G.n, G.n))
    L = (sp.diags((d > 0).astype(float)) + A).tocsr()
    return L.toarray() if dense else L


def _finish(G, L, lam, vec, method):
    s = np.sqrt(G.degrees.astype(float))
    s /= np.linalg.norm(s)
    vec = vec - s * (s @ vec)
    vec /= np.linalg.norm(vec)
    res = float(np.linalg.norm(L @ vec - lam * vec))
    return SpectralResult(float(lam), vec, res, method)


def _disconnected_vector(G: Graph, labels: np.ndarray, k: int) -> np.ndarray:
    """Null vector of L orthogonal to sqrt(deg): +1 on the lightest component."""
    vols = np.bincount(labels, weights=G.degrees, minlength=k)
    light = int(np.argmin(vols))
    on = labels == light
    total = float(G.degrees.sum())
    y = np.where(on, 1.0, -vols[light] / (total - vols[light]))
    return np.sqrt(G.degrees) * y


def _dense(G: Graph):
    L = normalized_laplacian(G, dense=True)
    w, V = np.linalg.eigh(L)
    return _finish(G, L, max(w[1], 0.0), V[:, 1], "dense")


class _PseudoInverse:
    """x -> L^+ x on the complement of sqrt(deg), via a grounded Laplacian solve."""

    def __init__(self, G: Graph):
        d = G.degrees.astype(float)
        e = G.edge_array
        K = sp.coo_matrix((np.r_[-np.ones(len(e)), -np.ones(len(e))],
                           (np.r_[e[:, 0], e[:, 1]], np.r_[e[:, 1], e[:, 0]])),
                          shape=(G.n, G.n)).tocsr() + sp.diags(d)
        self.root = int(np.argmax(d))
        keep = np.ones(G.n, dtype=bool)
        keep[self.root] = False
        self.keep = keep
        self.lu = splu(K[keep][:, keep].tocsc())
        self.sqrt_d = np.sqrt(d)
        self.s = self.sqrt_d / np.linalg.norm(self.sqrt_d)

    def project(self, x):
        return x - self.s * (self.s @ x)

    def __call__(self, b):
        c = self.sqrt_d * b
        y = np.zeros_like(b)
        y[self.keep] = self.lu.solve(c[self.keep])
        return self.project(self.sqrt_d * y)


def _iterative(G: Graph, tol: float, budget: int, restarts: int):
    L = normalized_laplacian(G)
    op = _PseudoInverse(G)
    rng = np.random.default_rng(0x5EED)
    v0 = op.project(rng.standard_normal(G.n))
    best = None
    matvecs_total = 0
    for attempt in range(restarts):
        k_max = min(LANCZOS_BLOCK, G.n - 1, budget)
        Q = np.zeros((G.n, k_max))
        alpha = np.zeros(k_max)
        beta = np.zeros(k_max)
        q = v0 / np.linalg.norm(v0)
        k = 0
        for j in range(k_max):
            Q[:, j] = q
            w = op(q)
            matvecs_total += 1
            alpha[j] = q @ w
            w -= Q[:, : j + 1] @ (Q[:, : j + 1].T @ w)
            w -= Q[:, : j + 1] @ (Q[:, : j + 1].T @ w)
            beta[j] = np.linalg.norm(w)
            k = j + 1
            if beta[j] < 1e-14 * max(1.0, abs(alpha[j])):
                break
            q = w / beta[j]
            if k >= 8 and k % 4 == 0:
                T = np.diag(alpha[:k]) + np.diag(beta[: k - 1], 1) + np.diag(beta[: k - 1], -1)
                th, Y = np.linalg.eigh(T)
                # ||L r - r/theta|| <= 2 ||r_inverse|| / theta
                if abs(beta[k - 1] * Y[-1, -1]) <= 0.05 * tol * th[-1]:
                    break
        T = np.diag(alpha[:k]) + np.diag(beta[: k - 1], 1) + np.diag(beta[: k - 1], -1)
        theta, Y = np.linalg.eigh(T)
        vec = Q[:, :k] @ Y[:, -1]
        vec = op.project(vec)
        vec /= np.linalg.norm(vec)
        lam = float(vec @ (L @ vec))
        res = _finish(G, L, max(lam, 0.0), vec, "lanczos")
        if best is None or res.residual < best.residual:
            best = res
        log.debug("lanczos restart %d: k=%d lambda=%.17g residual=%.3e", attempt, k, lam, res.residual)
        if res.residual <= 2.0 * tol:
            return res
        v0 = vec
    raise NoConvergence(f"lambda1 did not converge after {matvecs_total} solves", best.residual)


def lambda1(G: Graph, tol: float = DEFAULT_TOL, *, method: str = "auto",
            budget: int = MATVEC_BUDGET, restarts: int = RESTARTS) -> SpectralResult:
    """Second-smallest eigenvalue of the normalized Laplacian and its eigenvector.

    ``tol`` bounds the residual ``||L v - lambda v||`` relative to ``||L|| <= 2``.
    ``method`` is ``"auto"``, ``"dense"`` or ``"lanczos"``.
    """
    _check_spectral_input(G)
    k, labels = component_labels(G)
    if k > 1:
        L = normalized_laplacian(G)
        return _finish(G, L, 0.0, _disconnected_vector(G, labels, k), "components")
    if method == "dense" or (method == "auto" and G.n <= DENSE_MAX_N):
        return _dense(G)
    if method not in ("auto", "lanczos"):
        raise ValueError(f"unknown method {method!r}")
    return _iterative(G, tol, budget, restarts)


def sweep_cut(G: Graph, spec: SpectralResult) -> SweepCut:
    """Best prefix cut along ``eigvec / sqrt(deg)``.

    Keys are ordered ascending with ties by vertex id. Among the ``n - 1``
    prefix cuts the one of least conductance wins, ties going to the smaller
    oriented volume and then to the shorter prefix. The returned side always
    has at most half of the total volume.
    """
    _check_spectral_input(G)
    n = G.n
    deg = G.degrees.astype(np.int64)
    key = spec.eigvec / np.sqrt(deg)
    order = np.lexsort((np.arange(n), key))
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    e = G.edge_array
    lo = np.minimum(pos[e[:, 0]], pos[e[:, 1]])
    hi = np.maximum(pos[e[:, 0]], pos[e[:, 1]])
    # edge crosses prefix of length k iff lo < k <= hi
    diff = np.zeros(n + 1, dtype=np.int64)
    np.add.at(diff, lo + 1, 1)
    np.add.at(diff, hi + 1, -1)
    bnd = np.cumsum(diff)[1:n]
    vol = np.cumsum(deg[order])[: n - 1]
    total = int(deg.sum())
    side = np.minimum(vol, total - vol)
    ratio = bnd / side
    best_f = ratio.min()
    cand = np.flatnonzero(ratio <= best_f * (1 + 1e-12) + 1e-300)
    best = min(cand.tolist(), key=lambda i: (Fraction(int(bnd[i]), int(side[i])), int(side[i]), i))
    k = best + 1
    prefix = order[:k]
    if 2 * int(vol[best]) <= total:
        W = np.sort(prefix)
        vol_w = int(vol[best])
    else:
        W = np.sort(order[k:])
        vol_w = total - int(vol[best])
    return SweepCut(VertexSet.of(W), int(bnd[best]), vol_w, Fraction(int(bnd[best]), vol_w))


@dataclass(frozen=True)
class CheegerResult:
    h: Fraction
    witness: VertexSet


def cheeger_exact(G: Graph) -> CheegerResult:
    """Exact Cheeger constant by enumerating every proper nonempty subset.

    A disconnected graph gets ``h = 0`` with its lightest component as witness
    (ties by smallest vertex id) instead of an exception.
    """
    if G.n > CHEEGER_MAX_N:
        raise TooLarge(f"cheeger_exact enumerates 2^n subsets; n={G.n} > {CHEEGER_MAX_N}")
    if G.n < 2:
        raise TooSmall("need at least 2 vertices")
    k, labels = component_labels(G)
    if k > 1:
        vols = np.bincount(labels, weights=G.degrees, minlength=k)
        c = int(np.argmin(vols))
        return CheegerResult(Fraction(0), VertexSet.of(np.flatnonzero(labels == c)))
    n = G.n
    full = (1 << n) - 1
    vol = _bits.volume(G)[1:full]
    bnd = _bits.boundary(G)[1:full]
    ms = _bits.masks(n)[1:full]
    total = int(G.degrees.sum())
    side = np.minimum(vol, total - vol)
    ratio = bnd / side
    best_f = ratio.min()
    cand = np.flatnonzero(ratio <= best_f * (1 + 1e-12))
    fr = [Fraction(int(bnd[i]), int(side[i])) for i in cand.tolist()]
    h = min(fr)
    hits = np.array([int(ms[i]) for i, f in zip(cand.tolist(), fr)
                     if f == h and 2 * int(vol[i]) <= total], dtype=np.int64)
    witness = _bits.first_by_size_then_lex(hits, n)
    return CheegerResult(h, VertexSet.from_mask(witness))
