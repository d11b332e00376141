"""ProNE: randomized factorization init plus Chebyshev spectral propagation.

Stage one factorizes the sparse log-weighted transition matrix with a
seeded randomized truncated SVD.  Stage two sharpens the result with a
Chebyshev expansion of a band-pass Gaussian filter (band center ``mu``,
sharpness ``theta``) over the random-walk Laplacian, using modified
Bessel coefficients.  ``step`` <= 1 skips propagation entirely and
returns the initialization.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.special import iv

from ..graph import MethodDependencyGraph, undirected_view
from ..rng import RandomStream
from .base import GraphEmbedderBase, effective_graph_dim


def sparse_log_transition(graph: MethodDependencyGraph) -> sp.csr_matrix:
    n = graph.node_count
    rows, cols, values = [], [], []
    for i, neighbors in enumerate(undirected_view(graph)):
        if not neighbors:
            continue
        weight = max(0.0, np.log(n / len(neighbors)))
        for j in neighbors:
            rows.append(i)
            cols.append(j)
            values.append(weight)
    return sp.csr_matrix((values, (rows, cols)), shape=(n, n))


def randomized_tsvd(matrix, rank: int, rng: RandomStream,
                    oversample: int = 10, power_iters: int = 5):
    """Seeded Halko-style randomized truncated SVD (U, S)."""
    n = matrix.shape[0]
    sketch = min(rank + oversample, n)
    omega = rng.normal(size=(matrix.shape[1], sketch))
    y = matrix @ omega
    for _ in range(power_iters):
        y, _ = np.linalg.qr(y)
        y = matrix @ (matrix.T @ y)
    q, _ = np.linalg.qr(y)
    small = q.T @ matrix
    if sp.issparse(small):
        small = small.toarray()
    u_small, s, _ = np.linalg.svd(small, full_matrices=False)
    keep = min(rank, s.shape[0])
    u = q @ u_small[:, :keep]
    return u, s[:keep]


def chebyshev_propagate(adjacency: sp.csr_matrix, init: np.ndarray,
                        step: int, theta: float, mu: float) -> np.ndarray:
    n = adjacency.shape[0]
    if step <= 1:
        return init
    augmented = sp.eye(n, format="csr") + adjacency
    row_sums = np.asarray(augmented.sum(axis=1)).ravel()
    inv = sp.diags(1.0 / np.where(row_sums == 0, 1.0, row_sums))
    walk = inv @ augmented
    laplacian = sp.eye(n, format="csr") - walk
    shifted = laplacian - mu * sp.eye(n, format="csr")

    lx0 = init
    lx1 = shifted @ init
    lx1 = 0.5 * (shifted @ lx1) - init
    conv = iv(0, theta) * lx0 - 2 * iv(1, theta) * lx1
    for order in range(2, step):
        lx2 = shifted @ lx1
        lx2 = (shifted @ lx2 - 2 * lx1) - lx0
        if order % 2 == 0:
            conv += 2 * iv(order, theta) * lx2
        else:
            conv -= 2 * iv(order, theta) * lx2
        lx0, lx1 = lx1, lx2
    propagated = augmented @ (init - conv)
    norms = np.linalg.norm(propagated, axis=1, keepdims=True)
    return propagated / np.where(norms == 0, 1.0, norms)


class ProNE(GraphEmbedderBase):
    technique = "prone"

    def __init__(self, dim=128, step=10, theta=0.5, mu=0.2, seed=None):
        self.dim = dim
        self.step = step
        self.theta = theta
        self.mu = mu
        self.seed = seed

    def fit(self, graph: MethodDependencyGraph, rng: RandomStream | None = None):
        rng = self._rng(rng)
        dim = effective_graph_dim(self.dim, graph.node_count)
        n = graph.node_count
        if n == 0:
            self.embedding_ = np.zeros((0, dim))
        else:
            log_transition = sparse_log_transition(graph)
            u, s = randomized_tsvd(log_transition, dim, rng.split("tsvd"))
            init = np.zeros((n, dim))
            init[:, :u.shape[1]] = u * np.sqrt(s)
            if graph.edges:
                src = np.array([s for s, _ in graph.edges]
                               + [d for _, d in graph.edges])
                dst = np.array([d for _, d in graph.edges]
                               + [s for s, _ in graph.edges])
                adjacency = sp.csr_matrix(
                    (np.ones(len(src)), (src, dst)), shape=(n, n))
                adjacency.data[:] = 1.0  # collapse mutual directed pairs
            else:
                adjacency = sp.csr_matrix((n, n))
            self.embedding_ = chebyshev_propagate(
                adjacency, init, self.step, self.theta, self.mu)
        self.nodes_ = graph.nodes
        self.meta_ = {
            "technique": self.technique,
            "requested_dim": self.dim, "dim": dim,
            "step": self.step, "theta": self.theta, "mu": self.mu,
        }
        return self
