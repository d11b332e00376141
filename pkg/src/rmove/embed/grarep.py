"""GraRep: truncated SVD of log-shifted k-step transition matrices.

For each step s the row-normalized transition matrix A^s is shifted by
log(x / beta) with beta = 1/|V| (negatives clamped to zero) and
factorized; the per-step factors U * sqrt(S) concatenate into the final
embedding.  Rows with no neighbors transition uniformly to all nodes.
"""

from __future__ import annotations

import numpy as np

from ..errors import DimNotDivisibleByKstep
from ..graph import MethodDependencyGraph, undirected_view
from ..rng import RandomStream
from .base import GraphEmbedderBase, effective_graph_dim


def transition_matrix(graph: MethodDependencyGraph) -> np.ndarray:
    n = graph.node_count
    matrix = np.zeros((n, n))
    for i, neighbors in enumerate(undirected_view(graph)):
        if neighbors:
            matrix[i, neighbors] = 1.0 / len(neighbors)
        else:
            matrix[i, :] = 1.0 / n
    return matrix


def log_shifted(step_matrix: np.ndarray, n_nodes: int) -> np.ndarray:
    with np.errstate(divide="ignore"):
        shifted = np.log(step_matrix * n_nodes)
    shifted[~np.isfinite(shifted)] = 0.0
    return np.maximum(shifted, 0.0)


def svd_factor(matrix: np.ndarray, rank: int) -> np.ndarray:
    """Rank-r factor U_r * sqrt(S_r), zero-padded when rank exceeds |V|."""
    n = matrix.shape[0]
    u, s, _ = np.linalg.svd(matrix, full_matrices=False)
    keep = min(rank, n)
    factor = np.zeros((n, rank))
    factor[:, :keep] = u[:, :keep] * np.sqrt(s[:keep])
    return factor


class GraRep(GraphEmbedderBase):
    technique = "grarep"

    def __init__(self, dim=128, kstep=4, seed=None):
        self.dim = dim
        self.kstep = kstep
        self.seed = seed

    def fit(self, graph: MethodDependencyGraph, rng: RandomStream | None = None):
        if self.kstep < 1:
            raise ValueError("kstep must be >= 1")
        if self.dim % self.kstep:
            raise DimNotDivisibleByKstep(
                f"dim {self.dim} not divisible by kstep {self.kstep}")
        dim = effective_graph_dim(self.dim, graph.node_count, unit=self.kstep)
        per_step = dim // self.kstep
        n = graph.node_count
        if n == 0:
            self.embedding_ = np.zeros((0, dim))
        else:
            transition = transition_matrix(graph)
            power = np.eye(n)
            blocks = []
            for _ in range(self.kstep):
                power = power @ transition
                blocks.append(svd_factor(log_shifted(power, n), per_step))
            self.embedding_ = np.hstack(blocks)
        self.nodes_ = graph.nodes
        self.meta_ = {
            "technique": self.technique,
            "requested_dim": self.dim, "dim": dim,
            "kstep": self.kstep, "per_step_dim": per_step,
        }
        return self
