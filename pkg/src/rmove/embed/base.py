"""Shared machinery for graph embedders.

Graph embedding widths obey d <= |V|/2 once a graph has at least four
nodes; the requested width is clamped down (preserving any divisibility
a technique needs for concatenated blocks) and both values are recorded
in the result metadata.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from ..errors import RmoveError
from ..graph import MethodDependencyGraph
from ..rng import RandomStream, seeded_rng


@dataclass
class GraphEmbedding:
    technique: str
    dim: int
    nodes: tuple[str, ...]
    vectors: np.ndarray          # (|V|, dim) float64
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.vectors.shape != (len(self.nodes), self.dim):
            raise RmoveError("embedding shape does not match node count and dim")
        if self.vectors.size and not np.all(np.isfinite(self.vectors)):
            raise RmoveError(f"{self.technique}: non-finite embedding values")
        if len(self.nodes) >= 4 and self.dim > len(self.nodes) // 2:
            raise RmoveError(
                f"{self.technique}: dim {self.dim} too large for {len(self.nodes)} nodes"
            )

    def as_mapping(self) -> dict[str, np.ndarray]:
        return {node: self.vectors[i] for i, node in enumerate(self.nodes)}


@dataclass
class CodeEmbedding:
    encoder: str
    dim: int
    ids: tuple[str, ...]
    vectors: np.ndarray          # (n_methods, dim) float64
    flags: dict = field(default_factory=dict)   # method id -> reason
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.vectors.shape != (len(self.ids), self.dim):
            raise RmoveError("code embedding shape mismatch")
        if self.vectors.size and not np.all(np.isfinite(self.vectors)):
            raise RmoveError(f"{self.encoder}: non-finite embedding values")

    def as_mapping(self) -> dict[str, np.ndarray]:
        return {method_id: self.vectors[i] for i, method_id in enumerate(self.ids)}


def effective_graph_dim(requested: int, n_nodes: int, unit: int = 1) -> int:
    """Clamp a requested width to the d <= |V|/2 rule, in steps of `unit`."""
    if requested % unit:
        raise RmoveError(f"dim {requested} not divisible into {unit} blocks")
    if n_nodes < 4:
        return requested
    clamped = min(requested, n_nodes // 2)
    clamped = (clamped // unit) * unit
    if clamped <= 0:
        raise RmoveError(
            f"graph with {n_nodes} nodes cannot fit {unit} embedding blocks "
            f"of at least one dimension each; reduce the block count"
        )
    return clamped


class GraphEmbedderBase(BaseEstimator):
    """fit(graph) computes `embedding_`, `nodes_`, and `meta_`."""

    technique = "base"

    def _rng(self, rng: RandomStream | None) -> RandomStream:
        if rng is not None:
            return rng
        seed = getattr(self, "seed", None)
        return seeded_rng(0 if seed is None else seed).split(self.technique)

    def fit(self, graph: MethodDependencyGraph, rng: RandomStream | None = None):
        raise NotImplementedError

    def fit_embedding(self, graph: MethodDependencyGraph,
                      rng: RandomStream | None = None) -> GraphEmbedding:
        self.fit(graph, rng=rng)
        return GraphEmbedding(
            technique=self.technique,
            dim=self.embedding_.shape[1],
            nodes=graph.nodes,
            vectors=self.embedding_,
            params=dict(self.meta_),
        )
