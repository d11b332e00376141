"""Walk-based embedders: DeepWalk, Node2Vec, and multi-scale Walklets."""

from __future__ import annotations

import numpy as np

from ..errors import DimNotDivisibleByScales
from ..graph import MethodDependencyGraph
from ..rng import RandomStream
from .base import GraphEmbedderBase, effective_graph_dim
from .skipgram import skipgram_train
from .walks import sample_walks, skip_corpus


class DeepWalk(GraphEmbedderBase):
    technique = "deepwalk"

    def __init__(self, dim=128, num_walks=10, walk_length=80, window=10,
                 negatives=5, epochs=5, lr=0.025, batch=1024, seed=None):
        self.dim = dim
        self.num_walks = num_walks
        self.walk_length = walk_length
        self.window = window
        self.negatives = negatives
        self.epochs = epochs
        self.lr = lr
        self.batch = batch
        self.seed = seed

    def _walk_params(self) -> tuple[float, float]:
        return 1.0, 1.0

    def fit(self, graph: MethodDependencyGraph, rng: RandomStream | None = None):
        rng = self._rng(rng)
        dim = effective_graph_dim(self.dim, graph.node_count)
        if graph.node_count == 0:
            self.embedding_ = np.zeros((0, dim))
            self.meta_ = {"technique": self.technique, "requested_dim": self.dim,
                          "dim": dim}
            self.nodes_ = graph.nodes
            return self
        p, q = self._walk_params()
        corpus = sample_walks(graph, self.walk_length, self.num_walks,
                              p=p, q=q, rng=rng.split("walks"))
        vectors, train_meta = skipgram_train(
            corpus, dim, self.window, self.negatives, self.epochs,
            self.lr, rng.split("train"), batch=self.batch)
        self.embedding_ = vectors
        self.nodes_ = graph.nodes
        self.meta_ = {
            "technique": self.technique,
            "requested_dim": self.dim, "dim": dim,
            "num_walks": self.num_walks, "walk_length": self.walk_length,
            "window": self.window, "negatives": self.negatives,
            "epochs": self.epochs, "lr": self.lr,
            "p": p, "q": q,
            **train_meta,
        }
        return self


class Node2Vec(DeepWalk):
    technique = "node2vec"

    def __init__(self, dim=128, p=0.25, q=0.25, num_walks=10, walk_length=80,
                 window=10, negatives=5, epochs=5, lr=0.025, batch=1024, seed=None):
        super().__init__(dim=dim, num_walks=num_walks, walk_length=walk_length,
                         window=window, negatives=negatives, epochs=epochs,
                         lr=lr, batch=batch, seed=seed)
        self.p = p
        self.q = q

    def _walk_params(self) -> tuple[float, float]:
        return self.p, self.q


class Walklets(GraphEmbedderBase):
    """Skip-gram over scale-k subsampled walks, one block per scale.

    Each scale trains with a window of 1, so a block captures exactly
    distance-k co-occurrence; blocks concatenate to the full width.
    """

    technique = "walklets"

    def __init__(self, dim=130, scales=5, num_walks=5, walk_length=80,
                 negatives=5, epochs=5, lr=0.025, batch=1024, seed=None):
        self.dim = dim
        self.scales = scales
        self.num_walks = num_walks
        self.walk_length = walk_length
        self.negatives = negatives
        self.epochs = epochs
        self.lr = lr
        self.batch = batch
        self.seed = seed

    def fit(self, graph: MethodDependencyGraph, rng: RandomStream | None = None):
        rng = self._rng(rng)
        if self.dim % self.scales:
            raise DimNotDivisibleByScales(
                f"dim {self.dim} not divisible by {self.scales} scales")
        dim = effective_graph_dim(self.dim, graph.node_count, unit=self.scales)
        per_scale = dim // self.scales
        if graph.node_count == 0:
            self.embedding_ = np.zeros((0, dim))
            self.nodes_ = graph.nodes
            self.meta_ = {"technique": self.technique, "requested_dim": self.dim,
                          "dim": dim}
            return self
        corpus = sample_walks(graph, self.walk_length, self.num_walks,
                              rng=rng.split("walks"))
        blocks = []
        scale_meta = {}
        for scale in range(1, self.scales + 1):
            scaled = skip_corpus(corpus, scale)
            vectors, train_meta = skipgram_train(
                scaled, per_scale, 1, self.negatives, self.epochs,
                self.lr, rng.split(f"scale-{scale}"), batch=self.batch)
            blocks.append(vectors)
            scale_meta[f"scale_{scale}_pairs"] = train_meta["pairs"]
        self.embedding_ = np.hstack(blocks)
        self.nodes_ = graph.nodes
        self.meta_ = {
            "technique": self.technique,
            "requested_dim": self.dim, "dim": dim,
            "scales": self.scales, "per_scale_dim": per_scale,
            "num_walks": self.num_walks, "walk_length": self.walk_length,
            "negatives": self.negatives, "epochs": self.epochs, "lr": self.lr,
            **scale_meta,
        }
        return self
