"""LINE: first- and second-order proximity embeddings on the directed graph.

Both objectives are negative-sampling approximations of the KL-derived
originals: for a directed edge (i, j) the first-order score is
sigma(u_i . u_j) on one shared table, the second-order score is
sigma(u_i . c_j) against a separate context table.  Order 3 trains both
at half width and concatenates.  Each epoch shuffles and visits every
edge once; negatives come from the degree^(3/4) distribution.
"""

from __future__ import annotations

import warnings

import numpy as np

from ..graph import MethodDependencyGraph
from ..rng import RandomStream
from .base import GraphEmbedderBase, effective_graph_dim
from .skipgram import LR_FLOOR_FRACTION, _sigmoid

HELDOUT_FRACTION = 0.05
MIN_EDGES_FOR_HELDOUT = 20


def line_batch_loss_and_grads(vertex, context, sources, targets, negatives):
    """Loss and dense gradients for a batch of edges with negatives.

    `context` is None for the first-order objective (shared table).
    """
    second_order = context is not None
    out = context if second_order else vertex
    h = vertex[sources]                    # (B, d)
    u_pos = out[targets]                   # (B, d)
    u_neg = out[negatives]                 # (B, K, d)

    pos_sig = _sigmoid(np.einsum("bd,bd->b", h, u_pos))
    neg_sig = _sigmoid(np.einsum("bd,bkd->bk", h, u_neg))
    tiny = 1e-12
    loss = -np.sum(np.log(pos_sig + tiny)) - np.sum(np.log(1.0 - neg_sig + tiny))

    g_pos = pos_sig - 1.0
    g_neg = neg_sig
    grad_h = g_pos[:, None] * u_pos + np.einsum("bk,bkd->bd", g_neg, u_neg)

    grad_vertex = np.zeros_like(vertex)
    np.add.at(grad_vertex, sources, grad_h)
    grad_out = np.zeros_like(out)
    np.add.at(grad_out, targets, g_pos[:, None] * h)
    np.add.at(grad_out, negatives.reshape(-1),
              (g_neg[:, :, None] * h[:, None, :]).reshape(-1, h.shape[1]))
    if second_order:
        return loss, grad_vertex, grad_out
    return loss, grad_vertex + grad_out, None


def _degree_distribution(graph: MethodDependencyGraph) -> np.ndarray:
    degree = np.zeros(graph.node_count)
    for src, dst in graph.edges:
        degree[src] += 1
        degree[dst] += 1
    weights = degree ** 0.75
    total = weights.sum()
    if total == 0:
        weights = np.ones_like(weights)
        total = weights.sum()
    return np.cumsum(weights / total)


class Line(GraphEmbedderBase):
    technique = "line"

    def __init__(self, dim=128, order=3, negative_ratio=5, epochs=20,
                 lr=0.025, batch=1024, seed=None):
        self.dim = dim
        self.order = order
        self.negative_ratio = negative_ratio
        self.epochs = epochs
        self.lr = lr
        self.batch = batch
        self.seed = seed

    def _train(self, graph, dim, second_order, rng) -> tuple[np.ndarray, dict]:
        n = graph.node_count
        edges = np.asarray(graph.edges, dtype=np.int64)
        vertex = (rng.random((n, dim)) - 0.5) / dim
        context = np.zeros((n, dim)) if second_order else None

        order_idx = rng.permutation(len(edges))
        heldout = (int(len(edges) * HELDOUT_FRACTION)
                   if len(edges) >= MIN_EDGES_FOR_HELDOUT else 0)
        eval_edges = edges[order_idx[:heldout]] if heldout else edges
        train_edges = edges[order_idx[heldout:]] if heldout else edges

        cumulative = _degree_distribution(graph)
        draw = lambda size: np.searchsorted(
            cumulative, rng.random(size), side="right").astype(np.int64)
        eval_negatives = draw((len(eval_edges), self.negative_ratio))

        def eval_loss():
            loss, _, _ = line_batch_loss_and_grads(
                vertex, context, eval_edges[:, 0], eval_edges[:, 1], eval_negatives)
            return loss / len(eval_edges)

        total_updates = max(1, self.epochs * ((len(train_edges) + self.batch - 1)
                                              // self.batch))
        update = 0
        meta = {}
        for epoch in range(self.epochs):
            epoch_order = rng.permutation(len(train_edges))
            for lo in range(0, len(train_edges), self.batch):
                chunk = train_edges[epoch_order[lo:lo + self.batch]]
                negatives = draw((len(chunk), self.negative_ratio))
                _, grad_vertex, grad_context = line_batch_loss_and_grads(
                    vertex, context, chunk[:, 0], chunk[:, 1], negatives)
                step = self.lr * (1.0 - (update / total_updates)
                                  * (1.0 - LR_FLOOR_FRACTION)) / len(chunk)
                vertex -= step * grad_vertex
                if second_order:
                    context -= step * grad_context
                update += 1
            if epoch == 0:
                meta["heldout_loss_first"] = float(eval_loss())
        meta["heldout_loss_last"] = float(eval_loss())
        return vertex, meta

    def fit(self, graph: MethodDependencyGraph, rng: RandomStream | None = None):
        rng = self._rng(rng)
        unit = 2 if self.order == 3 else 1
        dim = effective_graph_dim(self.dim, graph.node_count, unit=unit)
        n = graph.node_count
        self.nodes_ = graph.nodes
        self.meta_ = {
            "technique": self.technique,
            "requested_dim": self.dim, "dim": dim,
            "order": self.order, "negative_ratio": self.negative_ratio,
            "epochs": self.epochs, "lr": self.lr,
        }
        if n == 0:
            self.embedding_ = np.zeros((0, dim))
            return self
        if not graph.edges:
            warnings.warn("edge-less graph: LINE returns zero vectors",
                          stacklevel=2)
            self.embedding_ = np.zeros((n, dim))
            self.meta_["empty_edge_set"] = True
            return self
        if self.order == 1:
            self.embedding_, meta = self._train(graph, dim, False, rng.split("first"))
        elif self.order == 2:
            self.embedding_, meta = self._train(graph, dim, True, rng.split("second"))
        else:
            first, meta_first = self._train(graph, dim // 2, False, rng.split("first"))
            second, meta_second = self._train(graph, dim // 2, True, rng.split("second"))
            self.embedding_ = np.hstack([first, second])
            meta = {f"first_{k}": v for k, v in meta_first.items()}
            meta.update({f"second_{k}": v for k, v in meta_second.items()})
        self.meta_.update(meta)
        return self
