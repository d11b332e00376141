"""SDNE: a sigmoid autoencoder over adjacency rows.

The reconstruction loss weights non-zero adjacency entries by ``beta``
(so observed edges dominate the many zeros), a first-order Laplacian
penalty weighted by ``alpha`` pulls connected nodes together in the
bottleneck, and nu1/nu2 add L1/L2 weight regularization.  The encoder
is fixed at [|V| -> 256 -> dim] with a mirrored decoder.
"""

from __future__ import annotations

import numpy as np

from ..graph import MethodDependencyGraph, undirected_view
from ..rng import RandomStream
from .base import GraphEmbedderBase, effective_graph_dim
from .skipgram import LR_FLOOR_FRACTION, _sigmoid

HIDDEN = 256
_WEIGHT_KEYS = ("w1", "w2", "w3", "w4")


def init_params(n: int, dim: int, rng: RandomStream, hidden: int = HIDDEN) -> dict:
    def glorot(fan_in, fan_out):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        return (rng.random((fan_in, fan_out)) * 2.0 - 1.0) * bound

    return {
        "w1": glorot(n, hidden), "b1": np.zeros(hidden),
        "w2": glorot(hidden, dim), "b2": np.zeros(dim),
        "w3": glorot(dim, hidden), "b3": np.zeros(hidden),
        "w4": glorot(hidden, n), "b4": np.zeros(n),
    }


def encode(params: dict, x: np.ndarray) -> np.ndarray:
    a1 = _sigmoid(x @ params["w1"] + params["b1"])
    return _sigmoid(a1 @ params["w2"] + params["b2"])


def weighted_reconstruction(x: np.ndarray, reconstruction: np.ndarray,
                            beta: float) -> tuple[float, np.ndarray]:
    """Squared error weighted `beta` on non-zero entries, and its gradient."""
    weight = 1.0 + (beta - 1.0) * (x != 0)
    residual = reconstruction - x
    return float(np.sum(weight * residual**2)), 2.0 * weight * residual


def laplacian_penalty(bottleneck: np.ndarray, adjacency: np.ndarray,
                      alpha: float) -> tuple[float, np.ndarray]:
    """alpha * sum over ordered pairs of a_ij ||y_i - y_j||^2, and d/dY."""
    degree = adjacency.sum(axis=1)
    laplacian = np.diag(degree) - adjacency
    loss = float(2.0 * alpha * np.trace(bottleneck.T @ laplacian @ bottleneck))
    return loss, 4.0 * alpha * (laplacian @ bottleneck)


def sdne_loss_and_grads(params: dict, x: np.ndarray, adjacency: np.ndarray,
                        beta: float, alpha: float, nu1: float, nu2: float):
    """Batch loss (reconstruction + Laplacian + regularization) and grads.

    `x` holds the batch rows of the full adjacency matrix; `adjacency`
    is the within-batch symmetric adjacency used for the Laplacian term.
    """
    a1 = _sigmoid(x @ params["w1"] + params["b1"])
    bottleneck = _sigmoid(a1 @ params["w2"] + params["b2"])
    a3 = _sigmoid(bottleneck @ params["w3"] + params["b3"])
    reconstruction = _sigmoid(a3 @ params["w4"] + params["b4"])

    loss_recon, d_reconstruction = weighted_reconstruction(x, reconstruction, beta)
    loss_lap, d_bottleneck_lap = laplacian_penalty(bottleneck, adjacency, alpha)

    loss_reg = 0.0
    for key in _WEIGHT_KEYS:
        loss_reg += nu1 * np.abs(params[key]).sum() + nu2 * (params[key] ** 2).sum()
    loss = loss_recon + loss_lap + loss_reg

    delta4 = d_reconstruction * reconstruction * (1.0 - reconstruction)
    grads = {
        "w4": a3.T @ delta4 + nu1 * np.sign(params["w4"]) + 2 * nu2 * params["w4"],
        "b4": delta4.sum(axis=0),
    }
    delta3 = (delta4 @ params["w4"].T) * a3 * (1.0 - a3)
    grads["w3"] = bottleneck.T @ delta3 + nu1 * np.sign(params["w3"]) + 2 * nu2 * params["w3"]
    grads["b3"] = delta3.sum(axis=0)

    d_bottleneck = delta3 @ params["w3"].T + d_bottleneck_lap
    delta2 = d_bottleneck * bottleneck * (1.0 - bottleneck)
    grads["w2"] = a1.T @ delta2 + nu1 * np.sign(params["w2"]) + 2 * nu2 * params["w2"]
    grads["b2"] = delta2.sum(axis=0)

    delta1 = (delta2 @ params["w2"].T) * a1 * (1.0 - a1)
    grads["w1"] = x.T @ delta1 + nu1 * np.sign(params["w1"]) + 2 * nu2 * params["w1"]
    grads["b1"] = delta1.sum(axis=0)
    return loss, grads


class Sdne(GraphEmbedderBase):
    technique = "sdne"

    def __init__(self, dim=128, alpha=1e-6, beta=5.0, nu1=1e-5, nu2=1e-4,
                 batch=200, epochs=100, lr=0.01, hidden=HIDDEN, seed=None):
        self.dim = dim
        self.alpha = alpha
        self.beta = beta
        self.nu1 = nu1
        self.nu2 = nu2
        self.batch = batch
        self.epochs = epochs
        self.lr = lr
        self.hidden = hidden
        self.seed = seed

    def fit(self, graph: MethodDependencyGraph, rng: RandomStream | None = None):
        rng = self._rng(rng)
        dim = effective_graph_dim(self.dim, graph.node_count)
        n = graph.node_count
        self.nodes_ = graph.nodes
        self.meta_ = {
            "technique": self.technique,
            "requested_dim": self.dim, "dim": dim,
            "alpha": self.alpha, "beta": self.beta,
            "nu1": self.nu1, "nu2": self.nu2,
            "batch": self.batch, "epochs": self.epochs, "lr": self.lr,
            "hidden": self.hidden,
        }
        if n == 0:
            self.embedding_ = np.zeros((0, dim))
            return self

        full = np.zeros((n, n))
        for i, neighbors in enumerate(undirected_view(graph)):
            full[i, neighbors] = 1.0
        params = init_params(n, dim, rng.split("init"), hidden=self.hidden)

        batches_per_epoch = max(1, (n + self.batch - 1) // self.batch)
        total_updates = max(1, self.epochs * batches_per_epoch)
        update = 0
        first_epoch_loss = None
        epoch_loss = 0.0
        for epoch in range(self.epochs):
            order = rng.split(f"epoch-{epoch}").permutation(n)
            epoch_loss = 0.0
            for lo in range(0, n, self.batch):
                idx = order[lo:lo + self.batch]
                x = full[idx]
                sub_adj = full[np.ix_(idx, idx)]
                loss, grads = sdne_loss_and_grads(
                    params, x, sub_adj, self.beta, self.alpha, self.nu1, self.nu2)
                step = self.lr * (1.0 - (update / total_updates)
                                  * (1.0 - LR_FLOOR_FRACTION)) / len(idx)
                for key, grad in grads.items():
                    params[key] -= step * grad
                update += 1
                epoch_loss += loss
            if epoch == 0:
                first_epoch_loss = epoch_loss
        self.embedding_ = encode(params, full)
        self.meta_["epoch_loss_first"] = float(first_epoch_loss)
        self.meta_["epoch_loss_last"] = float(epoch_loss)
        return self
