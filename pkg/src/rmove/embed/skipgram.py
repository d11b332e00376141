"""Skip-gram with negative sampling, trained by mini-batch SGD.

Input-side vectors are the embedding.  Negatives are drawn from the
walk-corpus unigram distribution raised to 3/4.  The learning rate
decays linearly to 1e-4 of its initial value over all updates, and a 5%
held-out slice of the (center, context) pairs is scored with fixed
negatives after the first and last epochs so training progress is
observable.
"""

from __future__ import annotations

import numpy as np

from ..errors import EmptyWalkCorpus
from ..rng import RandomStream
from .walks import WalkCorpus

LR_FLOOR_FRACTION = 1e-4
HELDOUT_FRACTION = 0.05


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.clip(x, -60.0, 60.0)))


def window_pairs(corpus: WalkCorpus, window: int) -> np.ndarray:
    """(center, context) pairs from a sliding window over every walk."""
    pairs = []
    for walk in corpus.walks:
        length = len(walk)
        for i in range(length):
            lo = max(0, i - window)
            hi = min(length, i + window + 1)
            for j in range(lo, hi):
                if j != i:
                    pairs.append((walk[i], walk[j]))
    if not pairs:
        return np.empty((0, 2), dtype=np.int64)
    return np.asarray(pairs, dtype=np.int64)


def sg_batch_loss_and_grads(w_in, w_out, centers, contexts, negatives):
    """Total negative-sampling loss of a batch and its parameter gradients.

    Returns (loss, grad_in, grad_out) where the gradient arrays have the
    same shape as the parameter matrices (dense, for checkability).
    """
    h = w_in[centers]                       # (B, d)
    u_pos = w_out[contexts]                 # (B, d)
    u_neg = w_out[negatives]                # (B, K, d)

    pos_score = np.einsum("bd,bd->b", h, u_pos)
    neg_score = np.einsum("bd,bkd->bk", h, u_neg)
    pos_sig = _sigmoid(pos_score)
    neg_sig = _sigmoid(neg_score)

    tiny = 1e-12
    loss = -np.sum(np.log(pos_sig + tiny)) - np.sum(np.log(1.0 - neg_sig + tiny))

    g_pos = pos_sig - 1.0                   # (B,)
    g_neg = neg_sig                         # (B, K)

    grad_h = g_pos[:, None] * u_pos + np.einsum("bk,bkd->bd", g_neg, u_neg)
    grad_in = np.zeros_like(w_in)
    np.add.at(grad_in, centers, grad_h)

    grad_out = np.zeros_like(w_out)
    np.add.at(grad_out, contexts, g_pos[:, None] * h)
    np.add.at(grad_out, negatives.reshape(-1),
              (g_neg[:, :, None] * h[:, None, :]).reshape(-1, h.shape[1]))
    return loss, grad_in, grad_out


def _negative_distribution(corpus: WalkCorpus) -> np.ndarray:
    counts = corpus.node_frequencies().astype(np.float64)
    weights = counts ** 0.75
    total = weights.sum()
    if total == 0:
        weights = np.ones_like(weights)
        total = weights.sum()
    return np.cumsum(weights / total)


def _draw(cumulative: np.ndarray, rng: RandomStream, size) -> np.ndarray:
    return np.searchsorted(cumulative, rng.random(size), side="right").astype(np.int64)


def skipgram_train(
    corpus: WalkCorpus,
    dim: int,
    window: int,
    negatives: int,
    epochs: int,
    lr: float,
    rng: RandomStream,
    batch: int = 1024,
) -> tuple[np.ndarray, dict]:
    """Train on a walk corpus; returns (input vectors, training metadata)."""
    if window < 1 or negatives < 1:
        raise ValueError("window and negatives must be >= 1")
    if not corpus.walks:
        raise EmptyWalkCorpus("no walks to train on")
    n = corpus.n_nodes
    w_in = (rng.random((n, dim)) - 0.5) / dim
    w_out = np.zeros((n, dim))

    pairs = window_pairs(corpus, window)
    meta = {"pairs": int(len(pairs)), "heldout_loss_first": None,
            "heldout_loss_last": None}
    if len(pairs) == 0:
        # nodes exist but never co-occur: vectors stay at initialization
        return w_in, meta

    order = rng.permutation(len(pairs))
    pairs = pairs[order]
    heldout = int(len(pairs) * HELDOUT_FRACTION)
    eval_pairs, train_pairs = pairs[:heldout], pairs[heldout:]
    if len(train_pairs) == 0:
        train_pairs, eval_pairs = pairs, pairs
    if len(eval_pairs) == 0:
        eval_pairs = train_pairs

    cumulative = _negative_distribution(corpus)
    eval_negatives = _draw(cumulative, rng, (len(eval_pairs), negatives))

    def eval_loss():
        loss, _, _ = sg_batch_loss_and_grads(
            w_in, w_out, eval_pairs[:, 0], eval_pairs[:, 1], eval_negatives)
        return loss / len(eval_pairs)

    total_updates = max(1, epochs * ((len(train_pairs) + batch - 1) // batch))
    update = 0
    for epoch in range(epochs):
        epoch_order = rng.permutation(len(train_pairs))
        for lo in range(0, len(train_pairs), batch):
            chunk = train_pairs[epoch_order[lo:lo + batch]]
            negs = _draw(cumulative, rng, (len(chunk), negatives))
            _, grad_in, grad_out = sg_batch_loss_and_grads(
                w_in, w_out, chunk[:, 0], chunk[:, 1], negs)
            step = lr * (1.0 - (update / total_updates) * (1.0 - LR_FLOOR_FRACTION))
            w_in -= (step / len(chunk)) * grad_in
            w_out -= (step / len(chunk)) * grad_out
            update += 1
        if epoch == 0:
            meta["heldout_loss_first"] = float(eval_loss())
    meta["heldout_loss_last"] = float(eval_loss())
    return w_in, meta
