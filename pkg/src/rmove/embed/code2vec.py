"""Attention-pooled path-context encoder trained on name prediction.

Each context embeds its two endpoint tokens and the whole path (hashed
to a single symbol), combines them through one tanh layer, and the
per-method attention-weighted average is both the classifier input and
the method vector handed downstream.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from ..paths import PathSet
from ..rng import RandomStream, seeded_rng
from .attention import attention_pool, head_backward, head_forward
from .base import CodeEmbedding
from .skipgram import LR_FLOOR_FRACTION
from .vocab import Vocabulary, target_label

HELDOUT_FRACTION = 0.10


def index_contexts(pathset: PathSet, vocab: Vocabulary):
    """(starts, paths, ends) index arrays for one method."""
    starts = np.array([vocab.token(c.start_token) for c in pathset.contexts],
                      dtype=np.int64)
    paths = np.array([vocab.path(c.path_symbol()) for c in pathset.contexts],
                     dtype=np.int64)
    ends = np.array([vocab.token(c.end_token) for c in pathset.contexts],
                    dtype=np.int64)
    return starts, paths, ends


def init_params(vocab: Vocabulary, token_dim: int, path_dim: int, dim: int,
                rng: RandomStream) -> dict:
    def table(rows, cols):
        return (rng.random((rows, cols)) - 0.5) / cols

    combine_in = 2 * token_dim + path_dim
    bound = np.sqrt(6.0 / (combine_in + dim))
    return {
        "tok": table(vocab.n_tokens, token_dim),
        "pth": table(vocab.n_paths, path_dim),
        "W": (rng.random((combine_in, dim)) * 2.0 - 1.0) * bound,
        "attn": (rng.random(dim) - 0.5) / dim,
        "out": table(vocab.n_targets, dim),
    }


def context_vectors(params: dict, starts, paths, ends):
    embedded = np.hstack([params["tok"][starts], params["pth"][paths],
                          params["tok"][ends]])
    return embedded, np.tanh(embedded @ params["W"])


def encode_method(params: dict, starts, paths, ends):
    """(attention weights, method vector) without touching the head."""
    _, contexts = context_vectors(params, starts, paths, ends)
    return attention_pool(contexts, params["attn"])


def c2v_loss_and_grads(params: dict, starts, paths, ends, target: int):
    """Name-prediction loss for one method and dense parameter gradients."""
    embedded, contexts = context_vectors(params, starts, paths, ends)
    loss, weights, pooled, probs = head_forward(
        contexts, params["attn"], params["out"], target)
    d_contexts, g_attn, g_out = head_backward(
        contexts, params["attn"], params["out"], target, weights, pooled, probs)

    d_raw = d_contexts * (1.0 - contexts**2)
    g_w = embedded.T @ d_raw
    d_embedded = d_raw @ params["W"].T

    token_dim = params["tok"].shape[1]
    path_dim = params["pth"].shape[1]
    g_tok = np.zeros_like(params["tok"])
    g_pth = np.zeros_like(params["pth"])
    np.add.at(g_tok, starts, d_embedded[:, :token_dim])
    np.add.at(g_pth, paths, d_embedded[:, token_dim:token_dim + path_dim])
    np.add.at(g_tok, ends, d_embedded[:, token_dim + path_dim:])
    return loss, {"tok": g_tok, "pth": g_pth, "W": g_w,
                  "attn": g_attn, "out": g_out}


class Code2VecEncoder(BaseEstimator):
    encoder = "code2vec"

    def __init__(self, dim=128, token_dim=128, path_dim=128, epochs=20,
                 batch=1024, lr=0.01, seed=None):
        self.dim = dim
        self.token_dim = token_dim
        self.path_dim = path_dim
        self.epochs = epochs
        self.batch = batch
        self.lr = lr
        self.seed = seed

    def _indexed(self, pathsets, vocab):
        indexed = {}
        for method_id in sorted(pathsets):
            pathset = pathsets[method_id]
            if not pathset.contexts:
                continue
            indexed[method_id] = (
                *index_contexts(pathset, vocab),
                vocab.target(target_label(method_id)),
            )
        return indexed

    def fit(self, pathsets: dict[str, PathSet], vocab: Vocabulary,
            rng: RandomStream | None = None):
        rng = rng if rng is not None else seeded_rng(
            0 if self.seed is None else self.seed).split(self.encoder)
        params = init_params(vocab, self.token_dim, self.path_dim, self.dim,
                             rng.split("init"))
        indexed = self._indexed(pathsets, vocab)
        ids = list(indexed)
        order = rng.split("split").permutation(len(ids))
        heldout_n = int(len(ids) * HELDOUT_FRACTION)
        heldout_ids = [ids[i] for i in order[:heldout_n]]
        train_ids = [ids[i] for i in order[heldout_n:]] or list(ids)
        eval_ids = heldout_ids or train_ids

        def evaluate():
            losses, hits = [], 0
            for method_id in eval_ids:
                starts, paths, ends, target = indexed[method_id]
                _, contexts = context_vectors(params, starts, paths, ends)
                loss, _, pooled, probs = head_forward(
                    contexts, params["attn"], params["out"], target)
                losses.append(loss)
                hits += int(np.argmax(probs) == target)
            return float(np.mean(losses)), hits / len(eval_ids)

        train_rng = rng.split("train")
        batches_per_epoch = max(1, (len(train_ids) + self.batch - 1) // self.batch)
        total_updates = max(1, self.epochs * batches_per_epoch)
        update = 0
        meta = {"heldout_methods": len(heldout_ids), "train_methods": len(train_ids)}
        for epoch in range(self.epochs):
            epoch_order = train_rng.permutation(len(train_ids))
            for lo in range(0, len(train_ids), self.batch):
                rows = epoch_order[lo:lo + self.batch]
                accum = {k: np.zeros_like(v) for k, v in params.items()}
                for i in rows:
                    starts, paths, ends, target = indexed[train_ids[i]]
                    _, grads = c2v_loss_and_grads(params, starts, paths, ends, target)
                    for key, grad in grads.items():
                        accum[key] += grad
                step = self.lr * (1.0 - (update / total_updates)
                                  * (1.0 - LR_FLOOR_FRACTION)) / len(rows)
                for key in params:
                    params[key] -= step * accum[key]
                update += 1
            if epoch == 0:
                meta["heldout_loss_first"], meta["heldout_acc_first"] = evaluate()
        meta["heldout_loss_last"], meta["heldout_acc_last"] = evaluate()

        all_ids = sorted(pathsets)
        vectors = np.zeros((len(all_ids), self.dim))
        flags = {}
        for row, method_id in enumerate(all_ids):
            if method_id in indexed:
                starts, paths, ends, _ = indexed[method_id]
                _, pooled = encode_method(params, starts, paths, ends)
                vectors[row] = pooled
            else:
                flags[method_id] = "no_contexts"
        self.params_ = params
        self.ids_ = all_ids
        self.embedding_ = vectors
        self.flags_ = flags
        self.meta_ = {
            "encoder": self.encoder, "dim": self.dim,
            "token_dim": self.token_dim, "path_dim": self.path_dim,
            "epochs": self.epochs, "batch": self.batch, "lr": self.lr,
            **meta,
        }
        return self

    def fit_embedding(self, pathsets, vocab, rng=None) -> CodeEmbedding:
        self.fit(pathsets, vocab, rng=rng)
        return CodeEmbedding(
            encoder=self.encoder, dim=self.dim, ids=tuple(self.ids_),
            vectors=self.embedding_, flags=dict(self.flags_),
            params=dict(self.meta_),
        )
