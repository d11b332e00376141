"""Path-sequence encoder: subtoken sums, a gated recurrent unit over the
node-type sequence, and the same attention/name-prediction head as the
context-hashing encoder.

Endpoint tokens embed as the sum of their subtoken vectors (capped at
five subtokens).  The path embeds as the final state of a single-layer
GRU read over direction-tagged node-type vectors, which makes it
order-sensitive.  Context vector: tanh(FC([path; start; end])).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from ..paths import PathSet, subtokenize
from ..rng import RandomStream, seeded_rng
from .attention import attention_pool, head_backward, head_forward
from .base import CodeEmbedding
from .skipgram import LR_FLOOR_FRACTION, _sigmoid
from .vocab import PAD, Vocabulary, target_label

HELDOUT_FRACTION = 0.10
MAX_SUBTOKENS = 5


def index_contexts(pathset: PathSet, vocab: Vocabulary):
    """Padded index arrays for one method's contexts.

    Returns (node_idx (m,T), node_mask, start_idx (m,S), start_mask,
    end_idx, end_mask).
    """
    m = len(pathset.contexts)
    t_max = max(len(c.node_types) for c in pathset.contexts)
    node_idx = np.full((m, t_max), PAD, dtype=np.int64)
    node_mask = np.zeros((m, t_max))
    start_idx = np.full((m, MAX_SUBTOKENS), PAD, dtype=np.int64)
    start_mask = np.zeros((m, MAX_SUBTOKENS))
    end_idx = np.full((m, MAX_SUBTOKENS), PAD, dtype=np.int64)
    end_mask = np.zeros((m, MAX_SUBTOKENS))
    for i, ctx in enumerate(pathset.contexts):
        for t, label in enumerate(ctx.node_types):
            node_idx[i, t] = vocab.node_type(label)
            node_mask[i, t] = 1.0
        for target_idx, target_mask, token in (
            (start_idx, start_mask, ctx.start_token),
            (end_idx, end_mask, ctx.end_token),
        ):
            for s, sub in enumerate(subtokenize(token)[:MAX_SUBTOKENS]):
                target_idx[i, s] = vocab.token(sub)
                target_mask[i, s] = 1.0
    return node_idx, node_mask, start_idx, start_mask, end_idx, end_mask


def init_params(vocab: Vocabulary, token_dim: int, node_dim: int, dim: int,
                rng: RandomStream) -> dict:
    def table(rows, cols):
        return (rng.random((rows, cols)) - 0.5) / cols

    def glorot(fan_in, fan_out):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        return (rng.random((fan_in, fan_out)) * 2.0 - 1.0) * bound

    h = node_dim  # GRU hidden width equals the node embedding width
    fc_in = h + 2 * token_dim
    params = {
        "tok": table(vocab.n_tokens, token_dim),
        "nd": table(vocab.n_node_types, node_dim),
        "fc": glorot(fc_in, dim),
        "fcb": np.zeros(dim),
        "attn": (rng.random(dim) - 0.5) / dim,
        "out": table(vocab.n_targets, dim),
    }
    for gate in ("z", "r", "h"):
        params[f"W{gate}"] = glorot(node_dim, h)
        params[f"U{gate}"] = glorot(h, h)
        params[f"b{gate}"] = np.zeros(h)
    return params


def gru_forward(params: dict, node_idx: np.ndarray, node_mask: np.ndarray):
    """Final states (m, h) plus the per-step cache for backprop."""
    m, t_max = node_idx.shape
    h_dim = params["bz"].shape[0]
    state = np.zeros((m, h_dim))
    cache = []
    for t in range(t_max):
        x = params["nd"][node_idx[:, t]]
        z = _sigmoid(x @ params["Wz"] + state @ params["Uz"] + params["bz"])
        r = _sigmoid(x @ params["Wr"] + state @ params["Ur"] + params["br"])
        candidate = np.tanh(x @ params["Wh"] + (r * state) @ params["Uh"]
                            + params["bh"])
        mask = node_mask[:, t:t + 1]
        new_state = (1.0 - z) * state + z * candidate
        cache.append((x, state, z, r, candidate, mask))
        state = state + mask * (new_state - state)
    return state, cache


def gru_backward(params: dict, node_idx: np.ndarray, d_state: np.ndarray,
                 cache, grads: dict):
    """Accumulate GRU parameter gradients; returns nothing extra."""
    for t in range(len(cache) - 1, -1, -1):
        x, prev, z, r, candidate, mask = cache[t]
        d_new = d_state * mask
        d_prev = d_state * (1.0 - mask)

        d_z = d_new * (candidate - prev)
        d_candidate = d_new * z
        d_prev = d_prev + d_new * (1.0 - z)

        d_candidate_raw = d_candidate * (1.0 - candidate**2)
        grads["Wh"] += x.T @ d_candidate_raw
        grads["Uh"] += (r * prev).T @ d_candidate_raw
        grads["bh"] += d_candidate_raw.sum(axis=0)
        d_inner = d_candidate_raw @ params["Uh"].T
        d_r = d_inner * prev
        d_prev = d_prev + d_inner * r

        d_z_raw = d_z * z * (1.0 - z)
        d_r_raw = d_r * r * (1.0 - r)
        grads["Wz"] += x.T @ d_z_raw
        grads["Uz"] += prev.T @ d_z_raw
        grads["bz"] += d_z_raw.sum(axis=0)
        grads["Wr"] += x.T @ d_r_raw
        grads["Ur"] += prev.T @ d_r_raw
        grads["br"] += d_r_raw.sum(axis=0)

        d_prev = (d_prev + d_z_raw @ params["Uz"].T
                  + d_r_raw @ params["Ur"].T)
        d_x = (d_z_raw @ params["Wz"].T + d_r_raw @ params["Wr"].T
               + d_candidate_raw @ params["Wh"].T)
        np.add.at(grads["nd"], node_idx[:, t], d_x)
        d_state = d_prev


def _context_forward(params: dict, indexed):
    node_idx, node_mask, start_idx, start_mask, end_idx, end_mask = indexed
    path_state, cache = gru_forward(params, node_idx, node_mask)
    start_sum = (params["tok"][start_idx] * start_mask[:, :, None]).sum(axis=1)
    end_sum = (params["tok"][end_idx] * end_mask[:, :, None]).sum(axis=1)
    combined = np.hstack([path_state, start_sum, end_sum])
    contexts = np.tanh(combined @ params["fc"] + params["fcb"])
    return contexts, combined, cache


def encode_method(params: dict, indexed):
    contexts, _, _ = _context_forward(params, indexed)
    return attention_pool(contexts, params["attn"])


def c2s_loss_and_grads(params: dict, indexed, target: int,
                       grads: dict | None = None):
    """Name-prediction loss for one method; accumulates dense gradients."""
    node_idx, node_mask, start_idx, start_mask, end_idx, end_mask = indexed
    contexts, combined, cache = _context_forward(params, indexed)
    loss, weights, pooled, probs = head_forward(
        contexts, params["attn"], params["out"], target)
    if grads is None:
        grads = {key: np.zeros_like(value) for key, value in params.items()}

    d_contexts, g_attn, g_out = head_backward(
        contexts, params["attn"], params["out"], target, weights, pooled, probs)
    grads["attn"] += g_attn
    grads["out"] += g_out

    d_raw = d_contexts * (1.0 - contexts**2)
    grads["fc"] += combined.T @ d_raw
    grads["fcb"] += d_raw.sum(axis=0)
    d_combined = d_raw @ params["fc"].T

    h_dim = params["bz"].shape[0]
    token_dim = params["tok"].shape[1]
    d_path = d_combined[:, :h_dim]
    d_start = d_combined[:, h_dim:h_dim + token_dim]
    d_end = d_combined[:, h_dim + token_dim:]

    np.add.at(grads["tok"], start_idx.reshape(-1),
              (d_start[:, None, :] * start_mask[:, :, None]).reshape(-1, token_dim))
    np.add.at(grads["tok"], end_idx.reshape(-1),
              (d_end[:, None, :] * end_mask[:, :, None]).reshape(-1, token_dim))
    gru_backward(params, node_idx, d_path, cache, grads)
    return loss, grads


class Code2SeqEncoder(BaseEstimator):
    encoder = "code2seq"

    def __init__(self, dim=128, token_dim=128, node_dim=128, epochs=3000,
                 batch=256, lr=0.01, seed=None):
        self.dim = dim
        self.token_dim = token_dim
        self.node_dim = node_dim
        self.epochs = epochs
        self.batch = batch
        self.lr = lr
        self.seed = seed

    def fit(self, pathsets: dict[str, PathSet], vocab: Vocabulary,
            rng: RandomStream | None = None):
        rng = rng if rng is not None else seeded_rng(
            0 if self.seed is None else self.seed).split(self.encoder)
        params = init_params(vocab, self.token_dim, self.node_dim, self.dim,
                             rng.split("init"))
        indexed = {}
        for method_id in sorted(pathsets):
            pathset = pathsets[method_id]
            if not pathset.contexts:
                continue
            indexed[method_id] = (
                index_contexts(pathset, vocab),
                vocab.target(target_label(method_id)),
            )
        ids = list(indexed)
        order = rng.split("split").permutation(len(ids))
        heldout_n = int(len(ids) * HELDOUT_FRACTION)
        heldout_ids = [ids[i] for i in order[:heldout_n]]
        train_ids = [ids[i] for i in order[heldout_n:]] or list(ids)
        eval_ids = heldout_ids or train_ids

        def evaluate():
            losses, hits = [], 0
            for method_id in eval_ids:
                ctx_idx, target = indexed[method_id]
                contexts, _, _ = _context_forward(params, ctx_idx)
                loss, _, _, probs = head_forward(
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
                accum = {key: np.zeros_like(value) for key, value in params.items()}
                for i in rows:
                    ctx_idx, target = indexed[train_ids[i]]
                    c2s_loss_and_grads(params, ctx_idx, target, accum)
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
                _, pooled = encode_method(params, indexed[method_id][0])
                vectors[row] = pooled
            else:
                flags[method_id] = "no_contexts"
        self.params_ = params
        self.ids_ = all_ids
        self.embedding_ = vectors
        self.flags_ = flags
        self.meta_ = {
            "encoder": self.encoder, "dim": self.dim,
            "token_dim": self.token_dim, "node_dim": self.node_dim,
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
