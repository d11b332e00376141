"""Attention pooling and the name-prediction softmax head.

Shared by both code encoders: per-context vectors are pooled by softmax
attention into one method vector, which scores every target name by dot
product.  Forward and backward are explicit so encoder gradients can be
checked against finite differences end to end.
"""

from __future__ import annotations

import numpy as np


def softmax(x: np.ndarray) -> np.ndarray:
    shifted = x - np.max(x)
    e = np.exp(shifted)
    return e / e.sum()


def attention_pool(contexts: np.ndarray, attn: np.ndarray):
    """Weights and pooled vector for per-context vectors (m, dv)."""
    weights = softmax(contexts @ attn)
    return weights, weights @ contexts


def head_forward(contexts: np.ndarray, attn: np.ndarray, out: np.ndarray,
                 target: int):
    """Loss plus everything the backward pass needs."""
    weights, pooled = attention_pool(contexts, attn)
    logits = out @ pooled
    shifted = logits - np.max(logits)
    log_z = np.log(np.sum(np.exp(shifted)))
    loss = float(log_z - shifted[target])
    probs = np.exp(shifted - log_z)
    return loss, weights, pooled, probs


def head_backward(contexts: np.ndarray, attn: np.ndarray, out: np.ndarray,
                  target: int, weights: np.ndarray, pooled: np.ndarray,
                  probs: np.ndarray):
    """Gradients w.r.t. contexts, attn, and out for the head loss."""
    d_logits = probs.copy()
    d_logits[target] -= 1.0
    g_out = np.outer(d_logits, pooled)
    d_pooled = out.T @ d_logits

    d_weights = contexts @ d_pooled
    d_scores = weights * (d_weights - np.dot(weights, d_weights))
    g_attn = contexts.T @ d_scores
    d_contexts = weights[:, None] * d_pooled[None, :] + np.outer(d_scores, attn)
    return d_contexts, g_attn, g_out
