"""Normalization and fusion of code and graph embeddings.

Each family is min-max normalized per dimension over the corpus methods
(constant dimensions map to 0.5, out-of-range values at inference clamp
into [0,1] and are counted).  A method's hybrid vector concatenates
alpha-weighted normalized code values with (1-alpha)-weighted normalized
graph values; a class embeds as the element-wise mean of its members,
and empty classes are zero vectors flagged out of the candidate set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .embed.base import CodeEmbedding, GraphEmbedding
from .errors import ArtifactError, EmptyInput, MissingEmbedding
from .storage import load_embedding, save_embedding

HALF_FOR_CONSTANT = 0.5


class MinMaxNormalizer(BaseEstimator, TransformerMixin):
    """Per-dimension min-max scaler fitted on method embeddings only."""

    def __init__(self, family: str = "code"):
        self.family = family

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[0] == 0:
            raise EmptyInput(f"{self.family}: nothing to fit a normalizer on")
        self.mins_ = X.min(axis=0)
        self.maxes_ = X.max(axis=0)
        self.clamped_count_ = 0
        return self

    def transform(self, X):
        X = np.asarray(X, dtype=np.float64)
        span = self.maxes_ - self.mins_
        constant = span == 0
        safe_span = np.where(constant, 1.0, span)
        scaled = (X - self.mins_) / safe_span
        scaled = np.where(constant, HALF_FOR_CONSTANT, scaled)
        out_of_range = int(np.sum((scaled < 0) | (scaled > 1)))
        self.clamped_count_ = getattr(self, "clamped_count_", 0) + out_of_range
        return np.clip(scaled, 0.0, 1.0)

    def to_payload(self) -> dict:
        return {
            "family": self.family,
            "dims": int(self.mins_.shape[0]),
            "mins": self.mins_.tolist(),
            "maxes": self.maxes_.tolist(),
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "MinMaxNormalizer":
        normalizer = cls(family=payload["family"])
        normalizer.mins_ = np.asarray(payload["mins"], dtype=np.float64)
        normalizer.maxes_ = np.asarray(payload["maxes"], dtype=np.float64)
        normalizer.clamped_count_ = 0
        if normalizer.mins_.shape != normalizer.maxes_.shape or \
                normalizer.mins_.shape[0] != payload["dims"]:
            raise ArtifactError("normalizer payload dims mismatch")
        return normalizer


def fuse_method(code_vec, graph_vec, code_norm: MinMaxNormalizer,
                graph_norm: MinMaxNormalizer, alpha: float) -> np.ndarray:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must be in [0,1]")
    code_part = alpha * code_norm.transform(np.atleast_2d(code_vec))[0]
    graph_part = (1.0 - alpha) * graph_norm.transform(np.atleast_2d(graph_vec))[0]
    return np.concatenate([code_part, graph_part])


def class_embedding(member_vectors: list[np.ndarray], width: int) -> tuple[np.ndarray, bool]:
    """(mean vector, is_empty flag); empty classes get zeros and the flag."""
    if not member_vectors:
        return np.zeros(width), True
    return np.mean(np.asarray(member_vectors), axis=0), False


@dataclass
class HybridSpace:
    alpha: float
    code_dim: int
    graph_dim: int
    method_ids: tuple
    method_vectors: np.ndarray
    class_ids: tuple
    class_vectors: np.ndarray
    empty_classes: frozenset
    code_normalizer: MinMaxNormalizer | None = None
    graph_normalizer: MinMaxNormalizer | None = None
    params: dict = field(default_factory=dict)
    _method_index: dict = field(default_factory=dict, repr=False)
    _class_index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._method_index = {m: i for i, m in enumerate(self.method_ids)}
        self._class_index = {c: i for i, c in enumerate(self.class_ids)}

    @property
    def width(self) -> int:
        return self.code_dim + self.graph_dim

    def method_vector(self, method_id: str) -> np.ndarray:
        try:
            return self.method_vectors[self._method_index[method_id]]
        except KeyError:
            raise MissingEmbedding("hybrid", method_id) from None

    def class_vector(self, class_id: str) -> np.ndarray:
        try:
            return self.class_vectors[self._class_index[class_id]]
        except KeyError:
            raise MissingEmbedding("hybrid", class_id) from None


def fuse(corpus, code: CodeEmbedding, graph: GraphEmbedding,
         alpha: float) -> HybridSpace:
    """Hybrid method and class embeddings for a whole corpus.

    Methods missing either embedding family are an error; silently
    zero-filling them would bias every classifier trained downstream.
    """
    code_map = code.as_mapping()
    graph_map = graph.as_mapping()
    method_ids = tuple(corpus.method_ids())
    for method_id in method_ids:
        if method_id not in code_map:
            raise MissingEmbedding("code", method_id)
        if method_id not in graph_map:
            raise MissingEmbedding("graph", method_id)

    code_matrix = np.asarray([code_map[m] for m in method_ids], dtype=np.float64)
    graph_matrix = np.asarray([graph_map[m] for m in method_ids], dtype=np.float64)
    code_norm = MinMaxNormalizer("code").fit(code_matrix)
    graph_norm = MinMaxNormalizer("graph").fit(graph_matrix)

    method_vectors = np.hstack([
        alpha * code_norm.transform(code_matrix),
        (1.0 - alpha) * graph_norm.transform(graph_matrix),
    ])

    by_method = {m: method_vectors[i] for i, m in enumerate(method_ids)}
    class_ids = tuple(c.id for c in corpus.classes)
    width = code_matrix.shape[1] + graph_matrix.shape[1]
    class_rows = []
    empty = set()
    for record in corpus.classes:
        vector, is_empty = class_embedding(
            [by_method[m] for m in record.methods], width)
        class_rows.append(vector)
        if is_empty:
            empty.add(record.id)
    class_vectors = (np.asarray(class_rows)
                     if class_rows else np.zeros((0, width)))

    return HybridSpace(
        alpha=alpha,
        code_dim=code_matrix.shape[1],
        graph_dim=graph_matrix.shape[1],
        method_ids=method_ids,
        method_vectors=method_vectors,
        class_ids=class_ids,
        class_vectors=class_vectors,
        empty_classes=frozenset(empty),
        code_normalizer=code_norm,
        graph_normalizer=graph_norm,
        params={"alpha": alpha, "code_tag": code.encoder,
                "graph_tag": graph.technique},
    )


# --- persistence ---------------------------------------------------------------

def save_hybrids(space: HybridSpace, directory) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    meta = {
        **space.params,
        "alpha": space.alpha,
        "code_dim": space.code_dim,
        "graph_dim": space.graph_dim,
        "empty_classes": sorted(space.empty_classes),
    }
    save_embedding(directory / "methods.emb", "HYBRID",
                   list(space.method_ids), space.method_vectors, meta)
    save_embedding(directory / "classes.emb", "HYBRID",
                   list(space.class_ids), space.class_vectors, meta)
    payload = {
        "code": space.code_normalizer.to_payload(),
        "graph": space.graph_normalizer.to_payload(),
    }
    with open(directory / "normalizers.json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, sort_keys=True, indent=0)
        fh.write("\n")


def load_hybrids(directory) -> HybridSpace:
    directory = Path(directory)
    tag_m, method_ids, method_vectors, meta = load_embedding(directory / "methods.emb")
    tag_c, class_ids, class_vectors, _ = load_embedding(directory / "classes.emb")
    if tag_m != "HYBRID" or tag_c != "HYBRID":
        raise ArtifactError("not a hybrid embedding directory")
    with open(directory / "normalizers.json", encoding="utf-8") as fh:
        payload = json.load(fh)
    return HybridSpace(
        alpha=float(meta["alpha"]),
        code_dim=int(meta["code_dim"]),
        graph_dim=int(meta["graph_dim"]),
        method_ids=tuple(method_ids),
        method_vectors=method_vectors.astype(np.float64),
        class_ids=tuple(class_ids),
        class_vectors=class_vectors.astype(np.float64),
        empty_classes=frozenset(meta.get("empty_classes", [])),
        code_normalizer=MinMaxNormalizer.from_payload(payload["code"]),
        graph_normalizer=MinMaxNormalizer.from_payload(payload["graph"]),
        params=dict(meta),
    )
