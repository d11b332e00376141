"""Training-data generation, classifier fitting, tuning, and evaluation.

Sample generation follows the auto-labeling rule: every refactoring
triple contributes one negative sample (method beside its current class)
and one positive sample (method beside its target class), duplicates
included, so the label counts stay balanced at k positives and k
negatives for k triples.
"""

from __future__ import annotations

import itertools
import json
import struct
from dataclasses import dataclass, field

import numpy as np

from .classifiers import CLASSIFIER_KINDS
from .errors import (
    ArtifactError,
    DimensionMismatch,
    MissingHybrid,
    MissingEmbedding,
    TooFewSamplesForFolds,
)
from .fusion import HybridSpace
from .rng import RandomStream, seeded_rng
from .triples import MoveMethodTriple

MODEL_MAGIC = b"RMMDL1"

DEFAULT_HYPERPARAMS = {
    "dt": {"max_depth": None, "min_samples_split": 2},
    "nb": {},
    "svm": {"lr": 0.1, "epochs": 200, "l2": 1e-3},
    "lr": {"lr": 0.5, "iterations": 500},
    "rf": {"n_trees": 100, "max_depth": 16, "max_features": "sqrt"},
    "gbt": {"rounds": 100, "learning_rate": 0.1, "max_depth": 3},
}
DEFAULT_HYPERPARAMS["xgb"] = DEFAULT_HYPERPARAMS["gbt"]

DEFAULT_GRIDS = {
    "dt": {"max_depth": [4, 8, 16, None]},
    "nb": {},
    "svm": {"l2": [1e-4, 1e-3, 1e-2]},
    "lr": {"lr": [0.1, 0.5], "iterations": [300, 800]},
    "rf": {"n_trees": [50, 100, 200], "max_depth": [8, 16, None]},
    "gbt": {"rounds": [50, 100], "learning_rate": [0.05, 0.1, 0.3]},
}
DEFAULT_GRIDS["xgb"] = DEFAULT_GRIDS["gbt"]


@dataclass(frozen=True)
class LabeledSample:
    features: np.ndarray
    label: bool
    provenance: tuple  # (method id, class id, triple index)


@dataclass
class TrainedModel:
    kind: str
    model: object
    hyperparams: dict
    feature_dim: int
    config_snapshot: dict = field(default_factory=dict)
    normalizer_ref: str = ""

    def predict_proba(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.feature_dim:
            raise DimensionMismatch(
                f"model expects {self.feature_dim} features, got {X.shape}")
        return self.model.predict_proba(X)

    def predict(self, X) -> np.ndarray:
        return self.predict_proba(X)[:, 1] > 0.5


def generate_training_data(triples: list[MoveMethodTriple],
                           hybrids: HybridSpace) -> list[LabeledSample]:
    samples = []
    for index, triple in enumerate(triples):
        try:
            method_vec = hybrids.method_vector(triple.method)
            source_vec = hybrids.class_vector(triple.source_class)
            target_vec = hybrids.class_vector(triple.target_class)
        except MissingEmbedding as exc:
            raise MissingHybrid(exc.method_id) from None
        samples.append(LabeledSample(
            np.concatenate([method_vec, source_vec]), False,
            (triple.method, triple.source_class, index)))
        samples.append(LabeledSample(
            np.concatenate([method_vec, target_vec]), True,
            (triple.method, triple.target_class, index)))
    return samples


def samples_to_arrays(samples: list[LabeledSample]) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray([s.features for s in samples], dtype=np.float64)
    y = np.asarray([s.label for s in samples], dtype=bool)
    return X, y


def train_classifier(kind: str, X, y, hyperparams: dict | None = None,
                     rng: RandomStream | None = None) -> TrainedModel:
    if kind not in CLASSIFIER_KINDS:
        raise ValueError(f"unknown classifier kind {kind!r}; "
                         f"choose from {sorted(CLASSIFIER_KINDS)}")
    params = dict(DEFAULT_HYPERPARAMS.get(kind, {}))
    params.update(hyperparams or {})
    rng = rng or seeded_rng(0).split(f"train-{kind}")
    model = CLASSIFIER_KINDS[kind](**params)
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).astype(float)
    model.fit(X, y, rng=rng)
    return TrainedModel(kind=kind, model=model, hyperparams=params,
                        feature_dim=X.shape[1])


def stratified_folds(y, folds: int, rng: RandomStream) -> list[np.ndarray]:
    """Index arrays per fold; class ratio preserved within one sample."""
    y = np.asarray(y).astype(bool)
    if folds < 2:
        raise ValueError("folds must be >= 2")
    positive = np.nonzero(y)[0]
    negative = np.nonzero(~y)[0]
    if folds > len(positive) or folds > len(negative):
        raise TooFewSamplesForFolds(
            f"{folds} folds need at least {folds} samples of each label")
    assignments: list[list[int]] = [[] for _ in range(folds)]
    for group in (positive, negative):
        order = group[rng.permutation(len(group))]
        for i, sample in enumerate(order):
            assignments[i % folds].append(int(sample))
    return [np.sort(np.asarray(a, dtype=np.int64)) for a in assignments]


def fold_metrics(y_true, y_pred) -> tuple[float, float, float]:
    """Positive-class precision, recall, F1 with the 0/0 -> 0 convention."""
    y_true = np.asarray(y_true).astype(bool)
    y_pred = np.asarray(y_pred).astype(bool)
    tp = int(np.sum(y_true & y_pred))
    fp = int(np.sum(~y_true & y_pred))
    fn = int(np.sum(y_true & ~y_pred))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return precision, recall, f1


def cross_validate(kind: str, X, y, folds: int, repeats: int,
                   rng: RandomStream | None = None,
                   hyperparams: dict | None = None) -> dict:
    """repeats x folds rows of (precision, recall, f1) plus the mean."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).astype(bool)
    rng = rng or seeded_rng(0).split("cv")
    rows = []
    for repeat in range(repeats):
        fold_indices = stratified_folds(y, folds, rng.split(f"repeat-{repeat}"))
        for fold, test_idx in enumerate(fold_indices):
            train_mask = np.ones(len(y), dtype=bool)
            train_mask[test_idx] = False
            model = train_classifier(
                kind, X[train_mask], y[train_mask], hyperparams,
                rng.split(f"fit-{repeat}-{fold}"))
            predicted = model.predict(X[test_idx])
            precision, recall, f1 = fold_metrics(y[test_idx], predicted)
            rows.append({"repeat": repeat, "fold": fold,
                         "precision": precision, "recall": recall, "f1": f1})
    mean = {
        metric: float(np.mean([row[metric] for row in rows]))
        for metric in ("precision", "recall", "f1")
    }
    return {"rows": rows, "mean": mean}


def expand_grid(grid: dict) -> list[dict]:
    """Cartesian product in insertion order (first combination first)."""
    if not grid:
        return [{}]
    keys = list(grid)
    return [dict(zip(keys, combo))
            for combo in itertools.product(*(grid[k] for k in keys))]


def grid_search(kind: str, X, y, grid: dict | None = None, folds: int = 5,
                rng: RandomStream | None = None) -> tuple[dict, TrainedModel]:
    """Exhaustive search by mean F1 over one shared stratified fold split.

    Ties keep the earliest grid point; the winner is refit on all samples.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).astype(bool)
    rng = rng or seeded_rng(0).split("grid")
    points = expand_grid(DEFAULT_GRIDS.get(kind, {}) if grid is None else grid)
    fold_indices = stratified_folds(y, folds, rng.split("folds"))
    best_score, best_point = -1.0, None
    for point_index, point in enumerate(points):
        scores = []
        for fold, test_idx in enumerate(fold_indices):
            train_mask = np.ones(len(y), dtype=bool)
            train_mask[test_idx] = False
            model = train_classifier(
                kind, X[train_mask], y[train_mask], point,
                rng.split(f"fit-{point_index}-{fold}"))
            _, _, f1 = fold_metrics(y[test_idx], model.predict(X[test_idx]))
            scores.append(f1)
        score = float(np.mean(scores))
        if score > best_score + 1e-12:
            best_score, best_point = score, point
    final = train_classifier(kind, X, y, best_point, rng.split("refit"))
    return best_point, final


# --- persistence ---------------------------------------------------------------

def save_model(trained: TrainedModel, path) -> None:
    payload = {
        "kind": trained.kind,
        "hyperparams": trained.hyperparams,
        "feature_dim": trained.feature_dim,
        "config_snapshot": trained.config_snapshot,
        "normalizer_ref": trained.normalizer_ref,
        "model": trained.model.to_payload(),
    }
    blob = json.dumps(payload, ensure_ascii=False, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MODEL_MAGIC)
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)


def load_model(path, expected_dim: int | None = None,
               expected_normalizer_ref: str | None = None) -> TrainedModel:
    with open(path, "rb") as fh:
        magic = fh.read(6)
        if magic != MODEL_MAGIC:
            raise ArtifactError(f"{path}: not a model file")
        (length,) = struct.unpack("<I", fh.read(4))
        payload = json.loads(fh.read(length).decode("utf-8"))
    kind = payload["kind"]
    if kind not in CLASSIFIER_KINDS:
        raise ArtifactError(f"{path}: unknown classifier kind {kind!r}")
    if expected_dim is not None and payload["feature_dim"] != expected_dim:
        raise DimensionMismatch(
            f"model was trained on {payload['feature_dim']} features, "
            f"embeddings provide {expected_dim}")
    if (expected_normalizer_ref is not None and payload["normalizer_ref"]
            and payload["normalizer_ref"] != expected_normalizer_ref):
        raise ArtifactError(f"{path}: normalizer reference hash mismatch")
    hyperparams = payload["hyperparams"]
    model = CLASSIFIER_KINDS[kind].from_payload(payload["model"], **hyperparams)
    return TrainedModel(
        kind=kind, model=model, hyperparams=hyperparams,
        feature_dim=payload["feature_dim"],
        config_snapshot=payload.get("config_snapshot", {}),
        normalizer_ref=payload.get("normalizer_ref", ""),
    )
