"""Decision trees and random forests on dense float features.

One builder serves both the Gini classification tree and the variance
regression tree used inside gradient boosting; thresholds are midpoints
between consecutive distinct values and ties resolve to the first
(feature, threshold) pair, so identical data yields identical structure
across criteria that rank splits the same way.

Trees flatten to index arrays so batches predict in a handful of
vectorized passes instead of per-sample recursion.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from ..errors import DimensionMismatch, SingleClassInput
from ..rng import RandomStream, seeded_rng

NO_FEATURE = -1


def _gini_scores(n_left, pos_left, n_total, pos_total):
    """Weighted Gini impurity for every candidate split position."""
    n_right = n_total - n_left
    pos_right = pos_total - pos_left
    p_left = pos_left / n_left
    p_right = pos_right / n_right
    gini_left = 2.0 * p_left * (1.0 - p_left)
    gini_right = 2.0 * p_right * (1.0 - p_right)
    return (n_left * gini_left + n_right * gini_right) / n_total


def _variance_scores(n_left, sum_left, sumsq_left, n_total, sum_total, sumsq_total):
    """Total within-side sum of squared deviations, normalized by count."""
    n_right = n_total - n_left
    sum_right = sum_total - sum_left
    sumsq_right = sumsq_total - sumsq_left
    sse_left = sumsq_left - sum_left**2 / n_left
    sse_right = sumsq_right - sum_right**2 / n_right
    return (sse_left + sse_right) / n_total


def _best_split(X, y, feature_indices, criterion):
    """(score, feature, threshold) of the best split, or None."""
    best = None
    n = len(y)
    for feature in feature_indices:
        column = X[:, feature]
        order = np.argsort(column, kind="stable")
        sorted_vals = column[order]
        sorted_y = y[order]
        distinct = sorted_vals[:-1] < sorted_vals[1:]
        if not np.any(distinct):
            continue
        positions = np.nonzero(distinct)[0]  # split after these indices
        n_left = positions + 1.0
        if criterion == "gini":
            prefix_pos = np.cumsum(sorted_y)
            scores = _gini_scores(n_left, prefix_pos[positions], n, sorted_y.sum())
        else:
            prefix_sum = np.cumsum(sorted_y)
            prefix_sq = np.cumsum(sorted_y**2)
            scores = _variance_scores(n_left, prefix_sum[positions],
                                      prefix_sq[positions], n,
                                      sorted_y.sum(), (sorted_y**2).sum())
        k = int(np.argmin(scores))  # first minimum wins on ties
        score = float(scores[k])
        threshold = float((sorted_vals[positions[k]]
                           + sorted_vals[positions[k] + 1]) / 2.0)
        if best is None or score < best[0] - 1e-15:
            best = (score, int(feature), threshold)
    return best


class FlatTree:
    """Arrays: feature (or NO_FEATURE at leaves), threshold, children, value."""

    def __init__(self):
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []

    def add_node(self) -> int:
        self.feature.append(NO_FEATURE)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        return len(self.feature) - 1

    def freeze(self):
        self.feature = np.asarray(self.feature, dtype=np.int64)
        self.threshold = np.asarray(self.threshold)
        self.left = np.asarray(self.left, dtype=np.int64)
        self.right = np.asarray(self.right, dtype=np.int64)
        self.value = np.asarray(self.value)
        return self

    def predict_value(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(X.shape[0], dtype=np.int64)
        while True:
            at_leaf = self.feature[node] == NO_FEATURE
            if np.all(at_leaf):
                break
            active = ~at_leaf
            rows = np.nonzero(active)[0]
            current = node[rows]
            go_left = X[rows, self.feature[current]] <= self.threshold[current]
            node[rows] = np.where(go_left, self.left[current], self.right[current])
        return self.value[node]

    def leaf_assignment(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(X.shape[0], dtype=np.int64)
        while True:
            at_leaf = self.feature[node] == NO_FEATURE
            if np.all(at_leaf):
                return node
            rows = np.nonzero(~at_leaf)[0]
            current = node[rows]
            go_left = X[rows, self.feature[current]] <= self.threshold[current]
            node[rows] = np.where(go_left, self.left[current], self.right[current])

    def structure(self) -> list[tuple]:
        """(feature, rounded threshold) skeleton in node order, for tests."""
        return [
            (int(f), round(float(t), 9)) if f != NO_FEATURE else ("leaf",)
            for f, t in zip(self.feature, self.threshold)
        ]

    def to_payload(self) -> dict:
        return {
            "feature": np.asarray(self.feature).tolist(),
            "threshold": np.asarray(self.threshold).tolist(),
            "left": np.asarray(self.left).tolist(),
            "right": np.asarray(self.right).tolist(),
            "value": np.asarray(self.value).tolist(),
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "FlatTree":
        tree = cls()
        tree.feature = payload["feature"]
        tree.threshold = payload["threshold"]
        tree.left = payload["left"]
        tree.right = payload["right"]
        tree.value = payload["value"]
        return tree.freeze()


def build_tree(X, y, criterion="gini", max_depth=None, min_samples_split=2,
               max_features=None, rng: RandomStream | None = None) -> FlatTree:
    tree = FlatTree()
    n_features = X.shape[1]

    def choose_features():
        if max_features is None or max_features >= n_features:
            return np.arange(n_features)
        return np.sort(rng.choice(n_features, size=max_features, replace=False))

    def grow(indices, depth):
        node = tree.add_node()
        subset_y = y[indices]
        tree.value[node] = float(subset_y.mean())
        pure = np.all(subset_y == subset_y[0])
        if pure or len(indices) < min_samples_split or \
                (max_depth is not None and depth >= max_depth):
            return node
        best = _best_split(X[indices], subset_y, choose_features(), criterion)
        if best is None:
            return node
        _, feature, threshold = best
        go_left = X[indices, feature] <= threshold
        left_idx = indices[go_left]
        right_idx = indices[~go_left]
        if len(left_idx) == 0 or len(right_idx) == 0:
            return node
        tree.feature[node] = feature
        tree.threshold[node] = threshold
        tree.left[node] = grow(left_idx, depth + 1)
        tree.right[node] = grow(right_idx, depth + 1)
        return node

    grow(np.arange(X.shape[0]), 0)
    return tree.freeze()


def _check_fit_inputs(X, y):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).astype(np.float64)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise DimensionMismatch("X must be 2-d with one label per row")
    if len(np.unique(y)) < 2:
        raise SingleClassInput("need both labels present to fit")
    return X, y


class DecisionTree(BaseEstimator, ClassifierMixin):
    """Binary classification tree splitting on Gini impurity."""

    def __init__(self, max_depth=None, min_samples_split=2, max_features=None,
                 seed=None):
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.max_features = max_features
        self.seed = seed

    def fit(self, X, y, rng: RandomStream | None = None):
        X, y = _check_fit_inputs(X, y)
        rng = rng or seeded_rng(0 if self.seed is None else self.seed).split("dt")
        self.n_features_in_ = X.shape[1]
        self.tree_ = build_tree(X, y, "gini", self.max_depth,
                                self.min_samples_split, self.max_features, rng)
        self.classes_ = np.array([False, True])
        return self

    def _validate(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise DimensionMismatch(
                f"expected {self.n_features_in_} features, got {X.shape}")
        return X

    def predict_proba(self, X):
        positive = self.tree_.predict_value(self._validate(X))
        return np.column_stack([1.0 - positive, positive])

    def predict(self, X):
        return self.predict_proba(X)[:, 1] > 0.5

    def to_payload(self) -> dict:
        return {"n_features": self.n_features_in_, "tree": self.tree_.to_payload()}

    @classmethod
    def from_payload(cls, payload, **params) -> "DecisionTree":
        model = cls(**params)
        model.n_features_in_ = payload["n_features"]
        model.tree_ = FlatTree.from_payload(payload["tree"])
        model.classes_ = np.array([False, True])
        return model


class RandomForest(BaseEstimator, ClassifierMixin):
    """Bagged Gini trees with per-node feature subsampling."""

    def __init__(self, n_trees=100, max_depth=None, min_samples_split=2,
                 max_features="sqrt", bootstrap=True, seed=None):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.max_features = max_features
        self.bootstrap = bootstrap
        self.seed = seed

    def _features_per_split(self, n_features):
        if self.max_features is None:
            return None
        if self.max_features == "sqrt":
            return max(1, int(np.sqrt(n_features)))
        return int(self.max_features)

    def fit(self, X, y, rng: RandomStream | None = None):
        X, y = _check_fit_inputs(X, y)
        rng = rng or seeded_rng(0 if self.seed is None else self.seed).split("rf")
        self.n_features_in_ = X.shape[1]
        k = self._features_per_split(X.shape[1])
        self.trees_ = []
        for t in range(self.n_trees):
            tree_rng = rng.split(f"tree-{t}")
            if self.bootstrap:
                rows = tree_rng.integers(0, X.shape[0], size=X.shape[0])
                sample_X, sample_y = X[rows], y[rows]
                if len(np.unique(sample_y)) < 2:  # resample degenerate draws
                    continue
            else:
                sample_X, sample_y = X, y
            self.trees_.append(build_tree(
                sample_X, sample_y, "gini", self.max_depth,
                self.min_samples_split, k, tree_rng.split("features")))
        if not self.trees_:
            self.trees_.append(build_tree(X, y, "gini", self.max_depth,
                                          self.min_samples_split, k,
                                          rng.split("fallback")))
        self.classes_ = np.array([False, True])
        return self

    def _validate(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise DimensionMismatch(
                f"expected {self.n_features_in_} features, got {X.shape}")
        return X

    def predict_proba(self, X):
        X = self._validate(X)
        positive = np.mean([tree.predict_value(X) for tree in self.trees_], axis=0)
        return np.column_stack([1.0 - positive, positive])

    def predict(self, X):
        return self.predict_proba(X)[:, 1] > 0.5

    def to_payload(self) -> dict:
        return {"n_features": self.n_features_in_,
                "trees": [tree.to_payload() for tree in self.trees_]}

    @classmethod
    def from_payload(cls, payload, **params) -> "RandomForest":
        model = cls(**params)
        model.n_features_in_ = payload["n_features"]
        model.trees_ = [FlatTree.from_payload(p) for p in payload["trees"]]
        model.classes_ = np.array([False, True])
        return model
