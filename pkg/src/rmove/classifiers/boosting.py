"""Gradient-boosted depth-3 trees with logistic loss.

Each round fits a variance-criterion regression tree to the residuals
y - p, then replaces leaf values with the Newton step
sum(residual) / sum(p * (1 - p)) before adding the scaled tree to the
additive score.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from ..errors import DimensionMismatch
from ..rng import RandomStream, seeded_rng
from .trees import FlatTree, _check_fit_inputs, build_tree

_CLIP = 1e-12


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.clip(x, -60, 60)))


class GradientBoosting(BaseEstimator, ClassifierMixin):
    def __init__(self, rounds=100, learning_rate=0.1, max_depth=3,
                 min_samples_split=2, seed=None):
        self.rounds = rounds
        self.learning_rate = learning_rate
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.seed = seed

    def fit(self, X, y, rng: RandomStream | None = None):
        X, y = _check_fit_inputs(X, y)
        rng = rng or seeded_rng(0 if self.seed is None else self.seed).split("gbt")
        self.n_features_in_ = X.shape[1]
        positive_rate = float(np.clip(y.mean(), _CLIP, 1 - _CLIP))
        self.base_score_ = float(np.log(positive_rate / (1.0 - positive_rate)))
        score = np.full(X.shape[0], self.base_score_)
        self.trees_: list[FlatTree] = []
        for r in range(self.rounds):
            prob = _sigmoid(score)
            residual = y - prob
            tree = build_tree(X, residual, "variance", self.max_depth,
                              self.min_samples_split, None, rng.split(f"round-{r}"))
            # Newton leaf values on the logistic loss
            leaves = tree.leaf_assignment(X)
            hessian = np.maximum(prob * (1.0 - prob), _CLIP)
            for leaf in np.unique(leaves):
                members = leaves == leaf
                tree.value[leaf] = float(residual[members].sum()
                                         / hessian[members].sum())
            self.trees_.append(tree)
            score = score + self.learning_rate * tree.predict_value(X)
        self.classes_ = np.array([False, True])
        return self

    def _validate(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise DimensionMismatch(
                f"expected {self.n_features_in_} features, got {X.shape}")
        return X

    def decision_scores(self, X):
        X = self._validate(X)
        score = np.full(X.shape[0], self.base_score_)
        for tree in self.trees_:
            score = score + self.learning_rate * tree.predict_value(X)
        return score

    def predict_proba(self, X):
        positive = _sigmoid(self.decision_scores(X))
        return np.column_stack([1.0 - positive, positive])

    def predict(self, X):
        return self.predict_proba(X)[:, 1] > 0.5

    def to_payload(self) -> dict:
        return {
            "n_features": self.n_features_in_,
            "base_score": self.base_score_,
            "trees": [tree.to_payload() for tree in self.trees_],
        }

    @classmethod
    def from_payload(cls, payload, **params) -> "GradientBoosting":
        model = cls(**params)
        model.n_features_in_ = payload["n_features"]
        model.base_score_ = payload["base_score"]
        model.trees_ = [FlatTree.from_payload(p) for p in payload["trees"]]
        model.classes_ = np.array([False, True])
        return model
