"""Logistic regression and a linear hinge-loss SVM.

Logistic regression trains by full-batch gradient descent (no data
randomness, deterministic everywhere).  The SVM minimizes hinge loss
plus L2 by seeded SGD and calibrates probabilities with a Platt-style
sigmoid fitted on its own training margins.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from ..errors import DimensionMismatch
from ..rng import RandomStream, seeded_rng
from .trees import _check_fit_inputs


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.clip(x, -60, 60)))


class LogisticRegression(BaseEstimator, ClassifierMixin):
    def __init__(self, lr=0.5, iterations=500, l2=0.0):
        self.lr = lr
        self.iterations = iterations
        self.l2 = l2

    def fit(self, X, y, rng=None):
        X, y = _check_fit_inputs(X, y)
        self.n_features_in_ = X.shape[1]
        n = X.shape[0]
        weights = np.zeros(X.shape[1])
        bias = 0.0
        for _ in range(self.iterations):
            prob = _sigmoid(X @ weights + bias)
            error = prob - y
            grad_w = X.T @ error / n + self.l2 * weights
            grad_b = error.mean()
            weights -= self.lr * grad_w
            bias -= self.lr * grad_b
        self.weights_ = weights
        self.bias_ = float(bias)
        self.classes_ = np.array([False, True])
        return self

    def _validate(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise DimensionMismatch(
                f"expected {self.n_features_in_} features, got {X.shape}")
        return X

    def decision_scores(self, X):
        return self._validate(X) @ self.weights_ + self.bias_

    def predict_proba(self, X):
        positive = _sigmoid(self.decision_scores(X))
        return np.column_stack([1.0 - positive, positive])

    def predict(self, X):
        return self.predict_proba(X)[:, 1] > 0.5

    def to_payload(self) -> dict:
        return {"n_features": self.n_features_in_,
                "weights": self.weights_.tolist(), "bias": self.bias_}

    @classmethod
    def from_payload(cls, payload, **params) -> "LogisticRegression":
        model = cls(**params)
        model.n_features_in_ = payload["n_features"]
        model.weights_ = np.asarray(payload["weights"])
        model.bias_ = payload["bias"]
        model.classes_ = np.array([False, True])
        return model


class LinearSVM(BaseEstimator, ClassifierMixin):
    def __init__(self, lr=0.1, epochs=200, l2=1e-3, seed=None):
        self.lr = lr
        self.epochs = epochs
        self.l2 = l2
        self.seed = seed

    def fit(self, X, y, rng: RandomStream | None = None):
        X, y = _check_fit_inputs(X, y)
        rng = rng or seeded_rng(0 if self.seed is None else self.seed).split("svm")
        self.n_features_in_ = X.shape[1]
        signs = np.where(y > 0.5, 1.0, -1.0)
        n = X.shape[0]
        weights = np.zeros(X.shape[1])
        bias = 0.0
        step = self.lr
        for epoch in range(self.epochs):
            order = rng.permutation(n)
            for i in order:
                margin = signs[i] * (X[i] @ weights + bias)
                if margin < 1.0:
                    weights = (1.0 - step * self.l2) * weights \
                        + step * signs[i] * X[i]
                    bias += step * signs[i]
                else:
                    weights = (1.0 - step * self.l2) * weights
            step = self.lr / (1.0 + epoch)
        self.weights_ = weights
        self.bias_ = float(bias)
        # Platt-style calibration: 1-d logistic fit on the training margins
        margins = (X @ weights + bias).reshape(-1, 1)
        calibrator = LogisticRegression(lr=0.5, iterations=800)
        calibrator.fit(margins, y)
        self.platt_scale_ = float(calibrator.weights_[0])
        self.platt_offset_ = float(calibrator.bias_)
        self.classes_ = np.array([False, True])
        return self

    def _validate(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise DimensionMismatch(
                f"expected {self.n_features_in_} features, got {X.shape}")
        return X

    def decision_scores(self, X):
        return self._validate(X) @ self.weights_ + self.bias_

    def predict_proba(self, X):
        positive = _sigmoid(self.platt_scale_ * self.decision_scores(X)
                            + self.platt_offset_)
        return np.column_stack([1.0 - positive, positive])

    def predict(self, X):
        return self.predict_proba(X)[:, 1] > 0.5

    def to_payload(self) -> dict:
        return {
            "n_features": self.n_features_in_,
            "weights": self.weights_.tolist(), "bias": self.bias_,
            "platt_scale": self.platt_scale_, "platt_offset": self.platt_offset_,
        }

    @classmethod
    def from_payload(cls, payload, **params) -> "LinearSVM":
        model = cls(**params)
        model.n_features_in_ = payload["n_features"]
        model.weights_ = np.asarray(payload["weights"])
        model.bias_ = payload["bias"]
        model.platt_scale_ = payload["platt_scale"]
        model.platt_offset_ = payload["platt_offset"]
        model.classes_ = np.array([False, True])
        return model
