"""Gaussian naive Bayes: independent per-feature normals per class."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from ..errors import DimensionMismatch
from .trees import _check_fit_inputs

VAR_SMOOTHING = 1e-9


class GaussianNB(BaseEstimator, ClassifierMixin):
    def __init__(self, var_smoothing=VAR_SMOOTHING):
        self.var_smoothing = var_smoothing

    def fit(self, X, y, rng=None):
        X, y = _check_fit_inputs(X, y)
        self.n_features_in_ = X.shape[1]
        labels = y > 0.5
        self.priors_ = np.array([np.mean(~labels), np.mean(labels)])
        self.means_ = np.stack([X[~labels].mean(axis=0), X[labels].mean(axis=0)])
        raw_var = np.stack([X[~labels].var(axis=0), X[labels].var(axis=0)])
        floor = self.var_smoothing * max(float(X.var(axis=0).max()), 1.0)
        self.vars_ = raw_var + floor
        self.classes_ = np.array([False, True])
        return self

    def _log_joint(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise DimensionMismatch(
                f"expected {self.n_features_in_} features, got {X.shape}")
        out = np.empty((X.shape[0], 2))
        for k in range(2):
            diff = X - self.means_[k]
            out[:, k] = (
                np.log(self.priors_[k])
                - 0.5 * np.sum(np.log(2.0 * np.pi * self.vars_[k]))
                - 0.5 * np.sum(diff**2 / self.vars_[k], axis=1)
            )
        return out

    def predict_proba(self, X):
        joint = self._log_joint(X)
        shifted = joint - joint.max(axis=1, keepdims=True)
        unnorm = np.exp(shifted)
        return unnorm / unnorm.sum(axis=1, keepdims=True)

    def predict(self, X):
        return self.predict_proba(X)[:, 1] > 0.5

    def to_payload(self) -> dict:
        return {
            "n_features": self.n_features_in_,
            "priors": self.priors_.tolist(),
            "means": self.means_.tolist(),
            "vars": self.vars_.tolist(),
        }

    @classmethod
    def from_payload(cls, payload, **params) -> "GaussianNB":
        model = cls(**params)
        model.n_features_in_ = payload["n_features"]
        model.priors_ = np.asarray(payload["priors"])
        model.means_ = np.asarray(payload["means"])
        model.vars_ = np.asarray(payload["vars"])
        model.classes_ = np.array([False, True])
        return model
