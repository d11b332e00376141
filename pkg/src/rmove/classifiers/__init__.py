"""Binary classifiers over hybrid feature vectors.

All expose the estimator surface: fit(X, y[, rng]), predict, and
predict_proba returning columns [P(stay), P(move)].
"""

from .bayes import GaussianNB
from .boosting import GradientBoosting
from .linear import LinearSVM, LogisticRegression
from .trees import DecisionTree, RandomForest

CLASSIFIER_KINDS = {
    "dt": DecisionTree,
    "nb": GaussianNB,
    "svm": LinearSVM,
    "lr": LogisticRegression,
    "rf": RandomForest,
    "gbt": GradientBoosting,
}

# the paper-facing alias: extreme gradient boosting
CLASSIFIER_KINDS["xgb"] = GradientBoosting

__all__ = [
    "DecisionTree",
    "RandomForest",
    "GaussianNB",
    "GradientBoosting",
    "LinearSVM",
    "LogisticRegression",
    "CLASSIFIER_KINDS",
]
