"""Recommendation metrics, rank-based significance testing, and the
benchmark table.

A recommendation is correct only when it moves the method to exactly the
ground-truth target class; detecting movability alone does not count.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2

from .recommend import MOVE, Recommendation
from .triples import MoveMethodTriple


@dataclass(frozen=True)
class EvalResult:
    correct: int
    recommended: int
    moved: int
    precision: float
    recall: float
    f1: float
    precision_flagged: bool = False  # no recommendations at all

    def to_json(self) -> str:
        return json.dumps({
            "correct": self.correct, "recommended": self.recommended,
            "moved": self.moved, "precision": self.precision,
            "recall": self.recall, "f1": self.f1,
            "precision_flagged": self.precision_flagged,
        }, sort_keys=True)


def compute_metrics(recommendations: list[Recommendation],
                    ground_truth: list[MoveMethodTriple]) -> EvalResult:
    truth = {(t.method, t.source_class, t.target_class) for t in ground_truth}
    correct = 0
    recommended = 0
    for rec in recommendations:
        if rec.decision != MOVE:
            continue
        recommended += 1
        if (rec.method, rec.source_class, rec.target) in truth:
            correct += 1
    moved = len(truth)
    precision = correct / recommended if recommended else 0.0
    recall = correct / moved if moved else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return EvalResult(
        correct=correct, recommended=recommended, moved=moved,
        precision=precision, recall=recall, f1=f1,
        precision_flagged=recommended == 0,
    )


def kruskal_wallis(groups: list) -> tuple[float, float]:
    """Rank-based H statistic with tie correction; p from the chi-square
    approximation with len(groups)-1 degrees of freedom.

    All-identical observations leave H undefined; by convention the
    result is (0.0, 1.0).
    """
    if len(groups) < 2 or any(len(g) == 0 for g in groups):
        raise ValueError("need at least two non-empty groups")
    values = np.concatenate([np.asarray(g, dtype=np.float64) for g in groups])
    n = len(values)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(n)
    i = 0
    sorted_values = values[order]
    while i < n:
        j = i
        while j + 1 < n and sorted_values[j + 1] == sorted_values[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0  # average rank for ties
        i = j + 1

    if np.all(values == values[0]):
        return 0.0, 1.0

    h = 0.0
    start = 0
    for g in groups:
        group_ranks = ranks[start:start + len(g)]
        h += group_ranks.sum() ** 2 / len(g)
        start += len(g)
    h = 12.0 / (n * (n + 1)) * h - 3.0 * (n + 1)

    # tie correction
    _, counts = np.unique(values, return_counts=True)
    correction = 1.0 - np.sum(counts**3 - counts) / (n**3 - n)
    if correction > 0:
        h /= correction
    p_value = float(chi2.sf(h, df=len(groups) - 1))
    return float(h), p_value


def pairwise_kruskal_wallis(groups: list) -> list[tuple[int, int, float, float]]:
    """All pairwise tests with Bonferroni-corrected p-values (capped at 1)."""
    comparisons = []
    k = len(groups)
    total = k * (k - 1) // 2
    for i in range(k):
        for j in range(i + 1, k):
            h, p = kruskal_wallis([groups[i], groups[j]])
            comparisons.append((i, j, h, min(1.0, p * total)))
    return comparisons


# --- benchmark table -------------------------------------------------------------

BENCH_COLUMNS = ("combo", "classifier", "precision", "recall", "f1",
                 "infer_ms_per_method", "seed")


def benchmark_rows_to_csv(rows: list[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: row[k] for k in BENCH_COLUMNS})
    return buffer.getvalue()


def benchmark_rows_from_csv(text: str) -> list[dict]:
    reader = csv.DictReader(io.StringIO(text))
    rows = []
    for raw in reader:
        rows.append({
            "combo": raw["combo"],
            "classifier": raw["classifier"],
            "precision": float(raw["precision"]),
            "recall": float(raw["recall"]),
            "f1": float(raw["f1"]),
            "infer_ms_per_method": float(raw["infer_ms_per_method"]),
            "seed": int(raw["seed"]),
        })
    return rows


def benchmark_table(rows: list[dict]) -> str:
    header = tuple(BENCH_COLUMNS)
    rendered = [
        tuple(f"{row[c]:.3f}" if isinstance(row[c], float) else str(row[c])
              for c in BENCH_COLUMNS)
        for row in rows
    ]
    widths = [max(len(header[i]), *(len(r[i]) for r in rendered)) if rendered
              else len(header[i]) for i in range(len(header))]

    def fmt(cells):
        return "  ".join(str(c).ljust(widths[i]) for i, c in enumerate(cells))

    lines = [fmt(header), fmt(tuple("-" * w for w in widths))]
    lines.extend(fmt(r) for r in rendered)
    return "\n".join(lines) + "\n"
