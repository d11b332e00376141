"""Inference: rank candidate target classes per method and decide moves.

Candidates are the same-project classes other than the owner, minus
empty-flagged classes, optionally restricted to classes linked to the
method by a call edge or a shared path-context token.  A method moves
only when its best candidate clears the probability threshold and (by
default) also beats the method-beside-its-own-class pairing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .config import Config
from .fusion import HybridSpace
from .parallel import parallel_map
from .training import TrainedModel

MOVE = "move"
STAY = "stay"


@dataclass(frozen=True)
class Recommendation:
    method: str
    source_class: str
    ranked: tuple            # ((class_id, probability), ...) best first
    decision: str            # MOVE or STAY
    target: str | None = None
    source_probability: float = 0.0


def score_pair(model: TrainedModel, method_vector, class_vector) -> float:
    features = np.concatenate([method_vector, class_vector])[None, :]
    return float(model.predict_proba(features)[0, 1])


def _linked_classes(corpus, mdg, pathsets) -> dict[str, set]:
    """Classes sharing a call edge or a path-context token with each method."""
    out: dict[str, set] = {m: set() for m in corpus.method_ids()}
    owner = {m: corpus.record_of(m).owner for m in corpus.method_ids()}
    if mdg is not None:
        for s, d in mdg.edges:
            src, dst = mdg.nodes[s], mdg.nodes[d]
            out[src].add(owner[dst])
            out[dst].add(owner[src])
    if pathsets is not None:
        tokens_by_method = {
            m: {t for c in ps.contexts for t in (c.start_token, c.end_token)}
            for m, ps in pathsets.items()
        }
        tokens_by_class: dict[str, set] = {}
        for m, tokens in tokens_by_method.items():
            tokens_by_class.setdefault(owner[m], set()).update(tokens)
        for m, tokens in tokens_by_method.items():
            for class_id, class_tokens in tokens_by_class.items():
                if tokens & class_tokens:
                    out[m].add(class_id)
    return out


def recommend_moves(
    model: TrainedModel,
    corpus,
    hybrids: HybridSpace,
    cfg: Config,
    linked_only: bool = False,
    mdg=None,
    pathsets=None,
    workers: int = 1,
) -> list[Recommendation]:
    method_ids = corpus.method_ids()
    linked = (_linked_classes(corpus, mdg, pathsets)
              if linked_only else None)
    candidate_lists = {}
    for method_id in method_ids:
        owner = corpus.record_of(method_id).owner
        candidates = [c for c in hybrids.class_ids
                      if c != owner and c not in hybrids.empty_classes]
        if linked is not None:
            candidates = [c for c in candidates if c in linked[method_id]]
        candidate_lists[method_id] = (owner, candidates)

    def score_chunk(chunk: list[str]) -> list[Recommendation]:
        rows = []
        spans = []
        for method_id in chunk:
            owner, candidates = candidate_lists[method_id]
            method_vec = hybrids.method_vector(method_id)
            start = len(rows)
            rows.append(np.concatenate([method_vec, hybrids.class_vector(owner)]))
            for candidate in candidates:
                rows.append(np.concatenate(
                    [method_vec, hybrids.class_vector(candidate)]))
            spans.append((method_id, owner, candidates, start))
        if rows:
            probabilities = model.predict_proba(np.asarray(rows))[:, 1]
        results = []
        for method_id, owner, candidates, start in spans:
            source_probability = float(probabilities[start])
            scored = [(candidates[i], float(probabilities[start + 1 + i]))
                      for i in range(len(candidates))]
            scored.sort(key=lambda item: (-item[1], item[0]))
            decision, target = STAY, None
            if scored:
                best_class, best_prob = scored[0]
                beats_source = (best_prob > source_probability
                                or not cfg.compare_source)
                if best_prob > cfg.tau and beats_source:
                    decision, target = MOVE, best_class
            results.append(Recommendation(
                method=method_id,
                source_class=owner,
                ranked=tuple(scored[:cfg.top_k]),
                decision=decision,
                target=target,
                source_probability=source_probability,
            ))
        return results

    chunk_size = max(1, (len(method_ids) + workers - 1) // workers)
    chunks = [method_ids[i:i + chunk_size]
              for i in range(0, len(method_ids), chunk_size)]
    nested = parallel_map(score_chunk, chunks, workers)
    recommendations = [r for chunk in nested for r in chunk]
    recommendations.sort(key=lambda r: r.method)
    return recommendations


# --- report rendering ------------------------------------------------------------

def render_json_lines(recommendations: list[Recommendation]) -> str:
    lines = []
    moves = 0
    for rec in recommendations:
        moves += int(rec.decision == MOVE)
        lines.append(json.dumps({
            "method": rec.method,
            "source": rec.source_class,
            "decision": (f"move:{rec.target}" if rec.decision == MOVE else STAY),
            "ranked": [{"class": c, "prob": p} for c, p in rec.ranked],
        }, ensure_ascii=False, separators=(",", ":")))
    lines.append(json.dumps({
        "summary": {"methods": len(recommendations), "moves": moves,
                    "stays": len(recommendations) - moves},
    }, ensure_ascii=False, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def parse_json_lines(text: str) -> list[Recommendation]:
    recommendations = []
    for line in text.splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        if "summary" in record:
            continue
        decision = record["decision"]
        moved = decision.startswith("move:")
        recommendations.append(Recommendation(
            method=record["method"],
            source_class=record["source"],
            ranked=tuple((r["class"], r["prob"]) for r in record["ranked"]),
            decision=MOVE if moved else STAY,
            target=decision.split(":", 1)[1] if moved else None,
        ))
    return recommendations


def render_table(recommendations: list[Recommendation]) -> str:
    headers = ("method", "decision", "best candidate", "prob")
    rows = []
    for rec in recommendations:
        best = rec.ranked[0] if rec.ranked else ("-", 0.0)
        rows.append((rec.method,
                     f"move -> {rec.target}" if rec.decision == MOVE else STAY,
                     best[0], f"{best[1]:.3f}"))
    widths = [max(len(headers[i]), *(len(r[i]) for r in rows)) if rows
              else len(headers[i]) for i in range(4)]
    def fmt(row):
        return "  ".join(str(cell).ljust(widths[i]) for i, cell in enumerate(row))
    lines = [fmt(headers), fmt(tuple("-" * w for w in widths))]
    lines.extend(fmt(row) for row in rows)
    moves = sum(r.decision == MOVE for r in recommendations)
    lines.append(f"-- {len(recommendations)} methods, {moves} move, "
                 f"{len(recommendations) - moves} stay")
    return "\n".join(lines) + "\n"
