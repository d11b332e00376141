"""Vocabulary over path-context tokens, path symbols, node types, and
method-name targets.

Index 0 is UNK and index 1 is PAD in every space; everything else is
assigned densely in sorted order over the items that survive the
min_count frequency floor.  The token space holds both full endpoint
tokens and their subtokens, so either encoder can look up what it needs.
Target labels are the method-name subtokens re-joined with ``|``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass

from ..errors import EmptyCorpus
from ..identifiers import parse_method_id
from ..paths import PathSet, subtokenize

UNK = 0
PAD = 1
_RESERVED = 2


@dataclass(frozen=True)
class Vocabulary:
    token_to_index: dict
    path_to_index: dict
    node_type_to_index: dict
    target_name_to_index: dict
    min_count: int

    def token(self, text: str) -> int:
        return self.token_to_index.get(text, UNK)

    def path(self, symbol: str) -> int:
        return self.path_to_index.get(symbol, UNK)

    def node_type(self, label: str) -> int:
        return self.node_type_to_index.get(label, UNK)

    def target(self, label: str) -> int:
        return self.target_name_to_index.get(label, UNK)

    @property
    def n_tokens(self) -> int:
        return len(self.token_to_index) + _RESERVED

    @property
    def n_paths(self) -> int:
        return len(self.path_to_index) + _RESERVED

    @property
    def n_node_types(self) -> int:
        return len(self.node_type_to_index) + _RESERVED

    @property
    def n_targets(self) -> int:
        return len(self.target_name_to_index) + _RESERVED


def target_label(method_id: str) -> str:
    _, _, signature = parse_method_id(method_id)
    name = signature.split("(", 1)[0]
    return "|".join(subtokenize(name))


def _index(counts: Counter, min_count: int) -> dict:
    kept = sorted(item for item, count in counts.items() if count >= min_count)
    return {item: i + _RESERVED for i, item in enumerate(kept)}


def build_vocab(pathsets: list[PathSet], min_count: int = 1) -> Vocabulary:
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    if not pathsets:
        raise EmptyCorpus("no path sets to build a vocabulary from")
    tokens: Counter = Counter()
    paths: Counter = Counter()
    node_types: Counter = Counter()
    targets: Counter = Counter()
    for pathset in pathsets:
        targets[target_label(pathset.method)] += 1
        for ctx in pathset.contexts:
            for endpoint in (ctx.start_token, ctx.end_token):
                tokens[endpoint] += 1
                for sub in subtokenize(endpoint):
                    if sub != endpoint:  # atomic tokens count once
                        tokens[sub] += 1
            paths[ctx.path_symbol()] += 1
            for label in ctx.node_types:
                node_types[label] += 1
    return Vocabulary(
        token_to_index=_index(tokens, min_count),
        path_to_index=_index(paths, min_count),
        node_type_to_index=_index(node_types, min_count),
        target_name_to_index=_index(targets, min_count),
        min_count=min_count,
    )


def save_vocab(vocab: Vocabulary, path) -> None:
    payload = {
        "min_count": vocab.min_count,
        "tokens": vocab.token_to_index,
        "paths": vocab.path_to_index,
        "node_types": vocab.node_type_to_index,
        "targets": vocab.target_name_to_index,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, sort_keys=True, indent=0)
        fh.write("\n")


def load_vocab(path) -> Vocabulary:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    return Vocabulary(
        token_to_index=payload["tokens"],
        path_to_index=payload["paths"],
        node_type_to_index=payload["node_types"],
        target_name_to_index=payload["targets"],
        min_count=payload["min_count"],
    )
