"""Labeled refactoring instances: (method, source class, target class)."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import MalformedRecord
from .identifiers import owner_class_id


@dataclass(frozen=True)
class MoveMethodTriple:
    method: str
    source_class: str
    target_class: str

    def __post_init__(self):
        if self.source_class == self.target_class:
            raise ValueError("source and target class must differ")
        if owner_class_id(self.method) != self.source_class:
            raise ValueError(
                f"method {self.method!r} does not live in {self.source_class!r}")


def save_triples(triples: list[MoveMethodTriple], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for t in triples:
            fh.write(json.dumps(
                {"method": t.method, "source": t.source_class,
                 "target": t.target_class},
                ensure_ascii=False, separators=(",", ":")))
            fh.write("\n")


def load_triples(path) -> list[MoveMethodTriple]:
    triples = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                triples.append(MoveMethodTriple(
                    record["method"], record["source"], record["target"]))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise MalformedRecord(line_no, str(exc)) from None
    return triples
