"""Neutral facts interchange: one JSON object per line.

Record kinds, in the order a stream must introduce them (references may
only point backwards):

    {"kind":"class","id":...,"project":...}
    {"kind":"method","id":...,"class":...,"name":...}
    {"kind":"call","src":...,"dst":...}
    {"kind":"path_context","method":...,"start":...,"nodes":[...],"end":...}

Export followed by ingest reproduces classes, methods, calls, and path
contexts byte-for-byte, which makes the facts file the canonical on-disk
corpus artifact.
"""

from __future__ import annotations

import json

from ..errors import DanglingReference, MalformedRecord
from ..identifiers import parse_class_id, parse_method_id
from ..paths import DOWN, UP, PathContext, PathSet
from .corpus import ClassRecord, Corpus, MethodRecord


def _require(record: dict, key: str, line_no: int, kind=str):
    value = record.get(key)
    if not isinstance(value, kind) or (kind is str and not value):
        raise MalformedRecord(line_no, f"missing or invalid field {key!r}")
    return value


def _param_types_from_signature(signature: str) -> tuple[str, ...]:
    if "(" not in signature or not signature.endswith(")"):
        return ()
    inner = signature[signature.index("(") + 1:-1]
    return tuple(p for p in inner.split(",") if p) if inner else ()


def ingest_facts(stream: str) -> Corpus:
    project: str | None = None
    classes: dict[str, list[str]] = {}
    methods: dict[str, tuple[MethodRecord, None]] = {}
    calls: list[tuple[str, str]] = []
    contexts: dict[str, list[PathContext]] = {}

    for line_no, raw in enumerate(stream.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(line_no, f"invalid JSON: {exc.msg}") from None
        if not isinstance(record, dict):
            raise MalformedRecord(line_no, "record must be a JSON object")
        kind = record.get("kind")

        if kind == "class":
            class_id = _require(record, "id", line_no)
            record_project = _require(record, "project", line_no)
            try:
                id_project, _ = parse_class_id(class_id)
            except Exception:
                raise MalformedRecord(line_no, f"malformed class id {class_id!r}") from None
            if id_project != record_project:
                raise MalformedRecord(line_no, "class id does not embed its project")
            if project is None:
                project = record_project
            elif project != record_project:
                raise MalformedRecord(line_no, "multiple projects in one facts stream")
            if class_id in classes:
                raise MalformedRecord(line_no, f"duplicate class {class_id!r}")
            classes[class_id] = []

        elif kind == "method":
            method_id = _require(record, "id", line_no)
            class_id = _require(record, "class", line_no)
            name = _require(record, "name", line_no)
            try:
                _, _, signature = parse_method_id(method_id)
            except Exception:
                raise MalformedRecord(line_no, f"malformed method id {method_id!r}") from None
            if class_id not in classes:
                raise DanglingReference("method", class_id)
            if method_id in methods:
                raise MalformedRecord(line_no, f"duplicate method {method_id!r}")
            methods[method_id] = (
                MethodRecord(
                    id=method_id,
                    owner=class_id,
                    name=name,
                    param_types=_param_types_from_signature(signature),
                    body_present=False,
                ),
                None,
            )
            classes[class_id].append(method_id)

        elif kind == "call":
            src = _require(record, "src", line_no)
            dst = _require(record, "dst", line_no)
            if src not in methods:
                raise DanglingReference("call", src)
            if dst not in methods:
                raise DanglingReference("call", dst)
            calls.append((src, dst))

        elif kind == "path_context":
            method_id = _require(record, "method", line_no)
            start = _require(record, "start", line_no)
            end = _require(record, "end", line_no)
            nodes = record.get("nodes")
            if method_id not in methods:
                raise DanglingReference("path_context", method_id)
            if not isinstance(nodes, list) or not nodes:
                raise MalformedRecord(line_no, "nodes must be a non-empty list")
            for entry in nodes:
                if not isinstance(entry, str) or entry[-1:] not in (UP, DOWN):
                    raise MalformedRecord(
                        line_no, f"node {entry!r} lacks a direction mark"
                    )
            contexts.setdefault(method_id, []).append(
                PathContext(start, tuple(nodes), end)
            )

        else:
            raise MalformedRecord(line_no, f"unknown kind {kind!r}")

    class_records = [
        ClassRecord(id=class_id, project=project or "main",
                    methods=tuple(sorted(member_ids)))
        for class_id, member_ids in sorted(classes.items())
    ]
    return Corpus(
        project=project or "main",
        classes=class_records,
        methods=methods,
        raw_calls=sorted(calls),
        imported_contexts={m: tuple(v) for m, v in sorted(contexts.items())},
    )


def _dump(record: dict) -> str:
    return json.dumps(record, ensure_ascii=False, separators=(",", ":"))


def export_facts(corpus: Corpus, pathsets: dict[str, PathSet] | None = None) -> str:
    """Serialize a corpus (and optionally mined path sets) to facts JSONL."""
    lines = []
    for cls in corpus.classes:
        lines.append(_dump({"kind": "class", "id": cls.id, "project": cls.project}))
    for method_id in corpus.method_ids():
        record = corpus.record_of(method_id)
        lines.append(_dump({
            "kind": "method", "id": method_id,
            "class": record.owner, "name": record.name,
        }))
    for src, dst in corpus.raw_calls:
        lines.append(_dump({"kind": "call", "src": src, "dst": dst}))

    if pathsets is None:
        pathsets = {
            method_id: PathSet(method_id, tuple(ctxs))
            for method_id, ctxs in corpus.imported_contexts.items()
        }
    for method_id in sorted(pathsets):
        for ctx in pathsets[method_id].contexts:
            lines.append(_dump({
                "kind": "path_context", "method": method_id,
                "start": ctx.start_token, "nodes": list(ctx.node_types),
                "end": ctx.end_token,
            }))
    return "\n".join(lines) + ("\n" if lines else "")
