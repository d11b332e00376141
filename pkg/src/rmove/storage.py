"""Binary persistence for embeddings and labeled samples.

Embedding file layout (little-endian):

    magic  b"RMEMB1"
    u8     tag length, then that many ASCII bytes (technique / encoder tag)
    u32    dim
    u32    row count
    f32    rows * dim values, row-major

A sidecar ``<path>.json`` maps ids to row indices and carries the
recorded parameters, so the binary stays dumb and diffable tooling can
read the index.  Sample files ("RMSMP1") follow the same spirit.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import ArtifactError

EMBEDDING_MAGIC = b"RMEMB1"
SAMPLES_MAGIC = b"RMSMP1"


def _json_dumps(payload) -> str:
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=0)


def save_embedding(path, tag: str, ids: list[str], matrix: np.ndarray,
                   params: dict | None = None) -> None:
    matrix = np.asarray(matrix, dtype=np.float32)
    if matrix.ndim != 2 or matrix.shape[0] != len(ids):
        raise ArtifactError("embedding matrix shape does not match id count")
    tag_bytes = tag.encode("ascii")
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(EMBEDDING_MAGIC)
        fh.write(struct.pack("<B", len(tag_bytes)))
        fh.write(tag_bytes)
        fh.write(struct.pack("<II", matrix.shape[1], matrix.shape[0]))
        fh.write(matrix.astype("<f4").tobytes(order="C"))
    sidecar = {
        "tag": tag,
        "dim": int(matrix.shape[1]),
        "rows": {entity_id: row for row, entity_id in enumerate(ids)},
        "params": params or {},
    }
    with open(str(path) + ".json", "w", encoding="utf-8") as fh:
        fh.write(_json_dumps(sidecar))
        fh.write("\n")


def load_embedding(path) -> tuple[str, list[str], np.ndarray, dict]:
    path = Path(path)
    with open(path, "rb") as fh:
        magic = fh.read(6)
        if magic != EMBEDDING_MAGIC:
            raise ArtifactError(f"{path}: not an embedding file")
        (tag_len,) = struct.unpack("<B", fh.read(1))
        tag = fh.read(tag_len).decode("ascii")
        dim, rows = struct.unpack("<II", fh.read(8))
        data = np.frombuffer(fh.read(4 * dim * rows), dtype="<f4")
        if data.size != dim * rows:
            raise ArtifactError(f"{path}: truncated embedding data")
        matrix = data.reshape(rows, dim)
    with open(str(path) + ".json", encoding="utf-8") as fh:
        sidecar = json.load(fh)
    if sidecar.get("dim") != dim or len(sidecar.get("rows", {})) != rows:
        raise ArtifactError(f"{path}: sidecar does not match binary header")
    ids = [None] * rows
    for entity_id, row in sidecar["rows"].items():
        ids[row] = entity_id
    if any(v is None for v in ids):
        raise ArtifactError(f"{path}: sidecar row map is not a bijection")
    return tag, ids, matrix, sidecar.get("params", {})


def save_samples(path, features: np.ndarray, labels: np.ndarray,
                 provenance: list[dict]) -> None:
    features = np.asarray(features, dtype=np.float32)
    labels = np.asarray(labels, dtype=np.uint8)
    if features.shape[0] != labels.shape[0] or features.shape[0] != len(provenance):
        raise ArtifactError("sample arrays and provenance length mismatch")
    with open(path, "wb") as fh:
        fh.write(SAMPLES_MAGIC)
        fh.write(struct.pack("<II", features.shape[1] if features.size else 0,
                             features.shape[0]))
        fh.write(features.astype("<f4").tobytes(order="C"))
        fh.write(labels.tobytes(order="C"))
        blob = "\n".join(
            json.dumps(p, ensure_ascii=False, sort_keys=True,
                       separators=(",", ":"))
            for p in provenance)
        fh.write(blob.encode("utf-8"))


def load_samples(path) -> tuple[np.ndarray, np.ndarray, list[dict]]:
    with open(path, "rb") as fh:
        magic = fh.read(6)
        if magic != SAMPLES_MAGIC:
            raise ArtifactError(f"{path}: not a samples file")
        dim, count = struct.unpack("<II", fh.read(8))
        features = np.frombuffer(fh.read(4 * dim * count), dtype="<f4").reshape(count, dim)
        labels = np.frombuffer(fh.read(count), dtype=np.uint8)
        rest = fh.read().decode("utf-8")
    provenance = [json.loads(line) for line in rest.splitlines() if line]
    if len(provenance) != count:
        raise ArtifactError(f"{path}: provenance count mismatch")
    return features, labels.astype(bool), provenance
