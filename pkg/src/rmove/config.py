"""Run configuration: one flat key=value file drives every stage.

Defaults follow the published hyper-parameter settings of the embedding
techniques (walk counts, window sizes, negative ratios, epochs, spectral
band parameters).  ``dims`` is the shared embedding width; a technique
key like ``grarep_dim`` set to a non-zero value overrides it.  The
walklets width defaults to 130 because it must divide evenly across the
five scales.
"""

from __future__ import annotations

import dataclasses
import hashlib
from dataclasses import dataclass

from .errors import ConfigError


@dataclass
class Config:
    # global
    seed: int = 42
    dims: int = 128
    alpha: float = 0.5          # fusion weight on the code half
    tau: float = 0.5            # inference threshold on move probability
    top_k: int = 1
    min_count: int = 1          # vocabulary frequency floor
    compare_source: bool = True  # Move also requires beating the source pairing

    # path mining
    max_path_length: int = 9
    max_path_width: int = 25
    max_contexts: int = 200

    # skip-gram family (deepwalk / node2vec / walklets)
    sg_batch: int = 1024
    sg_lr: float = 0.5
    deepwalk_dim: int = 0
    deepwalk_num_walks: int = 10
    deepwalk_walk_length: int = 80
    deepwalk_window: int = 10
    deepwalk_negatives: int = 5
    deepwalk_epochs: int = 5
    node2vec_dim: int = 0
    node2vec_p: float = 0.25
    node2vec_q: float = 0.25
    node2vec_num_walks: int = 10
    node2vec_walk_length: int = 80
    node2vec_window: int = 10
    node2vec_negatives: int = 5
    node2vec_epochs: int = 5
    walklets_dim: int = 130
    walklets_scales: int = 5
    walklets_num_walks: int = 5
    walklets_walk_length: int = 80
    walklets_negatives: int = 5
    walklets_epochs: int = 5

    # matrix / spectral / autoencoder techniques
    grarep_dim: int = 0
    grarep_kstep: int = 4
    line_dim: int = 0
    line_order: int = 3
    line_negative_ratio: int = 5
    line_epochs: int = 20
    line_lr: float = 0.5
    prone_dim: int = 0
    prone_step: int = 10
    prone_theta: float = 0.5
    prone_mu: float = 0.2
    sdne_dim: int = 0
    sdne_alpha: float = 1e-6
    sdne_beta: float = 5.0
    sdne_nu1: float = 1e-5
    sdne_nu2: float = 1e-4
    sdne_batch: int = 200
    sdne_epochs: int = 100
    sdne_lr: float = 1.0

    # code encoders
    code2vec_dim: int = 0       # method vector width
    code2vec_token_dim: int = 128
    code2vec_path_dim: int = 128
    code2vec_epochs: int = 20
    code2vec_batch: int = 1024
    code2vec_lr: float = 0.5
    code2seq_dim: int = 0
    code2seq_token_dim: int = 128
    code2seq_node_dim: int = 128
    code2seq_epochs: int = 3000
    code2seq_batch: int = 256
    code2seq_lr: float = 0.5

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha must be in [0,1], got {self.alpha}")
        if not 0.0 < self.tau < 1.0:
            raise ConfigError(f"tau must be in (0,1), got {self.tau}")
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.type == "int" and f.name not in ("seed",) and not f.name.endswith("_dim"):
                if value <= 0:
                    raise ConfigError(f"{f.name} must be positive, got {value}")
            if f.name.endswith("_dim") and value < 0:
                raise ConfigError(f"{f.name} must be >= 0 (0 inherits dims)")
        if self.node2vec_p <= 0 or self.node2vec_q <= 0:
            raise ConfigError("node2vec p and q must be positive")
        if self.line_order not in (1, 2, 3):
            raise ConfigError(f"line_order must be 1, 2, or 3, got {self.line_order}")

    def dim_for(self, technique: str) -> int:
        """Effective configured width for a technique (0 falls back to dims)."""
        override = getattr(self, f"{technique}_dim", 0)
        return override if override else self.dims

    # --- flat text format ----------------------------------------------------

    def to_text(self) -> str:
        lines = ["# rmove configuration"]
        for f in dataclasses.fields(self):
            lines.append(f"{f.name} = {_format_value(getattr(self, f.name))}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Config":
        fields = {f.name: f for f in dataclasses.fields(cls)}
        values = {}
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {line_no}: expected 'key = value', got {raw!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in fields:
                raise ConfigError(f"line {line_no}: unknown key {key!r}")
            if key in values:
                raise ConfigError(f"line {line_no}: duplicate key {key!r}")
            values[key] = _parse_value(fields[key].type, key, value)
        return cls(**values)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path) -> "Config":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def content_hash(self) -> str:
        return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()

    def replace(self, **changes) -> "Config":
        return dataclasses.replace(self, **changes)


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value) if isinstance(value, float) else str(value)


def _parse_value(type_name: str, key: str, text: str):
    try:
        if type_name == "bool":
            if text not in ("true", "false"):
                raise ValueError(text)
            return text == "true"
        if type_name == "int":
            return int(text)
        if type_name == "float":
            return float(text)
    except ValueError:
        raise ConfigError(f"bad value {text!r} for key {key!r}") from None
    raise ConfigError(f"unsupported field type {type_name} for {key!r}")
