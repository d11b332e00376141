"""Splittable seeded randomness.

Every stage draws from a child stream obtained via ``split(label)``, so
adding or reordering stages never perturbs another stage's randomness.
Child keys are derived by hashing the parent key with the label, which
makes them independent of how much the parent (or any sibling) has
already consumed.
"""

from __future__ import annotations

import hashlib

import numpy as np


class RandomStream:
    """A numpy Generator plus a stable key it was derived from.

    Unknown attributes delegate to the underlying ``numpy.random.Generator``,
    so ``stream.random()``, ``stream.integers(...)`` etc. work directly.
    """

    def __init__(self, key: bytes):
        self.key = key
        self._gen: np.random.Generator | None = None

    @property
    def generator(self) -> np.random.Generator:
        if self._gen is None:
            seed = int.from_bytes(hashlib.sha256(self.key).digest()[:8], "little")
            self._gen = np.random.Generator(np.random.PCG64(seed))
        return self._gen

    def split(self, label: str) -> "RandomStream":
        """Derive a child stream; depends only on this stream's key and label."""
        child_key = hashlib.sha256(self.key + b"/" + label.encode("utf-8")).digest()
        return RandomStream(child_key)

    def __getattr__(self, name):
        return getattr(self.generator, name)

    def __repr__(self):
        return f"RandomStream({self.key.hex()[:12]}...)"


def seeded_rng(seed: int) -> RandomStream:
    """Root stream for a 64-bit seed (negative seeds allowed)."""
    key = int(seed).to_bytes(8, "little", signed=True)
    return RandomStream(b"rmove-root:" + key)
