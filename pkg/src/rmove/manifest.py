"""Pipeline manifest: stage input/output hashes in the workspace.

Before a stage runs, every input file that an earlier stage recorded as
an output must still hash to the recorded value; otherwise the stage
refuses (exit 3) unless forced.  Stages re-record their outputs after
every successful run.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .errors import ArtifactError

MANIFEST_NAME = "rmove-manifest.json"


def file_hash(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


class Manifest:
    def __init__(self, workspace):
        self.workspace = Path(workspace)
        self.path = self.workspace / MANIFEST_NAME
        if self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                self.stages = json.load(fh).get("stages", {})
        else:
            self.stages = {}

    def _relative(self, path) -> str:
        path = Path(path)
        try:
            return str(path.relative_to(self.workspace))
        except ValueError:
            return str(path)

    def recorded_output_hash(self, path) -> str | None:
        rel = self._relative(path)
        found = None
        for stage in self.stages.values():
            if rel in stage.get("outputs", {}):
                found = stage["outputs"][rel]
        return found

    def verify_inputs(self, paths, force: bool = False) -> None:
        for path in paths:
            path = Path(path)
            if not path.exists():
                raise ArtifactError(f"missing input {path}")
            recorded = self.recorded_output_hash(path)
            if recorded is None:
                continue
            actual = file_hash(path)
            if actual != recorded and not force:
                raise ArtifactError(
                    f"{path}: content changed since it was produced "
                    f"(recorded {recorded[:12]}, found {actual[:12]}); "
                    f"re-run the producing stage or pass --force")

    def record(self, stage: str, inputs: list, outputs: list,
               config_hash: str, seed: int) -> None:
        self.stages[stage] = {
            "inputs": {self._relative(p): file_hash(p) for p in inputs},
            "outputs": {self._relative(p): file_hash(p) for p in outputs},
            "config_hash": config_hash,
            "seed": seed,
        }
        self.workspace.mkdir(parents=True, exist_ok=True)
        with open(self.path, "w", encoding="utf-8") as fh:
            json.dump({"stages": self.stages}, fh, ensure_ascii=False,
                      sort_keys=True, indent=2)
            fh.write("\n")

    def output_hashes(self) -> dict:
        return {
            stage: dict(sorted(entry.get("outputs", {}).items()))
            for stage, entry in sorted(self.stages.items())
        }
