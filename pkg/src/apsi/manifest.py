"""Reproducibility manifests written alongside output files.

A manifest records everything a rerun needs to reproduce an output
byte-for-byte: the command, the resolved configuration, sha256 digests of
every input file, and the seed.  It is written as a sidecar
(``<output>.manifest.json``) so the output itself stays byte-identical
across reruns; duration is informational only.
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import __version__
from .errors import InputError


def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    try:
        with open(path, "rb") as handle:
            for chunk in iter(lambda: handle.read(1 << 20), b""):
                digest.update(chunk)
    except OSError as exc:
        raise InputError(f"cannot digest {path}: {exc}") from exc
    return digest.hexdigest()


@dataclass
class RunManifest:
    command: list[str]
    config: dict
    inputs: dict[str, dict] = field(default_factory=dict)
    seed: Optional[int] = None
    tool_version: str = __version__
    duration_seconds: Optional[float] = None

    @classmethod
    def start(cls, config: dict, seed: Optional[int] = None) -> "RunManifest":
        return cls(command=list(sys.argv), config=config, seed=seed)

    def add_input(self, name: str, path: Optional[str]) -> None:
        if path is None:
            return
        self.inputs[name] = {"path": str(path), "sha256": sha256_file(path)}

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "inputs": self.inputs,
            "seed": self.seed,
            "tool_version": self.tool_version,
            "duration_seconds": self.duration_seconds,
        }

    def write_for(self, output_path: str) -> str:
        sidecar = str(output_path) + ".manifest.json"
        Path(sidecar).write_text(
            json.dumps(self.to_json(), indent=2) + "\n", encoding="utf-8"
        )
        return sidecar
