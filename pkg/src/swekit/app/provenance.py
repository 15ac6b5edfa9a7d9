"""Artifact provenance sidecars (`<artifact>.meta.json`).

A sidecar records the stage, tool version, config hash, seed and the SHA-256
of every input file. It carries no timestamp, so reruns are byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Mapping, Sequence

from swekit._version import __version__
from swekit.app.config import PipelineConfig
from swekit.common.errors import DataError
from swekit.data.io.paths import META_SUFFIX, sidecar_path
from swekit.data.io.write import write_text

logger = logging.getLogger(__name__)

CHUNK = 1 << 20


def file_sha256(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(CHUNK), b""):
            h.update(block)
    return h.hexdigest()


def build_meta(stage: str, cfg: PipelineConfig, inputs: Sequence[str | Path], extra: Mapping[str, Any] | None = None) -> dict[str, Any]:
    meta: dict[str, Any] = {
        "stage": stage,
        "version": __version__,
        "config_hash": cfg.config_hash(),
        "seed": cfg.seed,
        "inputs": {Path(p).name: file_sha256(p) for p in inputs},
    }
    if extra:
        meta["extra"] = dict(extra)
    return meta


def write_meta(artifact: str | Path, meta: Mapping[str, Any]) -> Path:
    p = sidecar_path(artifact, META_SUFFIX)
    write_text(p, json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return p


def read_meta(artifact: str | Path) -> dict[str, Any] | None:
    p = sidecar_path(artifact, META_SUFFIX)
    if not p.exists():
        return None
    return json.loads(p.read_text(encoding="utf-8"))


def should_skip(artifact: str | Path, stage: str, cfg: PipelineConfig, inputs: Sequence[str | Path]) -> bool:
    """True when `artifact` is up to date; a stale artifact under --resume is an error."""
    if not Path(artifact).exists():
        return False
    meta = read_meta(artifact)
    if meta is None:
        return False
    expected = build_meta(stage, cfg, inputs)
    for key in ("stage", "config_hash", "inputs"):
        if meta.get(key) != expected[key]:
            raise DataError(f"{artifact}: {key} differs from the recorded provenance; remove the artifact or drop --resume")
    logger.info(f"resume: {artifact} is up to date, skipping {stage}")
    return True
