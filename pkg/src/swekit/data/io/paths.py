"""Artifact naming: every stage output carries sidecars named `<artifact><suffix>`."""

from __future__ import annotations

from pathlib import Path

META_SUFFIX = ".meta.json"
VOCAB_SUFFIX = ".vocab.tsv"
HISTORY_SUFFIX = ".history.tsv"
OCCURRENCE_SUFFIX = ".occurrences.tsv"
TRANSFORM_SUFFIX = ".pca.swp"


def sidecar_path(path: str | Path, suffix: str) -> Path:
    """`vectors.swe` + `.meta.json` -> `vectors.swe.meta.json`."""
    p = Path(path)
    return p.with_name(p.name + suffix)
