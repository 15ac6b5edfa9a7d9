from __future__ import annotations
import json
import os
from pathlib import Path
from typing import Any

from swekit.common.errors import UsageError


def load_presets() -> dict[str, dict[str, Any]]:
    # 1) optional override via env var
    env = os.getenv("SWEKIT_PRESETS_PATH")
    candidates: list[Path] = []
    if env:
        candidates.append(Path(env))

    # 2) default: next to this file
    candidates.append(Path(__file__).with_name("presets.json"))

    for path in candidates:
        if path.exists():
            try:
                data = json.loads(path.read_text(encoding="utf-8-sig"))  # BOM-safe
            except json.JSONDecodeError as e:
                raise UsageError(f"presets could not be parsed: {path}: {e}") from e

            if not isinstance(data, dict):
                raise UsageError(f"presets.json must be an object, got {type(data).__name__} ({path})")
            return data

    looked = "\n".join(str(p) for p in candidates)
    raise FileNotFoundError("presets.json not found. Looked in:\n" + looked)


def get_preset(name: str) -> dict[str, Any]:
    """Parameter overrides of one preset (its `description` is dropped)."""
    presets = load_presets()
    if name not in presets:
        raise UsageError(f"unknown preset {name!r}; available: {', '.join(sorted(presets))}")
    preset = presets[name]
    params = preset.get("params", {})
    if not isinstance(params, dict):
        raise UsageError(f"preset {name!r}: 'params' must be an object")
    return dict(params)
