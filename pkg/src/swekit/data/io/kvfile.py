"""Key-value config files.

Two flavours are accepted:
  *.yaml / *.yml   parsed with PyYAML (a flat mapping)
  anything else    one `key = value` per line, `#` starts a comment

Values are coerced the same way in both: true/false, null/none/empty,
integers and floats; everything else stays a string.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Any

import yaml

from swekit.common.errors import DataError, UsageError

YAML_SUFFIXES = (".yaml", ".yml")


def coerce_value(v: Any) -> Any:
    if not isinstance(v, str):
        return v
    v = v.strip()
    if len(v) >= 2 and v[0] == v[-1] and v[0] in ("'", '"'):
        return v[1:-1]
    lv = v.lower()
    if lv in ("true", "false"):
        return lv == "true"
    if lv in ("null", "none", ""):
        return None
    if re.fullmatch(r"[-+]?\d+", v):
        return int(v)
    if re.fullmatch(r"[-+]?(\d+\.\d*|\.\d+|\d+)([eE][-+]?\d+)?", v):
        return float(v)
    return v


def parse_kv_text(text: str, source: str = "<text>") -> dict[str, Any]:
    out: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{source}:{lineno}: expected key = value, got {raw.strip()!r}")
        k, v = line.split("=", 1)
        k = k.strip()
        if not k:
            raise UsageError(f"{source}:{lineno}: empty key")
        out[k] = coerce_value(v)
    return out


def load_kv_file(path: str | Path) -> dict[str, Any]:
    p = Path(path)
    if not p.exists():
        raise DataError(f"config file not found: {p}")
    text = p.read_text(encoding="utf-8-sig")
    if p.suffix.lower() in YAML_SUFFIXES:
        data = yaml.safe_load(text) or {}
        if not isinstance(data, dict):
            raise UsageError(f"{p}: YAML config must be a mapping, got {type(data).__name__}")
        return {str(k): coerce_value(v) for k, v in data.items()}
    return parse_kv_text(text, str(p))
