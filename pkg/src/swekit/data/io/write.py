from __future__ import annotations

from pathlib import Path
from typing import Any, Mapping


def write_text(path: Path, content: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content, encoding="utf-8")


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6f}"
    if isinstance(value, (list, tuple)):
        return ",".join(_fmt(v) for v in value)
    return str(value)


def format_report(report: Mapping[str, Any]) -> str:
    """Render a report as `key=value` lines (stable key order as given)."""
    return "".join(f"{k}={_fmt(v)}\n" for k, v in report.items())


def write_report(path: Path, report: Mapping[str, Any]) -> None:
    write_text(Path(path), format_report(report))


def parse_report(text: str) -> dict[str, str]:
    """Inverse of format_report; values stay strings."""
    out: dict[str, str] = {}
    for line in text.splitlines():
        key, sep, value = line.partition("=")
        if sep and key.strip():
            out[key.strip()] = value.strip()
    return out


def read_report(path: Path) -> dict[str, str]:
    return parse_report(Path(path).read_text(encoding="utf-8"))
