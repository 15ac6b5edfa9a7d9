"""Ensemble members and their key-value description file.

    member.1.path = artifacts/ours.swe
    member.1.weight = 2
    member.2.path = artifacts/other.swe
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from swekit.common.errors import UsageError
from swekit.data.io.kvfile import load_kv_file
from swekit.domain.embed_core.table import EmbeddingTable

MEMBER_KEY = re.compile(r"^member\.(\d+)\.(path|weight|name)$")
DEFAULT_WEIGHT = 1.0


@dataclass(frozen=True)
class EnsembleMember:
    table: EmbeddingTable
    weight: float = DEFAULT_WEIGHT
    name: str = ""


@dataclass(frozen=True)
class EnsembleSpec:
    members: tuple[EnsembleMember, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(self.members))
        if len(self.members) < 2:
            raise UsageError(f"an ensemble needs at least 2 members, got {len(self.members)}")
        for i, m in enumerate(self.members):
            if not m.weight > 0:
                raise UsageError(f"member {i + 1} weight must be > 0, got {m.weight}")

    @property
    def weights(self) -> np.ndarray:
        return np.asarray([m.weight for m in self.members], dtype=np.float64)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(m.table.dim for m in self.members)

    @property
    def total_dim(self) -> int:
        return int(sum(self.dims))


def make_spec(tables: Sequence[EmbeddingTable], weights: Optional[Sequence[float]] = None) -> EnsembleSpec:
    ws = [DEFAULT_WEIGHT] * len(tables) if weights is None else list(weights)
    if len(ws) != len(tables):
        raise UsageError(f"{len(ws)} weights for {len(tables)} tables")
    return EnsembleSpec(tuple(EnsembleMember(t, float(w)) for t, w in zip(tables, ws)))


def load_ensemble_spec(
    path: str | Path,
    loader: Callable[[Path], EmbeddingTable],
) -> EnsembleSpec:
    """Read member.<i>.path / .weight / .name entries; relative paths resolve against the file."""
    p = Path(path)
    raw = load_kv_file(p)
    entries: dict[int, dict[str, object]] = {}
    for key, value in raw.items():
        m = MEMBER_KEY.match(key)
        if not m:
            raise UsageError(f"{p}: unknown ensemble key {key!r}")
        entries.setdefault(int(m.group(1)), {})[m.group(2)] = value

    members = []
    for idx in sorted(entries):
        e = entries[idx]
        if "path" not in e:
            raise UsageError(f"{p}: member.{idx} has no path")
        mpath = Path(str(e["path"]))
        if not mpath.is_absolute():
            mpath = p.parent / mpath
        weight = DEFAULT_WEIGHT if e.get("weight") is None else float(e["weight"])  # type: ignore[arg-type]
        members.append(EnsembleMember(loader(mpath), weight, str(e.get("name") or mpath.stem)))
    return EnsembleSpec(tuple(members))
