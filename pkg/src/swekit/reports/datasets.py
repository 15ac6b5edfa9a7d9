"""Evaluation dataset loaders.

    STS           sent1<TAB>sent2<TAB>score
    retrieval     source lines, target lines, gold "src_idx<TAB>tgt_idx" (0-based)
    tag map       word<TAB>tag
    scored docs   score<TAB>text
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from swekit.common.errors import DataError
from swekit.data.io.safe_csv import read_tsv
from swekit.data.schema.contract import contract_for, validate_df_against_contract

logger = logging.getLogger(__name__)


def _load(path: str | Path, kind: str):
    contract = contract_for(kind)
    df = read_tsv(path, names=list(contract["columns"]))
    result = validate_df_against_contract(df, contract)
    for w in result.warnings:
        logger.warning(f"{path}: {w}")
    result.raise_for_errors(str(path))
    return df


@dataclass(frozen=True)
class StsDataset:
    sent1: tuple[str, ...]
    sent2: tuple[str, ...]
    gold: np.ndarray

    def __post_init__(self) -> None:
        if not len(self.sent1) == len(self.sent2) == len(self.gold):
            raise DataError("STS columns differ in length")
        if len(self.gold) < 2:
            raise DataError(f"STS dataset needs at least 2 pairs, got {len(self.gold)}")
        if not np.all(np.isfinite(self.gold)):
            raise DataError("STS gold scores must be finite")

    def __len__(self) -> int:
        return len(self.gold)


def load_sts_dataset(path: str | Path) -> StsDataset:
    df = _load(path, "sts")
    return StsDataset(tuple(df["sent1"]), tuple(df["sent2"]), df["score"].astype(float).to_numpy())


@dataclass(frozen=True)
class RetrievalDataset:
    sources: tuple[str, ...]
    targets: tuple[str, ...]
    gold: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if not self.sources or not self.targets:
            raise DataError("retrieval dataset has an empty side")
        for s, t in self.gold:
            if not (0 <= s < len(self.sources) and 0 <= t < len(self.targets)):
                raise DataError(f"gold pair ({s}, {t}) out of range")


def identity_retrieval_dataset(sources, targets) -> RetrievalDataset:
    """Line i of the sources is the translation of line i of the targets."""
    n = min(len(sources), len(targets))
    return RetrievalDataset(tuple(sources), tuple(targets), frozenset((i, i) for i in range(n)))


def _read_lines(path: str | Path) -> tuple[str, ...]:
    p = Path(path)
    if not p.exists():
        raise DataError(f"file not found: {p}")
    return tuple(p.read_text(encoding="utf-8").splitlines())


def load_retrieval_dataset(src_path: str | Path, tgt_path: str | Path, gold_path: str | Path | None = None) -> RetrievalDataset:
    sources, targets = _read_lines(src_path), _read_lines(tgt_path)
    if gold_path is None:
        return identity_retrieval_dataset(sources, targets)
    df = _load(gold_path, "gold_pairs")
    gold = frozenset(zip(df["src_idx"].astype(int), df["tgt_idx"].astype(int)))
    return RetrievalDataset(sources, targets, gold)


def load_tag_map(path: str | Path) -> dict[str, str]:
    df = _load(path, "tag_map").drop_duplicates("word", keep="first")
    return dict(zip(df["word"], df["tag"]))


@dataclass(frozen=True)
class ScoredDocs:
    texts: tuple[str, ...]
    scores: np.ndarray


def load_scored_docs(path: str | Path) -> ScoredDocs:
    df = _load(path, "scored_docs")
    return ScoredDocs(tuple(df["text"]), df["score"].astype(float).to_numpy())
