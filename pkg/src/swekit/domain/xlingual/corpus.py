"""Parallel corpora: one "source<TAB>target" pair per line."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from swekit.common.errors import DataError
from swekit.data.io.safe_csv import read_tsv
from swekit.domain.embed_core.sentence import SentenceRecord, make_record

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParallelCorpus:
    sources: tuple[SentenceRecord, ...]
    targets: tuple[SentenceRecord, ...]
    dropped: int = 0

    def __post_init__(self) -> None:
        if len(self.sources) != len(self.targets):
            raise DataError(f"{len(self.sources)} source vs {len(self.targets)} target sentences")

    def __len__(self) -> int:
        return len(self.sources)


def make_parallel_corpus(
    pairs: Sequence[tuple[str, str]],
    src_lang: Optional[str],
    tgt_lang: Optional[str],
    lowercase: bool = True,
) -> ParallelCorpus:
    """Tokenise both sides; pairs with an empty side are dropped and counted."""
    sources, targets = [], []
    dropped = 0
    for src, tgt in pairs:
        s = make_record(src, src_lang, lowercase)
        t = make_record(tgt, tgt_lang, lowercase)
        if s.empty or t.empty:
            dropped += 1
            continue
        sources.append(s)
        targets.append(t)
    if dropped:
        logger.warning(f"dropped {dropped} translation pairs with an empty side")
    return ParallelCorpus(tuple(sources), tuple(targets), dropped)


def read_parallel_tsv(
    path: str | Path,
    src_lang: Optional[str],
    tgt_lang: Optional[str],
    lowercase: bool = True,
) -> ParallelCorpus:
    df = read_tsv(path, names=["source", "target"])
    if df["target"].isna().any():
        raise DataError(f"{path}: every line must hold source<TAB>target")
    corpus = make_parallel_corpus(list(zip(df["source"], df["target"])), src_lang, tgt_lang, lowercase)
    logger.info(f"parallel corpus {path}: {len(corpus)} pairs ({corpus.dropped} dropped)")
    return corpus
