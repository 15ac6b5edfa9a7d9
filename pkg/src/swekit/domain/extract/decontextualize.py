"""swekit.domain.extract.decontextualize

Static embedding of a word = arithmetic mean of its first `max_occurrences`
contextual vectors in dump order.

Words without any occurrence keep a zero row and are reported; records for
words outside the vocabulary are skipped and counted. Sums and counts are
accumulated in float64, in stream order, so reruns are bit-identical.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from swekit.common.errors import DataError, UsageError
from swekit.data.io.safe_csv import to_tsv_safely
from swekit.domain.embed_core.table import EmbeddingTable, StageTag
from swekit.domain.embed_core.vocab import Vocabulary, split_tag
from swekit.domain.extract.dump import OccurrenceDump

logger = logging.getLogger(__name__)

DEFAULT_MAX_OCCURRENCES = 100


@dataclass(frozen=True)
class Decontextualized:
    table: EmbeddingTable
    counts: np.ndarray
    skipped_records: int

    @property
    def zero_words(self) -> list[str]:
        return [w for w, c in zip(self.table.vocab.words, self.counts) if c == 0]

    def occurrence_report(self, max_occurrences: int) -> pd.DataFrame:
        """Words averaged over fewer than `max_occurrences` vectors (zero included)."""
        words = np.asarray(self.table.vocab.words, dtype=object)
        short = self.counts < max_occurrences
        return pd.DataFrame({"word": words[short], "occurrences": self.counts[short]})


def _dump_to_vocab_ids(dump_words: list[str], vocab: Vocabulary, language: Optional[str] = None) -> np.ndarray:
    ids = np.full(len(dump_words), -1, dtype=np.int64)
    for i, w in enumerate(dump_words):
        j = vocab.id_of(w, language)
        if j is None:
            lang, plain = split_tag(w)
            if lang is not None:
                j = vocab.id_of(plain, lang)
        if j is not None:
            ids[i] = j
    return ids


def decontextualize(
    dump: OccurrenceDump,
    vocab: Vocabulary,
    max_occurrences: int = DEFAULT_MAX_OCCURRENCES,
    language: Optional[str] = None,
) -> Decontextualized:
    return decontextualize_many([(dump, language)], vocab, max_occurrences)


def decontextualize_many(
    sources: Sequence[tuple[OccurrenceDump, Optional[str]]],
    vocab: Vocabulary,
    max_occurrences: int = DEFAULT_MAX_OCCURRENCES,
) -> Decontextualized:
    """Several dumps into one table (one per language for a joint vocabulary), in the given order."""
    if max_occurrences < 1:
        raise UsageError(f"max_occurrences must be >= 1, got {max_occurrences}")
    if not sources:
        raise UsageError("no dump given")
    dims = {dump.dim for dump, _ in sources}
    if len(dims) != 1:
        raise DataError(f"dumps disagree on dimension: {sorted(dims)}")

    n, d = len(vocab), dims.pop()
    sums = np.zeros((n, d), dtype=np.float64)
    counts = np.zeros(n, dtype=np.int64)
    skipped = 0
    for dump, language in sources:
        skipped += _accumulate(dump, vocab, language, max_occurrences, sums, counts)

    return _finish(vocab, sums, counts, skipped, max_occurrences)


def _accumulate(
    dump: OccurrenceDump,
    vocab: Vocabulary,
    language: Optional[str],
    max_occurrences: int,
    sums: np.ndarray,
    counts: np.ndarray,
) -> int:
    n, d = sums.shape
    skipped = 0
    mapping = np.empty(0, dtype=np.int64)
    for local_ids, vectors in dump.chunks():
        if vectors.shape[1] != d:
            raise DataError(f"dimension mismatch in dump stream: {vectors.shape[1]} != {d}")
        if len(mapping) < len(dump.words):
            # JSONL dumps grow their word list while streaming
            mapping = _dump_to_vocab_ids(dump.words, vocab, language)
        vids = mapping[local_ids]
        in_vocab = vids >= 0
        skipped += int((~in_vocab).sum())
        vids = vids[in_vocab]
        if vids.size == 0:
            continue
        vectors = vectors[in_vocab]

        # ordinal of each record within its word, in stream order
        order = np.argsort(vids, kind="stable")
        sv = vids[order]
        starts = np.flatnonzero(np.r_[True, sv[1:] != sv[:-1]])
        lengths = np.diff(np.r_[starts, sv.size])
        ordinal = np.arange(sv.size) - np.repeat(starts, lengths)
        keep = ordinal + counts[sv] < max_occurrences
        if not keep.any():
            continue
        sv = sv[keep]
        sorted_vecs = np.asarray(vectors, dtype=np.float64)[order][keep]
        starts = np.flatnonzero(np.r_[True, sv[1:] != sv[:-1]])
        sums[sv[starts]] += np.add.reduceat(sorted_vecs, starts, axis=0)
        counts += np.bincount(sv, minlength=n)
    return skipped


def _finish(
    vocab: Vocabulary, sums: np.ndarray, counts: np.ndarray, skipped: int, max_occurrences: int
) -> Decontextualized:
    n, d = sums.shape
    means = np.zeros_like(sums)
    seen = counts > 0
    means[seen] = sums[seen] / counts[seen, None]

    n_zero = int((~seen).sum())
    if n_zero:
        logger.warning(f"{n_zero} vocabulary words have no occurrences; assigned zero vectors")
    if skipped:
        logger.info(f"skipped {skipped} records for words outside the vocabulary")
    logger.info(f"decontextualized {int(seen.sum())}/{n} words (d={d}, N<={max_occurrences})")

    table = EmbeddingTable(vocab, means, StageTag.RAW)
    return Decontextualized(table=table, counts=counts, skipped_records=skipped)


def write_occurrence_report(result: Decontextualized, path: str | Path, max_occurrences: int) -> None:
    to_tsv_safely(result.occurrence_report(max_occurrences), path, header=False)
