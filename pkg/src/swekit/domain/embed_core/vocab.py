"""swekit.domain.embed_core.vocab

Frequency-ordered vocabularies.

Joint cross-lingual vocabularies tag their keys as "<lang>::<word>"; lookups
with a language try the tagged key first and fall back to the plain key.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import numpy as np
import pandas as pd
from scipy.stats import rankdata

from swekit.common.errors import DataError, FormatError, UsageError
from swekit.data.io.safe_csv import read_tsv, to_tsv_safely

logger = logging.getLogger(__name__)

CASE_SENSITIVE = "sensitive"
CASE_INSENSITIVE = "insensitive"
CASE_MODES = (CASE_SENSITIVE, CASE_INSENSITIVE)
LANG_SEP = "::"


def tag_word(language: Optional[str], word: str) -> str:
    return f"{language}{LANG_SEP}{word}" if language else word


def split_tag(key: str) -> tuple[Optional[str], str]:
    lang, sep, word = key.partition(LANG_SEP)
    if sep and lang and word:
        return lang, word
    return None, key


@dataclass(frozen=True)
class Vocabulary:
    words: tuple[str, ...]
    frequency: Optional[tuple[int, ...]] = None
    case_mode: str = CASE_SENSITIVE
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.case_mode not in CASE_MODES:
            raise UsageError(f"case_mode must be one of {CASE_MODES}, got {self.case_mode!r}")
        object.__setattr__(self, "words", tuple(self.words))
        if self.frequency is not None:
            object.__setattr__(self, "frequency", tuple(int(f) for f in self.frequency))
            if len(self.frequency) != len(self.words):
                raise DataError(
                    f"frequency length {len(self.frequency)} != vocabulary size {len(self.words)}"
                )
        index: dict[str, int] = {}
        for i, w in enumerate(self.words):
            key = self.fold(w)
            if key in index:
                raise DataError(f"duplicate vocabulary entry {w!r} (case_mode={self.case_mode})")
            index[key] = i
        object.__setattr__(self, "_index", index)

    def fold(self, word: str) -> str:
        return word.lower() if self.case_mode == CASE_INSENSITIVE else word

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __contains__(self, word: object) -> bool:
        return isinstance(word, str) and self.fold(word) in self._index

    def id_of(self, word: str, language: Optional[str] = None) -> Optional[int]:
        if language:
            i = self._index.get(self.fold(tag_word(language, word)))
            if i is not None:
                return i
        return self._index.get(self.fold(word))

    def probabilities(self) -> np.ndarray:
        """Unigram probabilities p(w) = count / total (needs frequencies)."""
        if self.frequency is None:
            raise DataError("vocabulary has no frequency counts")
        counts = np.asarray(self.frequency, dtype=np.float64)
        total = counts.sum()
        if total <= 0:
            raise DataError("vocabulary frequency counts sum to zero")
        return counts / total

    def frequency_ranks(self) -> np.ndarray:
        """1 = most frequent. Without counts, the row order is the rank."""
        if self.frequency is None:
            return np.arange(1, len(self.words) + 1, dtype=np.float64)
        return rankdata(-np.asarray(self.frequency, dtype=np.float64), method="average")

    def head(self, size: int) -> "Vocabulary":
        freq = None if self.frequency is None else self.frequency[:size]
        return Vocabulary(self.words[:size], freq, self.case_mode)


def build_vocab(corpus: Iterable[str], cap: int, case_mode: str = CASE_INSENSITIVE) -> Vocabulary:
    """Count a token stream and keep the `cap` most frequent words.

    Ordering: descending count, ties broken lexicographically (reproducible).
    Case-insensitive mode folds to lowercase before counting.
    """
    if cap < 1:
        raise UsageError(f"vocabulary cap must be >= 1, got {cap}")
    if case_mode not in CASE_MODES:
        raise UsageError(f"case_mode must be one of {CASE_MODES}, got {case_mode!r}")

    fold = str.lower if case_mode == CASE_INSENSITIVE else (lambda w: w)
    counts = Counter(fold(tok) for tok in corpus)
    if not counts:
        raise DataError("empty corpus")

    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    if len(ranked) < cap:
        logger.warning(f"corpus has only {len(ranked)} distinct words (< cap {cap}); keeping all")
    ranked = ranked[:cap]
    logger.info(f"vocabulary built: {len(ranked)} words from {sum(counts.values())} tokens")
    return Vocabulary(
        words=tuple(w for w, _ in ranked),
        frequency=tuple(c for _, c in ranked),
        case_mode=case_mode,
    )


def write_vocab_tsv(vocab: Vocabulary, path: str | Path) -> None:
    freq = vocab.frequency if vocab.frequency is not None else [0] * len(vocab)
    df = pd.DataFrame({"word": list(vocab.words), "count": list(freq)})
    to_tsv_safely(df, path, header=False)


def read_vocab_tsv(path: str | Path, case_mode: str = CASE_INSENSITIVE) -> Vocabulary:
    df = read_tsv(path, names=["word", "count"])
    counts = pd.to_numeric(df["count"], errors="coerce")
    if counts.isna().any():
        bad = int(counts.isna().idxmax()) + 1
        raise FormatError(f"{path}: line {bad}: count is not an integer")
    return Vocabulary(tuple(df["word"]), tuple(int(c) for c in counts), case_mode)
