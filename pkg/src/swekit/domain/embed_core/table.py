"""swekit.domain.embed_core.table

EmbeddingTable: vocabulary-aligned |V| x d matrix plus a stage tag.

The matrix is kept in float64 for computation and marked read-only; a
table is never mutated after construction (training builds a new one).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from swekit.common.errors import CorruptEmbeddingError, DataError, UsageError
from swekit.domain.embed_core.vocab import Vocabulary


class StageTag(str, Enum):
    RAW = "raw"
    PCA = "pca"
    TRAINED = "trained"

    @property
    def code(self) -> int:
        return _STAGE_CODES[self]

    @classmethod
    def from_code(cls, code: int) -> "StageTag":
        for tag, c in _STAGE_CODES.items():
            if c == code:
                return tag
        raise DataError(f"unknown stage tag code {code}")


_STAGE_CODES = {StageTag.RAW: 0, StageTag.PCA: 1, StageTag.TRAINED: 2}


def first_nonfinite_row(matrix: np.ndarray) -> Optional[int]:
    ok = np.isfinite(matrix).all(axis=1)
    if ok.all():
        return None
    return int(np.argmin(ok))


@dataclass(frozen=True)
class EmbeddingTable:
    vocab: Vocabulary
    matrix: np.ndarray
    stage_tag: StageTag = StageTag.RAW

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2:
            raise UsageError(f"embedding matrix must be 2-D, got shape {m.shape}")
        if m.shape[1] < 1:
            raise UsageError("embedding dimension must be positive")
        if m.shape[0] != len(self.vocab):
            raise DataError(f"matrix has {m.shape[0]} rows but vocabulary has {len(self.vocab)} words")
        bad = first_nonfinite_row(m)
        if bad is not None:
            raise CorruptEmbeddingError(self.vocab.words[bad])
        m = m.view()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "stage_tag", StageTag(self.stage_tag))

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])

    def __len__(self) -> int:
        return len(self.vocab)

    def row(self, word: str, language: Optional[str] = None) -> Optional[np.ndarray]:
        i = self.vocab.id_of(word, language)
        return None if i is None else self.matrix[i]

    def with_matrix(self, matrix: np.ndarray, stage_tag: StageTag | str | None = None) -> "EmbeddingTable":
        return EmbeddingTable(self.vocab, matrix, StageTag(stage_tag or self.stage_tag))

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.matrix, axis=1)


def truncate_vocab(table: EmbeddingTable, size: int) -> EmbeddingTable:
    """Keep the `size` most frequent words (rows are stored in frequency order)."""
    if size < 1:
        raise UsageError(f"size must be >= 1, got {size}")
    if size >= len(table):
        return table
    return EmbeddingTable(table.vocab.head(size), table.matrix[:size], table.stage_tag)
