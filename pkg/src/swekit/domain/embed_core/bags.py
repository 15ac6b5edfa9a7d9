"""swekit.domain.embed_core.bags

Sentences as bags of table row ids (CSR layout: flat ids + per-bag lengths).

Every bag has at least one id; sentences with no in-vocabulary token are
dropped when the bags are built and reported through `kept`. Trainers also
drop bags whose mean is the zero vector (`drop_zero_means`); those cannot
be normalised.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from swekit.domain.embed_core.sentence import SentenceRecord
from swekit.domain.embed_core.vocab import Vocabulary


@dataclass(frozen=True)
class TokenBags:
    ids: np.ndarray
    lengths: np.ndarray

    @property
    def starts(self) -> np.ndarray:
        return np.r_[0, np.cumsum(self.lengths)[:-1]].astype(np.int64)

    def __len__(self) -> int:
        return int(self.lengths.shape[0])

    def owner(self) -> np.ndarray:
        """Bag index of every flat id."""
        return np.repeat(np.arange(len(self)), self.lengths)

    def subset(self, idx: Sequence[int] | np.ndarray) -> "TokenBags":
        idx = np.asarray(idx, dtype=np.int64)
        starts = self.starts
        parts = [self.ids[starts[i] : starts[i] + self.lengths[i]] for i in idx]
        ids = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
        return TokenBags(ids, self.lengths[idx].copy())


def bags_from_token_ids(token_ids: Sequence[Sequence[int]]) -> TokenBags:
    lengths = np.asarray([len(t) for t in token_ids], dtype=np.int64)
    flat = np.fromiter((i for t in token_ids for i in t), dtype=np.int64, count=int(lengths.sum()))
    return TokenBags(flat, lengths)


def bags_from_records(vocab: Vocabulary, records: Sequence[SentenceRecord]) -> tuple[TokenBags, np.ndarray]:
    """Resolve tokens by direct lookup; returns (bags, indices of kept records)."""
    token_ids: list[list[int]] = []
    kept: list[int] = []
    for i, rec in enumerate(records):
        ids = [j for j in (vocab.id_of(t, rec.language) for t in rec.tokens) if j is not None]
        if ids:
            token_ids.append(ids)
            kept.append(i)
    return bags_from_token_ids(token_ids), np.asarray(kept, dtype=np.int64)


def bag_means(matrix: np.ndarray, bags: TokenBags) -> np.ndarray:
    """Unweighted mean of the rows in each bag."""
    if len(bags) == 0:
        return np.zeros((0, matrix.shape[1]), dtype=np.float64)
    sums = np.add.reduceat(np.asarray(matrix, dtype=np.float64)[bags.ids], bags.starts, axis=0)
    return sums / bags.lengths[:, None]


def drop_zero_means(matrix: np.ndarray, bags: TokenBags, kept: np.ndarray) -> tuple[TokenBags, np.ndarray, int]:
    """Drop bags whose mean row is exactly zero; returns (bags, kept, number dropped).

    A raw table holds zero rows for words that never occurred in the dump.
    """
    nonzero = np.flatnonzero(np.any(bag_means(matrix, bags) != 0.0, axis=1))
    return bags.subset(nonzero), np.asarray(kept, dtype=np.int64)[nonzero], len(bags) - int(nonzero.size)
