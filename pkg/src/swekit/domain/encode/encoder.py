"""swekit.domain.encode.encoder

Bag-of-words sentence encoding: tokenize, strip punctuation, resolve every
token to a table row (with subword truncation for misses), average, and
optionally L2-normalise. A sentence without any resolved token encodes to the
zero vector with its empty flag set.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from swekit.common.errors import UsageError
from swekit.domain.embed_core.sentence import strip_punct, tokenize
from swekit.domain.embed_core.table import EmbeddingTable
from swekit.domain.encode.resolve import resolve_word
from swekit.domain.encode.sif import sif_reweight
from swekit.domain.encode.tokenizer import SubwordTokenizer

logger = logging.getLogger(__name__)

MISS = -1
MIN_CHUNK = 2048


@dataclass(frozen=True)
class EncodeOptions:
    normalize: bool = True
    sif_alpha: Optional[float] = None
    lowercase: bool = True
    opaque: bool = False
    language: Optional[str] = None

    def __post_init__(self) -> None:
        if self.sif_alpha is not None and self.sif_alpha <= 0:
            raise UsageError(f"sif_alpha must be > 0, got {self.sif_alpha}")


class Encoded(NamedTuple):
    vector: np.ndarray
    empty: bool


class BatchEncoded(NamedTuple):
    vectors: np.ndarray
    empty: np.ndarray


class SentenceEncoder:
    """Reusable encoder over one table; token resolutions are cached."""

    def __init__(
        self,
        table: EmbeddingTable,
        tokenizer: Optional[SubwordTokenizer] = None,
        opts: Optional[EncodeOptions] = None,
        threads: int = 1,
    ) -> None:
        self.opts = opts or EncodeOptions()
        if threads < 1:
            raise UsageError(f"threads must be >= 1, got {threads}")
        self.table = sif_reweight(table, alpha=self.opts.sif_alpha) if self.opts.sif_alpha else table
        self.tokenizer = None if self.opts.opaque else tokenizer
        self.threads = threads
        self._matrix = self.table.matrix
        self._cache: dict[str, int] = {}

    @property
    def dim(self) -> int:
        return self.table.dim

    def tokens(self, text: str) -> list[str]:
        if self.opts.opaque:
            return [t for t in text.split() if strip_punct(t)]
        return tokenize(text, self.opts.lowercase)

    def _row(self, token: str) -> int:
        hit = self._cache.get(token)
        if hit is None:
            rid = resolve_word(token, self.table.vocab, self.tokenizer, self.opts.language)
            hit = MISS if rid is None else rid
            self._cache[token] = hit
        return hit

    def token_ids(self, text: str) -> list[int]:
        """Resolved row ids, sorted so the average does not depend on word order."""
        return sorted(r for r in (self._row(t) for t in self.tokens(text)) if r != MISS)

    def encode(self, text: str) -> Encoded:
        out = self._encode_chunk([text])
        return Encoded(out.vectors[0], bool(out.empty[0]))

    def encode_batch(self, texts: Sequence[str]) -> BatchEncoded:
        texts = list(texts)
        if self.threads == 1 or len(texts) < 2 * MIN_CHUNK:
            return self._encode_chunk(texts)
        n_chunks = min(self.threads, max(1, len(texts) // MIN_CHUNK))
        bounds = np.linspace(0, len(texts), n_chunks + 1).astype(int)
        chunks = [texts[a:b] for a, b in zip(bounds[:-1], bounds[1:])]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            parts = list(pool.map(self._encode_chunk, chunks))
        return BatchEncoded(
            np.concatenate([p.vectors for p in parts], axis=0),
            np.concatenate([p.empty for p in parts]),
        )

    def _encode_chunk(self, texts: Sequence[str]) -> BatchEncoded:
        ids = [self.token_ids(t) for t in texts]
        lengths = np.fromiter((len(i) for i in ids), dtype=np.int64, count=len(ids))
        out = np.zeros((len(texts), self.dim), dtype=np.float64)
        nonempty = np.flatnonzero(lengths)
        if nonempty.size:
            flat = np.fromiter((j for i in ids for j in i), dtype=np.int64, count=int(lengths.sum()))
            lens = lengths[nonempty]
            starts = np.r_[0, np.cumsum(lens)[:-1]]
            out[nonempty] = np.add.reduceat(self._matrix[flat], starts, axis=0) / lens[:, None]
        empty = lengths == 0
        if self.opts.normalize:
            norms = np.linalg.norm(out, axis=1)
            empty |= norms == 0.0
            ok = ~empty
            out[ok] /= norms[ok, None]
        return BatchEncoded(out, empty)


def encode_sentence(
    text: str,
    table: EmbeddingTable,
    tokenizer: Optional[SubwordTokenizer] = None,
    opts: Optional[EncodeOptions] = None,
) -> Encoded:
    return SentenceEncoder(table, tokenizer, opts).encode(text)


def encode_batch(
    texts: Sequence[str],
    table: EmbeddingTable,
    tokenizer: Optional[SubwordTokenizer] = None,
    opts: Optional[EncodeOptions] = None,
    threads: int = 1,
) -> BatchEncoded:
    return SentenceEncoder(table, tokenizer, opts, threads).encode_batch(texts)
