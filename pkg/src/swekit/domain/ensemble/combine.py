"""swekit.domain.ensemble.combine

Weighted concatenation: f(z) = [sqrt(w_i) * f_i(z) / ||f_i(z)||]_i / sqrt(sum w).
The dot product of two ensemble vectors is then the weight-averaged member
cosine. A member that cannot encode a text contributes a zero block.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from swekit.common.errors import DataError, UsageError
from swekit.domain.embed_core.table import EmbeddingTable, StageTag
from swekit.domain.embed_core.vocab import Vocabulary, split_tag
from swekit.domain.encode.encoder import EncodeOptions, SentenceEncoder
from swekit.domain.encode.resolve import resolve_word
from swekit.domain.encode.tokenizer import SubwordTokenizer
from swekit.domain.ensemble.spec import EnsembleSpec


class EnsembleEncoded(NamedTuple):
    vectors: np.ndarray
    empty_blocks: np.ndarray


def combine_blocks(blocks: Sequence[np.ndarray], weights: np.ndarray) -> EnsembleEncoded:
    """Scale each (n, d_i) block row to norm sqrt(w_i), concatenate, divide by sqrt(sum w)."""
    w = np.asarray(weights, dtype=np.float64)
    if len(blocks) != w.size:
        raise UsageError(f"{len(blocks)} blocks for {w.size} weights")
    scaled = []
    empty = []
    for b, wi in zip(blocks, w):
        b = np.atleast_2d(np.asarray(b, dtype=np.float64))
        norms = np.linalg.norm(b, axis=1)
        zero = norms == 0.0
        safe = np.where(zero, 1.0, norms)
        scaled.append(np.where(zero[:, None], 0.0, b * (np.sqrt(wi) / safe)[:, None]))
        empty.append(zero)
    out = np.concatenate(scaled, axis=1) / np.sqrt(w.sum())
    return EnsembleEncoded(out, np.stack(empty, axis=1))


def _member_tokenizers(spec: EnsembleSpec, tokenizers) -> list[Optional[SubwordTokenizer]]:
    if tokenizers is None or isinstance(tokenizers, SubwordTokenizer):
        return [tokenizers] * len(spec.members)
    tk = list(tokenizers)
    if len(tk) != len(spec.members):
        raise UsageError(f"{len(tk)} tokenizers for {len(spec.members)} members")
    return tk


class EnsembleEncoder:
    def __init__(self, spec: EnsembleSpec, tokenizers=None, opts: Optional[EncodeOptions] = None, threads: int = 1):
        base = opts or EncodeOptions()
        member_opts = EncodeOptions(True, base.sif_alpha, base.lowercase, base.opaque, base.language)
        self.spec = spec
        self.encoders = [
            SentenceEncoder(m.table, tk, member_opts, threads)
            for m, tk in zip(spec.members, _member_tokenizers(spec, tokenizers))
        ]

    @property
    def dim(self) -> int:
        return self.spec.total_dim

    def encode_batch(self, texts: Sequence[str]) -> EnsembleEncoded:
        blocks = [enc.encode_batch(texts).vectors for enc in self.encoders]
        return combine_blocks(blocks, self.spec.weights)

    def encode(self, text: str) -> EnsembleEncoded:
        out = self.encode_batch([text])
        return EnsembleEncoded(out.vectors[0], out.empty_blocks[0])


def ensemble_encode(text: str, spec: EnsembleSpec, tokenizers=None, opts: Optional[EncodeOptions] = None) -> EnsembleEncoded:
    return EnsembleEncoder(spec, tokenizers, opts).encode(text)


@dataclass(frozen=True)
class PrecombinedTable:
    table: EmbeddingTable
    block_dims: tuple[int, ...]
    weights: np.ndarray

    @property
    def bounds(self) -> np.ndarray:
        return np.r_[0, np.cumsum(self.block_dims)]


def _member_row(word: str, vocab: Vocabulary, tokenizer: Optional[SubwordTokenizer]) -> int:
    language, bare = split_tag(word)
    hit = vocab.id_of(word)
    if hit is None and tokenizer is not None:
        hit = resolve_word(bare, vocab, tokenizer, language)
    return -1 if hit is None else hit


def precombine_tables(spec: EnsembleSpec, tokenizers=None) -> PrecombinedTable:
    """One table over the union vocabulary.

    A word missing from a member is resolved against that member's vocabulary
    with its tokenizer, as the member encoder would; without a tokenizer, or
    when no piece prefix is found, the block is zero. Encoding with the same
    single tokenizer then matches `EnsembleEncoder` exactly; distinct member
    tokenizers can still segment words outside the union differently.
    """
    first = spec.members[0].table.vocab
    words: list[str] = []
    seen: set[str] = set()
    for m in spec.members:
        for w in m.table.vocab.words:
            key = first.fold(w)
            if key not in seen:
                seen.add(key)
                words.append(w)
    if not words:
        raise DataError("ensemble members have an empty vocabulary")

    blocks = []
    for m, tk in zip(spec.members, _member_tokenizers(spec, tokenizers)):
        v = m.table.vocab
        ids = np.fromiter((_member_row(w, v, tk) for w in words), dtype=np.int64, count=len(words))
        block = np.zeros((len(words), m.table.dim), dtype=np.float64)
        hit = ids >= 0
        block[hit] = m.table.matrix[ids[hit]]
        blocks.append(block)
    table = EmbeddingTable(Vocabulary(tuple(words), None, first.case_mode), np.concatenate(blocks, axis=1), StageTag.TRAINED)
    return PrecombinedTable(table, spec.dims, spec.weights)


class PrecombinedEncoder:
    """Average over the concatenated table, then normalise each subspace separately."""

    def __init__(self, pre: PrecombinedTable, tokenizer: Optional[SubwordTokenizer] = None, opts: Optional[EncodeOptions] = None, threads: int = 1):
        base = opts or EncodeOptions()
        raw_opts = EncodeOptions(False, None, base.lowercase, base.opaque, base.language)
        self.pre = pre
        self.encoder = SentenceEncoder(pre.table, tokenizer, raw_opts, threads)

    def encode_batch(self, texts: Sequence[str]) -> EnsembleEncoded:
        raw = self.encoder.encode_batch(texts).vectors
        b = self.pre.bounds
        return combine_blocks([raw[:, b[i] : b[i + 1]] for i in range(len(self.pre.block_dims))], self.pre.weights)

    def encode(self, text: str) -> EnsembleEncoded:
        out = self.encode_batch([text])
        return EnsembleEncoded(out.vectors[0], out.empty_blocks[0])


def encode_precombined(text: str, pre: PrecombinedTable, tokenizer=None, opts: Optional[EncodeOptions] = None) -> EnsembleEncoded:
    return PrecombinedEncoder(pre, tokenizer, opts).encode(text)
