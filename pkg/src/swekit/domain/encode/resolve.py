"""Out-of-vocabulary resolution by dropping trailing subword pieces."""

from __future__ import annotations

from typing import Optional

from swekit.domain.embed_core.vocab import Vocabulary
from swekit.domain.encode.tokenizer import SubwordTokenizer


def resolve_word(
    word: str,
    vocab: Vocabulary,
    tokenizer: Optional[SubwordTokenizer],
    language: Optional[str] = None,
) -> Optional[int]:
    """Row id of `word`, or of its longest piece prefix found in the vocabulary; None is a miss."""
    hit = vocab.id_of(word, language)
    if hit is not None or tokenizer is None or not word:
        return hit
    pieces = tokenizer.segment(word)
    for n in range(len(pieces) - 1, 0, -1):
        hit = vocab.id_of("".join(pieces[:n]), language)
        if hit is not None:
            return hit
    return None
