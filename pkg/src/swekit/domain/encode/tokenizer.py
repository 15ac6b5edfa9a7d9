"""swekit.domain.encode.tokenizer

Greedy longest-match-first piece segmentation (WordPiece style).

A piece file lists one piece per line; pieces starting with "##" may only
continue a word. When nothing matches at a position the single character is
taken, so every non-empty word segments into at least one piece.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from swekit.common.errors import DataError
from swekit.domain.embed_core.vocab import Vocabulary, split_tag

CONTINUATION = "##"


@dataclass(frozen=True)
class SubwordTokenizer:
    initial: frozenset[str]
    continuation: frozenset[str]
    lowercase: bool = False
    max_len: int = field(init=False)

    def __post_init__(self) -> None:
        longest = max((len(p) for p in self.initial | self.continuation), default=1)
        object.__setattr__(self, "max_len", longest)

    def segment(self, word: str) -> list[str]:
        if self.lowercase:
            word = word.lower()
        pieces: list[str] = []
        start = 0
        while start < len(word):
            table = self.initial if start == 0 else self.continuation
            end = min(len(word), start + self.max_len)
            while end > start + 1 and word[start:end] not in table:
                end -= 1
            pieces.append(word[start:end])
            start = end
        return pieces


def tokenizer_from_pieces(pieces: Iterable[str], lowercase: bool = False) -> SubwordTokenizer:
    initial, cont = set(), set()
    for p in pieces:
        p = p.strip()
        if not p:
            continue
        if lowercase:
            p = p.lower()
        if p.startswith(CONTINUATION) and len(p) > len(CONTINUATION):
            cont.add(p[len(CONTINUATION) :])
        else:
            initial.add(p)
    return SubwordTokenizer(frozenset(initial), frozenset(cont), lowercase)


def load_piece_file(path: str | Path, lowercase: bool = False) -> SubwordTokenizer:
    p = Path(path)
    if not p.exists():
        raise DataError(f"piece file not found: {p}")
    return tokenizer_from_pieces(p.read_text(encoding="utf-8").splitlines(), lowercase)


def tokenizer_from_vocab(vocab: Vocabulary) -> SubwordTokenizer:
    """Pieces = the vocabulary words themselves (tags removed), usable anywhere in a word."""
    words = frozenset(split_tag(w)[1] for w in vocab.words)
    lower = vocab.case_mode != "sensitive"
    if lower:
        words = frozenset(w.lower() for w in words)
    return SubwordTokenizer(words, words, lower)
