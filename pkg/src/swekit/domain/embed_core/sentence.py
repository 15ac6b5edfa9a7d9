"""swekit.domain.embed_core.sentence

Whitespace tokenization with punctuation stripping, shared by vocabulary
building, PCA sampling, training and inference so every stage sees the same
tokens.

Punctuation = Unicode category P*. Leading and trailing punctuation is stripped
from each whitespace token; a token made only of punctuation disappears.
Inner punctuation ("don't", "U.S") is kept.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional


@lru_cache(maxsize=65536)
def is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def strip_punct(token: str) -> str:
    start, end = 0, len(token)
    while start < end and is_punct(token[start]):
        start += 1
    while end > start and is_punct(token[end - 1]):
        end -= 1
    return token[start:end]


def tokenize(text: str, lowercase: bool = False) -> list[str]:
    """Split on whitespace, strip punctuation, drop empty tokens."""
    out: list[str] = []
    for raw in text.split():
        tok = strip_punct(raw)
        if tok:
            out.append(tok.lower() if lowercase else tok)
    return out


@dataclass(frozen=True)
class SentenceRecord:
    text: str
    tokens: tuple[str, ...]
    language: Optional[str] = None

    @property
    def empty(self) -> bool:
        return not self.tokens


def make_record(text: str, language: Optional[str] = None, lowercase: bool = False) -> SentenceRecord:
    return SentenceRecord(text=text, tokens=tuple(tokenize(text, lowercase)), language=language)


def iter_corpus_tokens(lines: Iterable[str], lowercase: bool = False) -> Iterator[str]:
    """Token stream over corpus lines (input of build_vocab)."""
    for line in lines:
        yield from tokenize(line, lowercase)


def read_sentences(path, language: Optional[str] = None, lowercase: bool = False) -> list[SentenceRecord]:
    """One sentence per line, UTF-8. Blank lines are kept as empty records to preserve alignment."""
    with open(path, "r", encoding="utf-8") as fh:
        return [make_record(line.rstrip("\n"), language, lowercase) for line in fh]
