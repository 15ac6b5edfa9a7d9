"""swekit.common.errors

One exception hierarchy for the whole pipeline.

The CLI maps `UsageError` to exit code 2 and `DataError` (including format
problems) to exit code 1. Encoding misses and empty sentences are *values*,
never exceptions.
"""

from __future__ import annotations


class SweError(Exception):
    """Base class for every error raised on purpose by swekit."""


class UsageError(SweError, ValueError):
    """Bad parameters: unknown config keys, out-of-range values, incompatible dims."""


class DataError(SweError, ValueError):
    """Input data violates a contract (empty corpus, degenerate batch, ...)."""


class FormatError(DataError):
    """A file does not follow its documented format."""


class CorruptEmbeddingError(FormatError):
    """A stored embedding row contains NaN/Inf."""

    def __init__(self, word: str, where: str = "") -> None:
        self.word = word
        loc = f" in {where}" if where else ""
        super().__init__(f"corrupt embedding for word {word!r}{loc}: non-finite values")
