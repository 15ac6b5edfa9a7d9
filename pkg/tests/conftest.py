from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np
import pytest

from swekit.domain.embed_core import CASE_SENSITIVE, EmbeddingTable, StageTag, Vocabulary


def make_table(
    words: Sequence[str],
    dim: int = 4,
    seed: int = 0,
    stage: StageTag = StageTag.RAW,
    counts: Optional[Sequence[int]] = None,
    case_mode: str = CASE_SENSITIVE,
) -> EmbeddingTable:
    rng = np.random.default_rng(seed)
    vocab = Vocabulary(tuple(words), None if counts is None else tuple(counts), case_mode)
    return EmbeddingTable(vocab, rng.normal(size=(len(words), dim)), stage)


def numbered_words(n: int, prefix: str = "w") -> list[str]:
    return [f"{prefix}{i}" for i in range(n)]


@pytest.fixture(autouse=True)
def _reset_package_logger():
    # CLI tests call setup_logging, which stops propagation to caplog
    yield
    lg = logging.getLogger("swekit")
    for h in lg.handlers[:]:
        lg.removeHandler(h)
        h.close()
    lg.propagate = True
    lg.setLevel(logging.NOTSET)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)


@pytest.fixture
def small_table() -> EmbeddingTable:
    words = ["the", "cat", "sat", "on", "mat", "dog"]
    return make_table(words, dim=5, seed=1, counts=[60, 30, 20, 15, 10, 5])
