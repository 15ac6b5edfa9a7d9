"""STS evaluation: cosine of each sentence pair against gold scores, reported as 100 * Spearman."""

from __future__ import annotations

import logging
from typing import Callable, Sequence

import numpy as np

from swekit.common.errors import DataError
from swekit.reports.datasets import StsDataset
from swekit.reports.metrics import spearman

logger = logging.getLogger(__name__)

EncodeFn = Callable[[Sequence[str]], np.ndarray]


def pair_cosines(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise cosine and an empty mask; a pair with a zero vector scores 0."""
    na = np.linalg.norm(a, axis=1)
    nb = np.linalg.norm(b, axis=1)
    empty = (na == 0.0) | (nb == 0.0)
    denom = np.where(empty, 1.0, na * nb)
    cos = np.where(empty, 0.0, np.sum(a * b, axis=1) / denom)
    return cos, empty


def sts_eval(dataset: StsDataset, encode: EncodeFn) -> float:
    a = np.asarray(encode(dataset.sent1), dtype=np.float64)
    b = np.asarray(encode(dataset.sent2), dtype=np.float64)
    cos, empty = pair_cosines(a, b)
    if empty.all():
        raise DataError("every STS pair has an empty encoding")
    if empty.any():
        logger.warning(f"{int(empty.sum())} of {len(dataset)} STS pairs have an empty side and score 0")
    return 100.0 * spearman(cos, dataset.gold)
