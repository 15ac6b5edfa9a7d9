"""Seeded train/validation split and per-epoch shuffled batches."""

from __future__ import annotations

import logging
from typing import Iterator

import numpy as np

from swekit.common.errors import DataError, UsageError

logger = logging.getLogger(__name__)


def split_train_val(
    n: int,
    val_fraction: float,
    rng: np.random.Generator,
    min_val: int = 2,
) -> tuple[np.ndarray, np.ndarray]:
    """Sample round(n * val_fraction) held-out items.

    A validation set smaller than `min_val` disables validation: all items go
    to training and the returned validation index is empty.
    """
    if not 0.0 <= val_fraction < 1.0:
        raise UsageError(f"val_fraction must be in [0, 1), got {val_fraction}")
    perm = rng.permutation(n)
    n_val = int(round(n * val_fraction))
    if val_fraction > 0 and n_val < min_val:
        logger.warning(
            f"validation set of {n_val} items is below the minimum of {min_val}; early stopping disabled"
        )
        n_val = 0
    val = np.sort(perm[:n_val])
    train = np.sort(perm[n_val:])
    return train, val


def epoch_batches(train_idx: np.ndarray, batch_size: int, rng: np.random.Generator) -> Iterator[np.ndarray]:
    """Endless stream of batches: reshuffle every epoch, drop the incomplete tail."""
    if batch_size < 1:
        raise UsageError(f"batch_size must be >= 1, got {batch_size}")
    if train_idx.size < batch_size:
        raise DataError(f"training pool of {train_idx.size} items is smaller than one batch ({batch_size})")
    n_full = train_idx.size // batch_size
    while True:
        order = train_idx[rng.permutation(train_idx.size)]
        for b in range(n_full):
            yield order[b * batch_size : (b + 1) * batch_size]


def fixed_batches(idx: np.ndarray, batch_size: int, min_size: int) -> list[np.ndarray]:
    """Consecutive chunks of `idx`; a tail shorter than `min_size` is dropped."""
    chunks = [idx[s : s + batch_size] for s in range(0, idx.size, batch_size)]
    return [c for c in chunks if c.size >= min_size]
