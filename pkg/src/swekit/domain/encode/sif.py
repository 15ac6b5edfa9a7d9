"""Smooth inverse frequency reweighting: row(w) *= alpha / (alpha + p(w))."""

from __future__ import annotations

import numpy as np

from swekit.common.errors import DataError, UsageError
from swekit.domain.embed_core.table import EmbeddingTable

DEFAULT_SIF_ALPHA = 0.001
PROB_SUM_TOL = 1e-6


def unigram_probabilities(table: EmbeddingTable) -> np.ndarray:
    return table.vocab.probabilities()


def sif_weights(probs: np.ndarray, alpha: float = DEFAULT_SIF_ALPHA) -> np.ndarray:
    if alpha <= 0:
        raise UsageError(f"sif_alpha must be > 0, got {alpha}")
    p = np.asarray(probs, dtype=np.float64)
    if np.any(p < 0):
        raise DataError(f"negative unigram probability at index {int(np.argmax(p < 0))}")
    if np.any(p > 1) or p.sum() > 1.0 + PROB_SUM_TOL:
        raise DataError(f"unigram probabilities must lie in [0, 1] and sum to <= 1, sum={p.sum():.6f}")
    return alpha / (alpha + p)


def sif_reweight(
    table: EmbeddingTable,
    probs: np.ndarray | None = None,
    alpha: float = DEFAULT_SIF_ALPHA,
) -> EmbeddingTable:
    p = unigram_probabilities(table) if probs is None else np.asarray(probs, dtype=np.float64)
    if p.shape != (len(table),):
        raise UsageError(f"{p.shape[0]} probabilities for {len(table)} words")
    return table.with_matrix(table.matrix * sif_weights(p, alpha)[:, None])
