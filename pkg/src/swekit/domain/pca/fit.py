"""swekit.domain.pca.fit

Fitting: one pass accumulates Σy and Σyyᵀ (y = x − shift) in float64, then the
d x d covariance is eigendecomposed. Memory is O(d²) whatever the sample size.

Sign convention: the largest-magnitude entry of every component is positive.
Eigenvalue ties keep the solver's order (stable sort).
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from swekit.common.errors import DataError, UsageError
from swekit.domain.embed_core.bags import bag_means, bags_from_records
from swekit.domain.embed_core.sentence import SentenceRecord
from swekit.domain.embed_core.table import EmbeddingTable
from swekit.domain.pca.transform import (
    EIGEN_TOL,
    SENTENCE_LEVEL,
    WORD_LEVEL,
    PcaTransform,
    abtt_skip,
)

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 100_000


class CovarianceAccumulator:
    """Streaming mean/covariance with a shift for numerical stability; shards merge exactly."""

    def __init__(self, dim: int) -> None:
        self.dim = dim
        self.n = 0
        self.shift: np.ndarray | None = None
        self.s = np.zeros(dim, dtype=np.float64)
        self.ss = np.zeros((dim, dim), dtype=np.float64)

    def add(self, x: np.ndarray) -> "CovarianceAccumulator":
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        if x.shape[0] == 0:
            return self
        if x.shape[1] != self.dim:
            raise UsageError(f"sample dim {x.shape[1]} != accumulator dim {self.dim}")
        if self.shift is None:
            self.shift = x[0].copy()
        y = x - self.shift
        self.s += y.sum(axis=0)
        self.ss += y.T @ y
        self.n += x.shape[0]
        return self

    def merge(self, other: "CovarianceAccumulator") -> "CovarianceAccumulator":
        if other.n == 0:
            return self
        if self.shift is None:
            self.shift, self.s, self.ss, self.n = other.shift.copy(), other.s.copy(), other.ss.copy(), other.n
            return self
        delta = other.shift - self.shift
        self.s += other.s + other.n * delta
        self.ss += other.ss + np.outer(other.s, delta) + np.outer(delta, other.s) + other.n * np.outer(delta, delta)
        self.n += other.n
        return self

    def finalize(self) -> tuple[np.ndarray, np.ndarray]:
        if self.n < 2:
            raise DataError(f"rank-deficient sample: {self.n} rows")
        mean_y = self.s / self.n
        cov = (self.ss - self.n * np.outer(mean_y, mean_y)) / (self.n - 1)
        cov = (cov + cov.T) / 2.0
        return self.shift + mean_y, cov


def eigen_decompose(cov: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Descending eigenpairs with the sign convention applied."""
    w, v = np.linalg.eigh(cov)
    order = np.argsort(-w, kind="stable")
    w, v = w[order], v[:, order]
    tol = EIGEN_TOL * max(1.0, float(w[0]))
    if w.min() < -tol:
        raise DataError(f"covariance has a negative eigenvalue {w.min():.3e}")
    w = np.clip(w, 0.0, None)
    pivots = np.argmax(np.abs(v), axis=0)
    signs = np.where(v[pivots, np.arange(v.shape[1])] < 0, -1.0, 1.0)
    return w, v * signs


def _fit(acc: CovarianceAccumulator, d_prime: int, skip: int | None, abtt: bool, mode: str) -> PcaTransform:
    if acc.n < acc.dim:
        raise DataError(f"rank-deficient sample: {acc.n} rows < dimension {acc.dim}")
    mean, cov = acc.finalize()
    eigvals, comps = eigen_decompose(cov)
    r = skip if skip is not None else (abtt_skip(acc.dim) if abtt else 0)
    t = PcaTransform(mean, comps, eigvals, r, d_prime, mode)
    logger.info(f"{mode}-level PCA on {acc.n} rows: d={acc.dim}, skip r={r}, keep d'={d_prime}")
    return t


def fit_pca_matrix(
    x: np.ndarray,
    d_prime: int,
    skip: int | None = None,
    abtt: bool = True,
    mode: str = SENTENCE_LEVEL,
) -> PcaTransform:
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    acc = CovarianceAccumulator(x.shape[1]).add(x)
    return _fit(acc, d_prime, skip, abtt, mode)


def sentence_matrix(table: EmbeddingTable, records: Sequence[SentenceRecord]) -> tuple[np.ndarray, int]:
    """Rows = unweighted mean of in-vocabulary word vectors; returns (X, skipped count)."""
    bags, kept = bags_from_records(table.vocab, records)
    return bag_means(table.matrix, bags), len(records) - int(kept.size)


def fit_sentence_pca(
    tables: EmbeddingTable | Sequence[EmbeddingTable],
    samples: Sequence[SentenceRecord] | Sequence[Sequence[SentenceRecord]],
    d_prime: int,
    skip: int | None = None,
    abtt: bool = True,
) -> PcaTransform:
    """PCA over averaged-sentence embeddings.

    Cross-lingual input: pass one table (or the joint table repeated) per
    language with the matching sample; the per-language matrices are stacked.
    """
    if isinstance(tables, EmbeddingTable):
        tables = [tables]
        samples = [samples]  # type: ignore[list-item]
    if len(tables) != len(samples):
        raise UsageError(f"{len(tables)} tables but {len(samples)} samples")
    dims = {t.dim for t in tables}
    if len(dims) != 1:
        raise UsageError(f"all tables must share one dimension, got {sorted(dims)}")

    acc = CovarianceAccumulator(dims.pop())
    skipped = 0
    for table, records in zip(tables, samples):
        x, n_skip = sentence_matrix(table, records)
        acc.add(x)
        skipped += n_skip
    if skipped:
        logger.warning(f"{skipped} sample sentences had no in-vocabulary token and were excluded")
    return _fit(acc, d_prime, skip, abtt, SENTENCE_LEVEL)


def fit_word_pca(table: EmbeddingTable, d_prime: int, skip: int | None = None, abtt: bool = True) -> PcaTransform:
    """PCA over the word rows themselves."""
    acc = CovarianceAccumulator(table.dim).add(table.matrix)
    return _fit(acc, d_prime, skip, abtt, WORD_LEVEL)
