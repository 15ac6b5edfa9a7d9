"""Cosine similarity matrices for a batch of sentence embeddings."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from swekit.common.errors import DataError, UsageError
from swekit.domain.train.backprop import unit_rows

TEACHER = "teacher"
STUDENT = "student"
CROSS_LINGUAL = "cross-lingual"
KINDS = (TEACHER, STUDENT, CROSS_LINGUAL)

RANGE_TOL = 1e-9


@dataclass(frozen=True)
class SimilarityMatrix:
    values: np.ndarray
    kind: str = STUDENT

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise DataError(f"similarity matrix must be square, got shape {v.shape}")
        if self.kind not in KINDS:
            raise UsageError(f"unknown similarity kind {self.kind!r}")
        if v.size and (np.abs(v).max() > 1.0 + RANGE_TOL or not np.all(np.isfinite(v))):
            raise DataError("similarity values outside [-1, 1]")
        object.__setattr__(self, "values", v)

    @property
    def size(self) -> int:
        return int(self.values.shape[0])


def cosine_matrix(embeddings: np.ndarray, kind: str = STUDENT) -> SimilarityMatrix:
    n, _ = unit_rows(np.atleast_2d(np.asarray(embeddings, dtype=np.float64)))
    values = n @ n.T
    values = (values + values.T) / 2.0
    return SimilarityMatrix(np.clip(values, -1.0, 1.0), kind)


def cross_cosine_matrix(source: np.ndarray, target: np.ndarray) -> SimilarityMatrix:
    """u_ij = cos(source_i, target_j)."""
    ns, _ = unit_rows(np.atleast_2d(np.asarray(source, dtype=np.float64)), "source row")
    nt, _ = unit_rows(np.atleast_2d(np.asarray(target, dtype=np.float64)), "target row")
    if ns.shape != nt.shape:
        raise UsageError(f"source {ns.shape} and target {nt.shape} batches differ")
    return SimilarityMatrix(np.clip(ns @ nt.T, -1.0, 1.0), CROSS_LINGUAL)
