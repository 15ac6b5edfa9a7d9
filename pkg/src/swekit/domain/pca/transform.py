"""swekit.domain.pca.transform

PcaTransform and everything that applies one.

Coordinates of x are Wᵀ(x − X̄). The ABTT window drops the first `skip`
components and keeps the next `keep` ones; pre-transforming every word
commutes with sentence averaging, so encoding stays a plain mean.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from swekit.common.errors import DataError, UsageError
from swekit.domain.embed_core.table import EmbeddingTable, StageTag

SENTENCE_LEVEL = "sentence"
WORD_LEVEL = "word"
MODES = (SENTENCE_LEVEL, WORD_LEVEL)

ORTHO_TOL = 1e-8
EIGEN_TOL = 1e-10


def abtt_skip(dim: int) -> int:
    """Number of dominant components removed: floor(d / 100)."""
    return dim // 100


@dataclass(frozen=True)
class PcaTransform:
    mean: np.ndarray
    components: np.ndarray
    eigenvalues: np.ndarray
    skip: int
    keep: int
    mode: str = SENTENCE_LEVEL

    def __post_init__(self) -> None:
        mean = np.asarray(self.mean, dtype=np.float64)
        w = np.asarray(self.components, dtype=np.float64)
        ev = np.asarray(self.eigenvalues, dtype=np.float64)
        d = mean.shape[0]
        if mean.ndim != 1 or w.shape != (d, d) or ev.shape != (d,):
            raise DataError(f"inconsistent PCA shapes: mean {mean.shape}, W {w.shape}, eigenvalues {ev.shape}")
        if self.mode not in MODES:
            raise UsageError(f"PCA mode must be one of {MODES}, got {self.mode!r}")
        if not np.allclose(w.T @ w, np.eye(d), rtol=0.0, atol=ORTHO_TOL):
            raise DataError("PCA components are not orthonormal")
        if ev.size and (ev.min() < -EIGEN_TOL or np.any(np.diff(ev) > EIGEN_TOL * max(1.0, float(ev[0])))):
            raise DataError("PCA eigenvalues must be non-negative and non-increasing")
        _check_window(d, self.skip, self.keep)
        for name, arr in (("mean", mean), ("components", w), ("eigenvalues", ev)):
            arr = arr.view()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return int(self.mean.shape[0])

    def window(self, skip: int | None = None, keep: int | None = None) -> np.ndarray:
        r = self.skip if skip is None else skip
        k = self.keep if keep is None else keep
        _check_window(self.dim, r, k)
        return self.components[:, r : r + k]

    def coordinates(self, x: np.ndarray) -> np.ndarray:
        """Full coordinate vector(s) Wᵀ(x − X̄)."""
        return (np.asarray(x, dtype=np.float64) - self.mean) @ self.components


def _check_window(d: int, skip: int, keep: int) -> None:
    if skip < 0 or keep < 1:
        raise UsageError(f"invalid component window: skip={skip}, keep={keep}")
    if skip + keep > d:
        raise UsageError(f"component window skip + keep = {skip + keep} exceeds dimension {d}")


def pretransform(
    table: EmbeddingTable,
    t: PcaTransform,
    skip: int | None = None,
    keep: int | None = None,
) -> EmbeddingTable:
    """Ê(w) = window of Wᵀ(E(w) − X̄) for every word; stage becomes pca."""
    if table.dim != t.dim:
        raise UsageError(f"table dim {table.dim} != PCA dim {t.dim}")
    win = t.window(skip, keep)
    return table.with_matrix((table.matrix - t.mean) @ win, StageTag.PCA)


def reconstruct(window_coords: np.ndarray, t: PcaTransform, skip: int | None = None, keep: int | None = None) -> np.ndarray:
    """Map window coordinates back into the original space (skipped PCs contribute nothing)."""
    win = t.window(skip, keep)
    return np.asarray(window_coords, dtype=np.float64) @ win.T + t.mean


def project_components(
    items: EmbeddingTable | np.ndarray,
    t: PcaTransform,
    indices: Sequence[int],
) -> np.ndarray:
    """Values of the requested principal components (1-based) for each item.

    Returns an (n_items, len(indices)) array.
    """
    x = items.matrix if isinstance(items, EmbeddingTable) else np.atleast_2d(np.asarray(items, dtype=np.float64))
    if x.shape[1] != t.dim:
        raise UsageError(f"items have dim {x.shape[1]}, PCA expects {t.dim}")
    idx = [int(i) for i in indices]
    bad = [i for i in idx if not 1 <= i <= t.dim]
    if bad:
        raise UsageError(f"component index out of range 1..{t.dim}: {bad}")
    cols = t.components[:, [i - 1 for i in idx]]
    return (x - t.mean) @ cols


def explained_variance_ratio(t: PcaTransform, skip: int | None = None, keep: int | None = None) -> float:
    """Share of the total variance inside the kept window."""
    r = t.skip if skip is None else skip
    k = t.keep if keep is None else keep
    _check_window(t.dim, r, k)
    total = float(t.eigenvalues.sum())
    if total <= 0.0:
        return 0.0
    return float(t.eigenvalues[r : r + k].sum()) / total
