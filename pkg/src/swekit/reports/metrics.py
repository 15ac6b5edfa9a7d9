from __future__ import annotations

import numpy as np
from scipy.stats import pearsonr, rankdata

from swekit.common.errors import DataError


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(x, dtype=np.float64).ravel()
    b = np.asarray(y, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise DataError(f"length mismatch: {a.size} vs {b.size}")
    if a.size < 2:
        raise DataError(f"need at least 2 values, got {a.size}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise DataError("non-finite values in correlation input")
    return a, b


def pearson(x, y) -> float:
    a, b = _pair(x, y)
    if np.ptp(a) == 0 or np.ptp(b) == 0:
        raise DataError("zero variance")
    return float(np.clip(pearsonr(a, b)[0], -1.0, 1.0))


def spearman(pred, gold) -> float:
    """Pearson correlation of average ranks."""
    a, b = _pair(pred, gold)
    ra, rb = rankdata(a, method="average"), rankdata(b, method="average")
    if np.ptp(ra) == 0 or np.ptp(rb) == 0:
        raise DataError("zero rank variance")
    return float(np.clip(pearsonr(ra, rb)[0], -1.0, 1.0))
