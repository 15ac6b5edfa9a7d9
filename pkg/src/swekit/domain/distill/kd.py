"""swekit.domain.distill.kd

Similarity-distribution distillation loss and its analytic gradient.

For a batch of K sentences, row i of each similarity matrix becomes a
softmax over k != i of x_ik / tau. The loss is the mean over rows of the
cross-entropy between the teacher and student distributions:

    L = -(1/K) * sum_i sum_{j != i} q_ij * log p_ij

with dL/ds_ij = (p_ij - q_ij) / (K * tau) off the diagonal.
"""

from __future__ import annotations

import numpy as np
from scipy.special import log_softmax

from swekit.common.errors import DataError, UsageError
from swekit.domain.distill.similarity import SimilarityMatrix
from swekit.domain.embed_core.bags import TokenBags
from swekit.domain.train.backprop import backward_bags, forward_bags


def masked_log_softmax(x: np.ndarray, tau: float) -> np.ndarray:
    """Row-wise log softmax of x / tau over off-diagonal entries; diagonal set to 0."""
    z = np.asarray(x, dtype=np.float64) / tau
    np.fill_diagonal(z, -np.inf)
    out = log_softmax(z, axis=1)
    np.fill_diagonal(out, 0.0)
    return out


def row_distributions(x: np.ndarray, tau: float) -> np.ndarray:
    """Off-diagonal softmax rows; each row sums to 1, diagonal is 0."""
    p = np.exp(masked_log_softmax(x, tau))
    np.fill_diagonal(p, 0.0)
    return p


def _check(s: np.ndarray, t: np.ndarray, tau: float) -> None:
    if tau <= 0:
        raise UsageError(f"tau must be > 0, got {tau}")
    if s.shape != t.shape:
        raise UsageError(f"student {s.shape} and teacher {t.shape} matrices differ in shape")
    if s.shape[0] < 2:
        raise DataError(f"degenerate batch: K = {s.shape[0]}")


def _loss_terms(s: np.ndarray, t: np.ndarray, tau: float) -> tuple[float, np.ndarray, np.ndarray]:
    log_p = masked_log_softmax(s, tau)
    q = row_distributions(t, tau)
    loss = -float(np.sum(q * log_p)) / s.shape[0]
    return max(loss, 0.0), np.exp(log_p) * (1.0 - np.eye(s.shape[0])), q


def kd_loss(s: SimilarityMatrix | np.ndarray, t: SimilarityMatrix | np.ndarray, tau: float = 0.05) -> float:
    sv = s.values if isinstance(s, SimilarityMatrix) else np.asarray(s, dtype=np.float64)
    tv = t.values if isinstance(t, SimilarityMatrix) else np.asarray(t, dtype=np.float64)
    _check(sv, tv, tau)
    return _loss_terms(sv, tv, tau)[0]


def kd_loss_and_grad(
    bags: TokenBags,
    matrix: np.ndarray,
    teacher_sim: np.ndarray,
    tau: float,
) -> tuple[float, np.ndarray, np.ndarray]:
    """(loss, touched rows, their gradients) for one batch of student bags."""
    unit, norms = forward_bags(matrix, bags)
    s = unit @ unit.T
    _check(s, teacher_sim, tau)
    loss, p, q = _loss_terms(s, teacher_sim, tau)
    g = (p - q) / (s.shape[0] * tau)
    d_unit = (g + g.T) @ unit
    rows, grads = backward_bags(bags, unit, norms, d_unit)
    return loss, rows, grads


def kd_grad(
    bags: TokenBags,
    matrix: np.ndarray,
    teacher_sim: SimilarityMatrix | np.ndarray,
    tau: float = 0.05,
) -> tuple[np.ndarray, np.ndarray]:
    """Sparse gradient of kd_loss w.r.t. the student rows; untouched rows are implicitly zero."""
    tv = teacher_sim.values if isinstance(teacher_sim, SimilarityMatrix) else np.asarray(teacher_sim, dtype=np.float64)
    _, rows, grads = kd_loss_and_grad(bags, matrix, tv, tau)
    return rows, grads


def mean_abs_gap(s: SimilarityMatrix | np.ndarray, t: SimilarityMatrix | np.ndarray) -> float:
    """Mean |S - T| over off-diagonal entries."""
    sv = s.values if isinstance(s, SimilarityMatrix) else np.asarray(s, dtype=np.float64)
    tv = t.values if isinstance(t, SimilarityMatrix) else np.asarray(t, dtype=np.float64)
    k = sv.shape[0]
    if k < 2:
        return 0.0
    mask = ~np.eye(k, dtype=bool)
    return float(np.abs(sv - tv)[mask].mean())
