"""swekit.domain.xlingual.contrastive

Bidirectional contrastive loss over a K x K cross-lingual cosine matrix U
(u_ij = cos(source_i, target_j)): the translation of sentence i must win
the softmax of row i and of column i.

    L = -(1/K) * sum_i [log softmax_k(u_ik / tau)_i + log softmax_k(u_ki / tau)_i]
    dL/dU = (P + Q - 2I) / (K * tau)

where P is the row-wise and Q the column-wise softmax of U / tau.
"""

from __future__ import annotations

import numpy as np
from scipy.special import log_softmax

from swekit.common.errors import DataError, UsageError
from swekit.domain.distill.similarity import SimilarityMatrix
from swekit.domain.embed_core.bags import TokenBags
from swekit.domain.train.backprop import backward_bags, forward_bags

SparseGrad = tuple[np.ndarray, np.ndarray]


def _check(u: np.ndarray, tau: float) -> None:
    if tau <= 0:
        raise UsageError(f"tau must be > 0, got {tau}")
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise UsageError(f"cross-lingual matrix must be square, got {u.shape}")
    if u.shape[0] < 1:
        raise DataError("degenerate batch: K = 0")


def positive_probabilities(u: np.ndarray, tau: float) -> np.ndarray:
    """softmax over k of u_ik / tau, taken at k = i."""
    return np.exp(np.diag(log_softmax(np.asarray(u, dtype=np.float64) / tau, axis=1)))


def _loss_terms(u: np.ndarray, tau: float) -> tuple[float, np.ndarray, np.ndarray]:
    z = u / tau
    log_rows = log_softmax(z, axis=1)
    log_cols = log_softmax(z, axis=0)
    k = u.shape[0]
    loss = -float(np.trace(log_rows) + np.trace(log_cols)) / k
    return max(loss, 0.0), np.exp(log_rows), np.exp(log_cols)


def contrastive_loss(u: SimilarityMatrix | np.ndarray, tau: float = 0.05) -> float:
    uv = u.values if isinstance(u, SimilarityMatrix) else np.asarray(u, dtype=np.float64)
    _check(uv, tau)
    return _loss_terms(uv, tau)[0]


def contrastive_loss_and_grad(
    src_bags: TokenBags,
    tgt_bags: TokenBags,
    src_matrix: np.ndarray,
    tgt_matrix: np.ndarray,
    tau: float,
) -> tuple[float, SparseGrad, SparseGrad]:
    """(loss, source-side gradient, target-side gradient) for one batch of pairs."""
    ns, norm_s = forward_bags(src_matrix, src_bags)
    nt, norm_t = forward_bags(tgt_matrix, tgt_bags)
    u = ns @ nt.T
    _check(u, tau)
    loss, p, q = _loss_terms(u, tau)
    k = u.shape[0]
    du = (p + q - 2.0 * np.eye(k)) / (k * tau)
    src = backward_bags(src_bags, ns, norm_s, du @ nt)
    tgt = backward_bags(tgt_bags, nt, norm_t, du.T @ ns)
    return loss, src, tgt


def contrastive_grad(
    src_bags: TokenBags,
    tgt_bags: TokenBags,
    src_matrix: np.ndarray,
    tgt_matrix: np.ndarray | None = None,
    tau: float = 0.05,
) -> tuple[SparseGrad, SparseGrad]:
    """Per-side sparse gradients; pass one matrix for a shared joint table."""
    tgt = src_matrix if tgt_matrix is None else tgt_matrix
    _, gs, gt = contrastive_loss_and_grad(src_bags, tgt_bags, src_matrix, tgt, tau)
    return gs, gt
