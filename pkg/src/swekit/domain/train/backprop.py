"""Chain rule from unit sentence vectors back to word rows.

Forward: e_b = mean of rows in bag b, n_b = e_b / ||e_b||.
Backward: de_b = (I - n_b n_bᵀ) dn_b / ||e_b||, then every token of bag b
receives de_b / len_b. Repeated tokens accumulate.
"""

from __future__ import annotations

import numpy as np

from swekit.common.errors import DataError
from swekit.domain.embed_core.bags import TokenBags, bag_means


def unit_rows(x: np.ndarray, what: str = "row") -> tuple[np.ndarray, np.ndarray]:
    """(x / ||x||, ||x||); a zero-norm row is an error naming its index."""
    norms = np.linalg.norm(x, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise DataError(f"zero-norm {what} at index {int(zero[0])}")
    return x / norms[:, None], norms


def forward_bags(matrix: np.ndarray, bags: TokenBags) -> tuple[np.ndarray, np.ndarray]:
    """Unit sentence vectors and their pre-normalisation norms."""
    return unit_rows(bag_means(matrix, bags), "sentence embedding")


def backward_bags(
    bags: TokenBags,
    unit: np.ndarray,
    norms: np.ndarray,
    d_unit: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Sparse gradient (unique rows, grads) over the word rows touched by `bags`."""
    proj = d_unit - unit * np.sum(unit * d_unit, axis=1, keepdims=True)
    d_mean = proj / norms[:, None] / bags.lengths[:, None]
    per_token = d_mean[bags.owner()]
    rows, inv = np.unique(bags.ids, return_inverse=True)
    grads = np.zeros((rows.size, d_unit.shape[1]), dtype=np.float64)
    np.add.at(grads, inv, per_token)
    return rows, grads


def merge_sparse(*parts: tuple[np.ndarray, np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Sum several sparse row gradients into one with unique rows."""
    all_rows = np.concatenate([r for r, _ in parts])
    all_grads = np.concatenate([g for _, g in parts], axis=0)
    rows, inv = np.unique(all_rows, return_inverse=True)
    grads = np.zeros((rows.size, all_grads.shape[1]), dtype=np.float64)
    np.add.at(grads, inv, all_grads)
    return rows, grads


def densify(rows: np.ndarray, grads: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    out = np.zeros(shape, dtype=np.float64)
    out[rows] = grads
    return out
