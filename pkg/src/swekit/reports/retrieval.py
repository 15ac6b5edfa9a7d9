"""Translation retrieval: nearest target by cosine for every source sentence.

Ties go to the lowest target index. A source with an empty encoding makes no
prediction. With a threshold, predictions below it are discarded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from swekit.common.errors import DataError
from swekit.reports.datasets import RetrievalDataset

EncodeFn = Callable[[Sequence[str]], np.ndarray]


@dataclass(frozen=True)
class RetrievalScores:
    precision: float
    recall: float
    f1: float
    n_predicted: int
    n_gold: int
    n_correct: int

    def as_report(self) -> dict[str, float | int]:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "n_predicted": self.n_predicted,
            "n_gold": self.n_gold,
            "n_correct": self.n_correct,
        }


def _safe_div(a: float, b: float) -> float:
    return a / b if b else 0.0


def _unit(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(x, axis=1)
    empty = norms == 0.0
    return x / np.where(empty, 1.0, norms)[:, None], empty


def predict_pairs(src: np.ndarray, tgt: np.ndarray, threshold: Optional[float] = None) -> set[tuple[int, int]]:
    if src.shape[0] == 0 or tgt.shape[0] == 0:
        raise DataError("retrieval needs non-empty source and target sides")
    us, s_empty = _unit(np.asarray(src, dtype=np.float64))
    ut, _ = _unit(np.asarray(tgt, dtype=np.float64))
    sim = us @ ut.T
    best = np.argmax(sim, axis=1)
    best_sim = sim[np.arange(sim.shape[0]), best]
    keep = ~s_empty
    if threshold is not None:
        keep &= best_sim >= threshold
    return {(int(i), int(best[i])) for i in np.flatnonzero(keep)}


def retrieval_scores(predicted: set[tuple[int, int]], gold: set[tuple[int, int]] | frozenset) -> RetrievalScores:
    correct = len(predicted & set(gold))
    p = _safe_div(correct, len(predicted))
    r = _safe_div(correct, len(gold))
    f1 = _safe_div(2 * p * r, p + r)
    return RetrievalScores(p, r, f1, len(predicted), len(gold), correct)


def retrieval_eval(
    dataset: RetrievalDataset,
    src_encode: EncodeFn,
    tgt_encode: EncodeFn,
    threshold: Optional[float] = None,
) -> RetrievalScores:
    src = np.asarray(src_encode(dataset.sources), dtype=np.float64)
    tgt = np.asarray(tgt_encode(dataset.targets), dtype=np.float64)
    return retrieval_scores(predict_pairs(src, tgt, threshold), dataset.gold)


def nearest_neighbor_accuracy(src: np.ndarray, tgt: np.ndarray) -> float:
    """P@1 where row i of `src` should retrieve row i of `tgt`."""
    pred = predict_pairs(np.atleast_2d(src), np.atleast_2d(tgt))
    return _safe_div(sum(1 for s, t in pred if s == t), src.shape[0])
