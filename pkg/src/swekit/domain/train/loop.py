"""swekit.domain.train.loop

Shared optimisation loop for distillation and contrastive refinement.

The objective plugs in as two callables:
    batch_step(params, batch_idx) -> (loss, rows, grads)
    val_loss(params) -> float
Validation runs at step 0, then every `val_every` steps and once more at the
end. After `patience` evaluations without improvement training stops and the
best snapshot is returned.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from swekit.common.errors import UsageError
from swekit.domain.train.adam import SparseAdam
from swekit.domain.train.batching import epoch_batches

logger = logging.getLogger(__name__)

BatchStep = Callable[[np.ndarray, np.ndarray], tuple[float, np.ndarray, np.ndarray]]
ValLoss = Callable[[np.ndarray], float]

LOG_EVERY = 500


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 0.001
    steps: int = 30_000
    batch_size: int = 128
    tau: float = 0.05
    seed: int = 0
    patience: int = 5
    val_every: int = 500
    val_fraction: float = 0.02
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self) -> None:
        if self.tau <= 0:
            raise UsageError(f"tau must be > 0, got {self.tau}")
        if self.steps < 0:
            raise UsageError(f"steps must be >= 0, got {self.steps}")
        if self.batch_size < 1:
            raise UsageError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.patience < 1 or self.val_every < 1:
            raise UsageError("patience and val_every must be >= 1")


@dataclass
class TrainRun:
    config: TrainConfig
    optimizer: SparseAdam
    step: int = 0
    best_val: float = float("inf")
    best_step: int = 0
    bad_evals: int = 0
    stopped_early: bool = False
    history: list[tuple[int, float]] = field(default_factory=list)
    val_history: list[tuple[int, float]] = field(default_factory=list)

    def train_losses(self) -> np.ndarray:
        return np.asarray([loss for _, loss in self.history], dtype=np.float64)


def run_training(
    params: np.ndarray,
    train_idx: np.ndarray,
    batch_step: BatchStep,
    cfg: TrainConfig,
    val_loss: Optional[ValLoss] = None,
    label: str = "train",
) -> tuple[np.ndarray, TrainRun]:
    """Optimise `params` in place; returns (best parameters, run state)."""
    rng = np.random.default_rng(cfg.seed)
    run = TrainRun(cfg, SparseAdam(params.shape, cfg.lr, cfg.beta1, cfg.beta2, cfg.eps))
    best = params.copy()

    def evaluate() -> bool:
        loss = float(val_loss(params))
        run.val_history.append((run.step, loss))
        if loss < run.best_val:
            run.best_val, run.best_step, run.bad_evals = loss, run.step, 0
            best[...] = params
        else:
            run.bad_evals += 1
        logger.info(f"{label}: step {run.step} val_loss={loss:.6f} best={run.best_val:.6f}@{run.best_step}")
        return run.bad_evals >= cfg.patience

    if val_loss is not None:
        evaluate()

    batches = epoch_batches(train_idx, cfg.batch_size, rng) if cfg.steps else iter(())
    for batch in batches:
        loss, rows, grads = batch_step(params, batch)
        run.optimizer.step(params, rows, grads)
        run.step += 1
        run.history.append((run.step, float(loss)))
        if val_loss is None and run.step % LOG_EVERY == 0:
            logger.info(f"{label}: step {run.step} loss={loss:.6f}")
        if val_loss is not None and run.step % cfg.val_every == 0 and evaluate():
            run.stopped_early = True
            logger.info(f"{label}: patience exhausted at step {run.step}, restoring step {run.best_step}")
            break
        if run.step >= cfg.steps:
            break

    if val_loss is None:
        return params.copy(), run
    if not run.stopped_early and run.step % cfg.val_every != 0:
        evaluate()
    return best, run
