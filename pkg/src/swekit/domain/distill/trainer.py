"""Distillation driver: fine-tune a student table against frozen teacher similarities."""

from __future__ import annotations

import logging

import numpy as np

from swekit.domain.distill.kd import kd_loss_and_grad, mean_abs_gap
from swekit.domain.distill.teacher import TeacherBatchSource
from swekit.domain.embed_core.bags import TokenBags, bags_from_records, drop_zero_means
from swekit.domain.embed_core.table import EmbeddingTable, StageTag
from swekit.domain.train.backprop import forward_bags, unit_rows
from swekit.domain.train.batching import fixed_batches, split_train_val
from swekit.domain.train.loop import TrainConfig, TrainRun, run_training

logger = logging.getLogger(__name__)

MIN_KD_BATCH = 3


def _teacher_units(vectors: np.ndarray) -> np.ndarray:
    return unit_rows(vectors, "teacher vector")[0]


def train_kd(
    student: EmbeddingTable,
    teacher: TeacherBatchSource,
    config: TrainConfig | None = None,
) -> tuple[EmbeddingTable, TrainRun]:
    cfg = config or TrainConfig()
    if student.stage_tag is not StageTag.PCA:
        logger.warning(
            f"distilling a {student.stage_tag.value} table; distillation is expected to run after PCA "
            "(without PCA, distillation brings no improvement over the undistilled table)"
        )

    bags, kept = bags_from_records(student.vocab, teacher.sentences)
    if kept.size < len(teacher):
        logger.warning(f"{len(teacher) - kept.size} teacher sentences have no in-vocabulary token and were dropped")
    bags, kept, n_zero = drop_zero_means(student.matrix, bags, kept)
    if n_zero:
        logger.warning(f"{n_zero} teacher sentences average to the zero vector and were dropped")
    t_unit = _teacher_units(teacher.vectors[kept])

    rng = np.random.default_rng(cfg.seed)
    train_idx, val_idx = split_train_val(kept.size, cfg.val_fraction, rng, min_val=MIN_KD_BATCH)
    logger.info(f"distill: {train_idx.size} train / {val_idx.size} validation sentences, K={cfg.batch_size}")

    def batch_step(params: np.ndarray, idx: np.ndarray):
        tu = t_unit[idx]
        return kd_loss_and_grad(bags.subset(idx), params, tu @ tu.T, cfg.tau)

    val_chunks = fixed_batches(val_idx, cfg.batch_size, MIN_KD_BATCH)

    def val_loss(params: np.ndarray) -> float:
        losses = []
        for idx in val_chunks:
            tu = t_unit[idx]
            losses.append(kd_loss_and_grad(bags.subset(idx), params, tu @ tu.T, cfg.tau)[0])
        return float(np.mean(losses))

    params = np.array(student.matrix, dtype=np.float64, copy=True)
    best, run = run_training(
        params, train_idx, batch_step, cfg, val_loss if val_chunks else None, label="distill"
    )
    return student.with_matrix(best, StageTag.TRAINED), run


def similarity_gap(matrix: np.ndarray, bags: TokenBags, teacher_vectors: np.ndarray) -> float:
    """mean |S - T| for one batch of student bags and aligned teacher vectors."""
    unit, _ = forward_bags(matrix, bags)
    tu = _teacher_units(teacher_vectors)
    return mean_abs_gap(unit @ unit.T, tu @ tu.T)
