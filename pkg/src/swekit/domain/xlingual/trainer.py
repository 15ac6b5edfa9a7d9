"""Contrastive refinement of a joint cross-lingual table on translation pairs."""

from __future__ import annotations

import logging

import numpy as np

from swekit.common.errors import DataError
from swekit.domain.embed_core.bags import TokenBags, bags_from_records, drop_zero_means
from swekit.domain.embed_core.sentence import SentenceRecord
from swekit.domain.embed_core.table import EmbeddingTable, StageTag
from swekit.domain.train.backprop import forward_bags, merge_sparse
from swekit.domain.train.batching import fixed_batches, split_train_val
from swekit.domain.train.loop import TrainConfig, TrainRun, run_training
from swekit.domain.xlingual.contrastive import contrastive_loss_and_grad
from swekit.domain.xlingual.corpus import ParallelCorpus

logger = logging.getLogger(__name__)

MIN_CL_BATCH = 2


def _usable_bags(table: EmbeddingTable, records: tuple[SentenceRecord, ...]) -> tuple[TokenBags, np.ndarray, int]:
    """Bags of one side, without out-of-vocabulary or zero-mean sentences; also returns the zero-mean count."""
    bags, kept = bags_from_records(table.vocab, records)
    return drop_zero_means(table.matrix, bags, kept)


def train_contrastive(
    table: EmbeddingTable,
    corpus: ParallelCorpus,
    config: TrainConfig | None = None,
) -> tuple[EmbeddingTable, TrainRun]:
    cfg = config or TrainConfig()
    src_bags, src_kept, src_zero = _usable_bags(table, corpus.sources)
    tgt_bags, tgt_kept, tgt_zero = _usable_bags(table, corpus.targets)
    both = np.intersect1d(src_kept, tgt_kept)
    if src_zero or tgt_zero:
        logger.warning(f"{src_zero + tgt_zero} pair sides average to the zero vector")
    if both.size < len(corpus):
        logger.warning(
            f"{len(corpus) - both.size} pairs have a side without in-vocabulary tokens or with a zero mean and were dropped"
        )
    src_bags = src_bags.subset(np.searchsorted(src_kept, both))
    tgt_bags = tgt_bags.subset(np.searchsorted(tgt_kept, both))
    if both.size < cfg.batch_size:
        raise DataError(f"parallel corpus of {both.size} usable pairs is smaller than one batch ({cfg.batch_size})")

    rng = np.random.default_rng(cfg.seed)
    train_idx, val_idx = split_train_val(both.size, cfg.val_fraction, rng, min_val=MIN_CL_BATCH)
    logger.info(f"xlingual: {train_idx.size} train / {val_idx.size} validation pairs, K={cfg.batch_size}")

    def batch_step(params: np.ndarray, idx: np.ndarray):
        loss, gs, gt = contrastive_loss_and_grad(src_bags.subset(idx), tgt_bags.subset(idx), params, params, cfg.tau)
        rows, grads = merge_sparse(gs, gt)
        return loss, rows, grads

    val_chunks = fixed_batches(val_idx, cfg.batch_size, MIN_CL_BATCH)

    def val_loss(params: np.ndarray) -> float:
        return float(
            np.mean(
                [
                    contrastive_loss_and_grad(src_bags.subset(i), tgt_bags.subset(i), params, params, cfg.tau)[0]
                    for i in val_chunks
                ]
            )
        )

    params = np.array(table.matrix, dtype=np.float64, copy=True)
    best, run = run_training(
        params, train_idx, batch_step, cfg, val_loss if val_chunks else None, label="xlingual"
    )
    return table.with_matrix(best, StageTag.TRAINED), run


def pair_retrieval_accuracy(table: EmbeddingTable, corpus: ParallelCorpus) -> float:
    """P@1 of target retrieval by cosine nearest neighbour over the corpus pairs."""
    src_bags, src_kept, _ = _usable_bags(table, corpus.sources)
    tgt_bags, tgt_kept, _ = _usable_bags(table, corpus.targets)
    both = np.intersect1d(src_kept, tgt_kept)
    if both.size == 0:
        return 0.0
    ns, _ = forward_bags(table.matrix, src_bags.subset(np.searchsorted(src_kept, both)))
    nt, _ = forward_bags(table.matrix, tgt_bags.subset(np.searchsorted(tgt_kept, both)))
    pred = np.argmax(ns @ nt.T, axis=1)
    return float(np.mean(pred == np.arange(both.size)))
