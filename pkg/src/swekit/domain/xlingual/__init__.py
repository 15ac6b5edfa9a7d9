"""
xlingual: cross-lingual refinement with a bidirectional contrastive loss.
"""

from .corpus import ParallelCorpus, make_parallel_corpus, read_parallel_tsv
from .contrastive import contrastive_grad, contrastive_loss, contrastive_loss_and_grad, positive_probabilities
from .trainer import pair_retrieval_accuracy, train_contrastive

__all__ = [
    "ParallelCorpus",
    "make_parallel_corpus",
    "read_parallel_tsv",
    "contrastive_grad",
    "contrastive_loss",
    "contrastive_loss_and_grad",
    "positive_probabilities",
    "pair_retrieval_accuracy",
    "train_contrastive",
]
