"""
train: optimiser, batching, backprop helpers and the early-stopping loop shared
by distill and xlingual.
"""

from .adam import SparseAdam
from .backprop import backward_bags, densify, forward_bags, merge_sparse, unit_rows
from .batching import epoch_batches, fixed_batches, split_train_val
from .loop import TrainConfig, TrainRun, run_training

__all__ = [
    "SparseAdam",
    "backward_bags",
    "densify",
    "forward_bags",
    "merge_sparse",
    "unit_rows",
    "epoch_batches",
    "fixed_batches",
    "split_train_val",
    "TrainConfig",
    "TrainRun",
    "run_training",
]
