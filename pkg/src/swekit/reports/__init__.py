"""Evaluation and analysis reports.

This package is read-only with respect to the embedding tables:
- it encodes with tables/encoders handed to it
- it never modifies a table

Modules:
- metrics: Spearman / Pearson
- datasets: TSV loaders (validated against data/schema contracts)
- sts: STS evaluation (100 * Spearman)
- retrieval: translation retrieval P/R/F1 and P@1
- analysis: norm profiles, norm/frequency correlation, principal-component studies
"""

from .metrics import pearson, spearman
from .datasets import (
    RetrievalDataset,
    ScoredDocs,
    StsDataset,
    load_retrieval_dataset,
    load_scored_docs,
    load_sts_dataset,
    load_tag_map,
)
from .sts import pair_cosines, sts_eval
from .retrieval import RetrievalScores, nearest_neighbor_accuracy, retrieval_eval, retrieval_scores
from .analysis import (
    component_correlate,
    export_component_scatter,
    norm_freq_spearman,
    pos_norm_profile,
    write_norm_profile_tsv,
)

__all__ = [
    "pearson",
    "spearman",
    "RetrievalDataset",
    "ScoredDocs",
    "StsDataset",
    "load_retrieval_dataset",
    "load_scored_docs",
    "load_sts_dataset",
    "load_tag_map",
    "pair_cosines",
    "sts_eval",
    "RetrievalScores",
    "nearest_neighbor_accuracy",
    "retrieval_eval",
    "retrieval_scores",
    "component_correlate",
    "export_component_scatter",
    "norm_freq_spearman",
    "pos_norm_profile",
    "write_norm_profile_tsv",
]
