"""
pca: sentence-level (and word-level) PCA with top-component removal.
"""

from .transform import (
    MODES,
    SENTENCE_LEVEL,
    WORD_LEVEL,
    PcaTransform,
    abtt_skip,
    explained_variance_ratio,
    pretransform,
    project_components,
    reconstruct,
)
from .fit import (
    DEFAULT_SAMPLES,
    CovarianceAccumulator,
    eigen_decompose,
    fit_pca_matrix,
    fit_sentence_pca,
    fit_word_pca,
    sentence_matrix,
)
from .io import load_transform, save_transform
from .inspect import top_bottom_words

__all__ = [
    "MODES",
    "SENTENCE_LEVEL",
    "WORD_LEVEL",
    "PcaTransform",
    "abtt_skip",
    "explained_variance_ratio",
    "pretransform",
    "project_components",
    "reconstruct",
    "DEFAULT_SAMPLES",
    "CovarianceAccumulator",
    "eigen_decompose",
    "fit_pca_matrix",
    "fit_sentence_pca",
    "fit_word_pca",
    "sentence_matrix",
    "load_transform",
    "save_transform",
    "top_bottom_words",
]
