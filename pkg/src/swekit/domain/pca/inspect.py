"""Component inspection: which words sit at the extremes of a principal component."""

from __future__ import annotations

import numpy as np

from swekit.domain.embed_core.table import EmbeddingTable, truncate_vocab
from swekit.domain.pca.transform import PcaTransform, project_components


def top_bottom_words(
    table: EmbeddingTable,
    t: PcaTransform,
    index: int,
    k: int = 5,
    restrict: int | None = 10_000,
) -> tuple[list[tuple[str, float]], list[tuple[str, float]]]:
    """(smallest k, largest k) words by value in component `index` (1-based).

    Only the `restrict` most frequent words are considered; the largest list
    is in descending order.
    """
    if restrict is not None:
        table = truncate_vocab(table, restrict)
    values = project_components(table, t, [index])[:, 0]
    order = np.argsort(values, kind="stable")
    words = table.vocab.words
    smallest = [(words[i], float(values[i])) for i in order[:k]]
    largest = [(words[i], float(values[i])) for i in order[::-1][:k]]
    return smallest, largest
