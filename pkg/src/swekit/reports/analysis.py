"""Analysis reports over embedding tables.

- pos_norm_profile: mean row norm per POS tag, divided by the largest tag mean
- norm_freq_spearman: rank correlation between row norms and frequency ranks
- component_correlate: Pearson r between one principal component of the
  document embeddings and external document scores
- export_component_scatter: 2-D principal component coordinates per word, as TSV
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from swekit.common.errors import DataError
from swekit.data.io.safe_csv import to_tsv_safely
from swekit.domain.embed_core.table import EmbeddingTable, truncate_vocab
from swekit.domain.embed_core.vocab import split_tag
from swekit.domain.encode.encoder import EncodeOptions, SentenceEncoder
from swekit.domain.encode.tokenizer import SubwordTokenizer
from swekit.domain.pca.transform import PcaTransform, project_components
from swekit.reports.datasets import ScoredDocs
from swekit.reports.metrics import pearson, spearman

logger = logging.getLogger(__name__)


def pos_norm_profile(table: EmbeddingTable, tag_map: Mapping[str, str]) -> dict[str, float]:
    norms = table.norms()
    per_tag: dict[str, list[float]] = {}
    for word, tag in tag_map.items():
        i = table.vocab.id_of(word)
        if i is not None:
            per_tag.setdefault(tag, []).append(float(norms[i]))
    if not per_tag:
        raise DataError("no tagged word is in the vocabulary")
    means = {tag: float(np.mean(v)) for tag, v in sorted(per_tag.items())}
    top = max(means.values())
    if top <= 0.0:
        raise DataError("all tagged words have zero norm")
    return {tag: m / top for tag, m in means.items()}


def write_norm_profile_tsv(profile: Mapping[str, float], path: str | Path) -> None:
    df = pd.DataFrame({"tag": list(profile), "relative_norm": [f"{v:.6f}" for v in profile.values()]})
    to_tsv_safely(df, path, header=False)


def norm_freq_spearman(table: EmbeddingTable) -> float:
    if table.vocab.frequency is None:
        logger.warning("vocabulary has no counts; row order is used as the frequency rank")
    return spearman(table.norms(), table.vocab.frequency_ranks())


def component_correlate(
    docs: ScoredDocs,
    table: EmbeddingTable,
    transform: PcaTransform,
    index: int,
    tokenizer: Optional[SubwordTokenizer] = None,
    opts: Optional[EncodeOptions] = None,
) -> float:
    """Documents are averaged over the un-transformed table (no normalisation) before projection."""
    base = opts or EncodeOptions()
    enc = SentenceEncoder(table, tokenizer, EncodeOptions(False, None, base.lowercase, base.opaque, base.language))
    out = enc.encode_batch(docs.texts)
    keep = ~out.empty
    if not keep.all():
        logger.warning(f"{int((~keep).sum())} documents have no in-vocabulary token and are excluded")
    values = project_components(out.vectors[keep], transform, [index])[:, 0]
    return pearson(values, docs.scores[keep])


def export_component_scatter(
    table: EmbeddingTable,
    transform: PcaTransform,
    path: str | Path,
    components: Sequence[int] = (1, 2),
    restrict: Optional[int] = None,
) -> pd.DataFrame:
    """word, language, pc<i>, pc<j> rows for plotting; language is empty for untagged words."""
    if restrict is not None:
        table = truncate_vocab(table, restrict)
    coords = project_components(table, transform, components)
    tags = [split_tag(w) for w in table.vocab.words]
    df = pd.DataFrame({"word": [w for _, w in tags], "language": [lang or "" for lang, _ in tags]})
    for k, c in enumerate(components):
        df[f"pc{c}"] = [f"{v:.6f}" for v in coords[:, k]]
    to_tsv_safely(df, path)
    return df
