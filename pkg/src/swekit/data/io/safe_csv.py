from __future__ import annotations

from pathlib import Path
from typing import Any
import csv
import warnings

import pandas as pd

from swekit.common.errors import DataError


def to_tsv_safely(df: pd.DataFrame, path: str | Path, **kwargs: Any) -> None:
    """Write a TSV without noisy numpy RuntimeWarnings.

    Newer numpy versions emit a RuntimeWarning ("invalid value encountered in cast")
    when float arrays containing NaN are cast to string during formatting.
    Words may contain quote characters, so quoting is disabled and tabs/newlines
    inside cells are not allowed by the formats we write.

    We suppress only this specific warning during the write.
    """
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    kwargs.setdefault("sep", "\t")
    kwargs.setdefault("index", False)
    kwargs.setdefault("quoting", csv.QUOTE_NONE)
    kwargs.setdefault("lineterminator", "\n")
    with warnings.catch_warnings():
        warnings.filterwarnings(
            "ignore",
            message="invalid value encountered in cast",
            category=RuntimeWarning,
        )
        df.to_csv(path, **kwargs)


def read_tsv(path: str | Path, names: list[str], **kwargs: Any) -> pd.DataFrame:
    """Read a header-less UTF-8 TSV with literal cells (no quoting, no NA parsing).

    Rows with too few cells come back with NaN in the missing columns. An empty
    file gives an empty frame; unparseable input raises DataError.
    """
    try:
        return _read(path, names, **kwargs)
    except pd.errors.EmptyDataError:
        return pd.DataFrame(columns=names, dtype=str)
    except pd.errors.ParserError as e:
        raise DataError(f"{path}: malformed TSV: {e}") from e


def _read(path: str | Path, names: list[str], **kwargs: Any) -> pd.DataFrame:
    return pd.read_csv(
        path,
        sep="\t",
        header=None,
        names=names,
        quoting=csv.QUOTE_NONE,
        dtype=str,
        keep_default_na=False,
        index_col=False,
        encoding="utf-8",
        **kwargs,
    )
