"""
extract: contextual occurrence dumps -> static word embeddings (per-word mean).
"""

from .dump import OccurrenceDump, average_subwords, open_dump, write_dump, write_dump_jsonl
from .decontextualize import (
    DEFAULT_MAX_OCCURRENCES,
    Decontextualized,
    decontextualize,
    decontextualize_many,
    write_occurrence_report,
)

__all__ = [
    "OccurrenceDump",
    "average_subwords",
    "open_dump",
    "write_dump",
    "write_dump_jsonl",
    "DEFAULT_MAX_OCCURRENCES",
    "Decontextualized",
    "decontextualize",
    "decontextualize_many",
    "write_occurrence_report",
]
