"""swekit.domain.distill.teacher

Teacher sentence embeddings. The "SWT1" file is shared with `encode` output:
    b"SWT1" | u32 count | u32 d | count*d float32 (row-major)
It is paired with a UTF-8 sentence list, one sentence per line.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from swekit.common.errors import DataError, FormatError
from swekit.data.io.binfmt import BinaryReader, write_f32, write_u32
from swekit.domain.embed_core.sentence import SentenceRecord, read_sentences
from swekit.domain.embed_core.table import first_nonfinite_row

logger = logging.getLogger(__name__)

SENT_MAGIC = b"SWT1"


def write_sentence_embeddings(path: str | Path, vectors: np.ndarray) -> None:
    x = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "wb") as fh:
        fh.write(SENT_MAGIC)
        write_u32(fh, x.shape[0])
        write_u32(fh, x.shape[1])
        write_f32(fh, x)


def read_sentence_embeddings(path: str | Path) -> np.ndarray:
    p = Path(path)
    with open(p, "rb") as fh:
        r = BinaryReader(fh, str(p))
        r.read_magic(SENT_MAGIC)
        count = r.read_u32("count")
        d = r.read_u32("dimension")
        rows = r.read_f32(count * d, "sentence vectors").reshape(count, d)
        if fh.read(1):
            raise FormatError(f"{p}: trailing bytes after {count} rows")
    return rows.astype(np.float64)


@dataclass(frozen=True)
class TeacherBatchSource:
    sentences: tuple[SentenceRecord, ...]
    vectors: np.ndarray

    def __post_init__(self) -> None:
        v = np.atleast_2d(np.asarray(self.vectors, dtype=np.float64))
        if v.shape[0] != len(self.sentences):
            raise DataError(f"teacher has {v.shape[0]} vectors for {len(self.sentences)} sentences")
        bad = first_nonfinite_row(v)
        if bad is not None:
            raise DataError(f"teacher vector {bad} is not finite")
        object.__setattr__(self, "sentences", tuple(self.sentences))
        object.__setattr__(self, "vectors", v)

    def __len__(self) -> int:
        return len(self.sentences)

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])


def teacher_from_arrays(sentences: Sequence[SentenceRecord], vectors: np.ndarray) -> TeacherBatchSource:
    return TeacherBatchSource(tuple(sentences), vectors)


def load_teacher(
    sentences_path: str | Path,
    dump_path: str | Path,
    lowercase: bool = True,
    language: str | None = None,
) -> TeacherBatchSource:
    sentences = read_sentences(sentences_path, language=language, lowercase=lowercase)
    vectors = read_sentence_embeddings(dump_path)
    logger.info(f"teacher: {len(sentences)} sentences, d={vectors.shape[1]} from {dump_path}")
    return TeacherBatchSource(tuple(sentences), vectors)
