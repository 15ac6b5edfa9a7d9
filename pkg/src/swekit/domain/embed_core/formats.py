"""swekit.domain.embed_core.formats

Embedding table files.

Binary (magic "SWE1"):
    b"SWE1" | u8 version=1 | u32 |V| | u32 d | u8 stage_tag
    | |V| x (u32 len, UTF-8 word) | |V| x d little-endian float32, row-major

Text (word2vec style):
    "|V| d" header line, then "word v1 ... vd" per row (single spaces).

Values are float32 on disk; a binary round trip of a loaded table is
bit-identical.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

import numpy as np

from swekit.common.errors import CorruptEmbeddingError, FormatError, UsageError
from swekit.data.io.binfmt import BinaryReader, write_f32, write_str, write_u32, write_u8
from swekit.domain.embed_core.table import EmbeddingTable, StageTag, first_nonfinite_row
from swekit.domain.embed_core.vocab import CASE_SENSITIVE, Vocabulary

logger = logging.getLogger(__name__)

TABLE_MAGIC = b"SWE1"
TABLE_VERSION = 1
FORMATS = ("binary", "text")


def save_table(table: EmbeddingTable, path: str | Path, format: str = "binary") -> None:
    if format not in FORMATS:
        raise UsageError(f"format must be one of {FORMATS}, got {format!r}")
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    if format == "binary":
        with open(p, "wb") as fh:
            fh.write(TABLE_MAGIC)
            write_u8(fh, TABLE_VERSION)
            write_u32(fh, len(table))
            write_u32(fh, table.dim)
            write_u8(fh, table.stage_tag.code)
            for w in table.vocab.words:
                write_str(fh, w)
            write_f32(fh, table.matrix)
    else:
        for w in table.vocab.words:
            if not w or any(ch.isspace() for ch in w):
                raise UsageError(f"word {w!r} cannot be written to the text format (whitespace)")
        m32 = table.matrix.astype(np.float32)
        with open(p, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"{len(table)} {table.dim}\n")
            for w, row in zip(table.vocab.words, m32):
                fh.write(w + " " + " ".join(f"{v:.9g}" for v in row) + "\n")
    logger.info(f"saved {format} table {p} ({len(table)} x {table.dim}, stage={table.stage_tag.value})")


def load_table(
    path: str | Path,
    case_mode: str = CASE_SENSITIVE,
    stage_tag: StageTag | str | None = None,
) -> EmbeddingTable:
    """Load a table; magic bytes pick the binary reader, anything else is text.

    `stage_tag` only applies to text files, which carry none (default raw).
    """
    p = Path(path)
    with open(p, "rb") as fh:
        head = fh.read(4)
    if head == TABLE_MAGIC:
        return _load_binary(p, case_mode)
    if head[:2] == b"SW" and head[2:3].isalpha() and head[3:4].isdigit():
        raise FormatError(f"{p} is not an embedding table (magic {head!r})")
    return _load_text(p, case_mode, StageTag(stage_tag or StageTag.RAW))


def _load_binary(p: Path, case_mode: str) -> EmbeddingTable:
    with open(p, "rb") as fh:
        r = BinaryReader(fh, str(p))
        r.read_magic(TABLE_MAGIC)
        version = r.read_u8("version")
        if version != TABLE_VERSION:
            raise FormatError(f"{p}: unsupported table version {version}")
        n = r.read_u32("vocabulary size")
        d = r.read_u32("dimension")
        tag = StageTag.from_code(r.read_u8("stage tag"))
        words = [r.read_str("word") for _ in range(n)]
        matrix = r.read_f32(n * d, "matrix").reshape(n, d)
        if fh.read(1):
            raise FormatError(f"{p}: trailing bytes after matrix")
    bad = first_nonfinite_row(matrix)
    if bad is not None:
        raise CorruptEmbeddingError(words[bad], str(p))
    return EmbeddingTable(Vocabulary(tuple(words), None, case_mode), matrix.astype(np.float64), tag)


def _load_text(p: Path, case_mode: str, tag: StageTag) -> EmbeddingTable:
    with open(p, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2 or not all(h.isdigit() for h in header):
            raise FormatError(f"{p}: line 1: expected header '<count> <dim>'")
        n, d = int(header[0]), int(header[1])
        if d < 1:
            raise FormatError(f"{p}: line 1: dimension must be positive")
        words: list[str] = []
        matrix = np.empty((n, d), dtype=np.float64)
        lineno = 1
        for lineno, line in enumerate(fh, start=2):
            parts = line.split()
            if not parts:
                continue
            if len(words) >= n:
                raise FormatError(f"{p}: line {lineno}: more rows than the header count {n}")
            if len(parts) != d + 1:
                raise FormatError(f"{p}: line {lineno}: expected {d} values, got {len(parts) - 1}")
            try:
                row = np.array(parts[1:], dtype=np.float64)
            except ValueError as e:
                raise FormatError(f"{p}: line {lineno}: {e}") from e
            if not np.isfinite(row).all():
                raise CorruptEmbeddingError(parts[0], f"{p} line {lineno}")
            matrix[len(words)] = row
            words.append(parts[0])
    if len(words) != n:
        raise FormatError(f"{p}: header says {n} rows but file has {len(words)}")
    return EmbeddingTable(Vocabulary(tuple(words), None, case_mode), matrix, tag)
