"""swekit.domain.extract.dump

Occurrence dumps: per-occurrence contextual vectors written by an upstream
sentence encoder.

Binary (magic "SWD1"):
    b"SWD1" | u32 d | u32 word count | words (u32 len, UTF-8)
    | records until EOF: u32 word-id (into the dump word list), d x float32

JSONL fallback (hand-built fixtures), one record per line:
    {"word": "bank", "vec": [0.1, ...]}
    {"word": "tokeniser", "pieces": [[...], [...], [...]]}   # averaged here
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from swekit.common.errors import DataError, FormatError, UsageError
from swekit.data.io.binfmt import BinaryReader, write_f32, write_str, write_u32

DUMP_MAGIC = b"SWD1"
CHUNK_RECORDS = 65536


def average_subwords(pieces: Sequence[Sequence[float]] | np.ndarray) -> np.ndarray:
    """Componentwise mean of subword piece vectors."""
    if len(pieces) == 0:
        raise DataError("cannot average an empty list of subword vectors")
    arr = np.asarray(pieces, dtype=np.float64)
    if arr.ndim != 2:
        raise DataError("subword vectors must all have the same length")
    return arr.mean(axis=0)


@dataclass
class OccurrenceDump:
    """A dump opened for streaming. `chunks()` yields (word_ids, vectors) blocks in stream order."""

    path: Path
    dim: int
    words: list[str] = field(default_factory=list)
    kind: str = "binary"
    _offset: int = 0

    def chunks(self, chunk_records: int = CHUNK_RECORDS) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        if self.kind == "binary":
            yield from self._binary_chunks(chunk_records)
        else:
            yield from self._jsonl_chunks(chunk_records)

    def _binary_chunks(self, chunk_records: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        rec = np.dtype([("wid", "<u4"), ("vec", "<f4", (self.dim,))])
        n_words = len(self.words)
        with open(self.path, "rb") as fh:
            fh.seek(self._offset)
            while True:
                buf = fh.read(rec.itemsize * chunk_records)
                if not buf:
                    return
                if len(buf) % rec.itemsize:
                    raise FormatError(f"unexpected EOF inside an occurrence record in {self.path}")
                block = np.frombuffer(buf, dtype=rec)
                wid = block["wid"].astype(np.int64)
                if wid.size and int(wid.max()) >= n_words:
                    raise FormatError(f"{self.path}: word-id {int(wid.max())} outside the dump word list")
                yield wid, block["vec"]

    def _jsonl_chunks(self, chunk_records: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        # word list and ids are assigned in first-seen order
        index = {w: i for i, w in enumerate(self.words)}
        ids: list[int] = []
        vecs: list[np.ndarray] = []
        with open(self.path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                    word = obj["word"]
                    vec = average_subwords(obj["pieces"]) if "pieces" in obj else np.asarray(obj["vec"], dtype=np.float64)
                except (KeyError, ValueError, TypeError) as e:
                    raise FormatError(f"{self.path}: line {lineno}: {e}") from e
                if vec.ndim != 1 or vec.shape[0] != self.dim:
                    raise DataError(
                        f"{self.path}: line {lineno}: vector length {vec.shape[-1] if vec.ndim else 0} != dump dim {self.dim}"
                    )
                if word not in index:
                    index[word] = len(self.words)
                    self.words.append(word)
                ids.append(index[word])
                vecs.append(vec)
                if len(ids) == chunk_records:
                    yield np.asarray(ids, dtype=np.int64), np.vstack(vecs)
                    ids, vecs = [], []
        if ids:
            yield np.asarray(ids, dtype=np.int64), np.vstack(vecs)


def open_dump(path: str | Path) -> OccurrenceDump:
    p = Path(path)
    with open(p, "rb") as fh:
        head = fh.read(4)
        if head == DUMP_MAGIC:
            r = BinaryReader(fh, str(p))
            d = r.read_u32("dimension")
            n = r.read_u32("word count")
            words = [r.read_str("word") for _ in range(n)]
            if d < 1:
                raise FormatError(f"{p}: dump dimension must be positive")
            return OccurrenceDump(p, d, words, "binary", fh.tell())
    # JSONL: the first record fixes the dimension
    with open(p, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                vec = average_subwords(obj["pieces"]) if "pieces" in obj else np.asarray(obj["vec"], dtype=np.float64)
            except (KeyError, ValueError, TypeError) as e:
                raise FormatError(f"{p}: line {lineno}: not an SWD1 dump nor a JSONL record ({e})") from e
            return OccurrenceDump(p, int(vec.shape[0]), [], "jsonl", 0)
    raise DataError(f"{p}: empty dump")


def write_dump(
    path: str | Path,
    words: Sequence[str],
    records: Iterable[tuple[int, np.ndarray]],
    dim: int,
) -> int:
    """Write an SWD1 dump; returns the number of records written."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(p, "wb") as fh:
        fh.write(DUMP_MAGIC)
        write_u32(fh, dim)
        write_u32(fh, len(words))
        for w in words:
            write_str(fh, w)
        for wid, vec in records:
            if not 0 <= wid < len(words):
                raise UsageError(f"word-id {wid} outside the word list")
            v = np.asarray(vec)
            if v.shape != (dim,):
                raise DataError(f"record vector shape {v.shape} != ({dim},)")
            write_u32(fh, wid)
            write_f32(fh, v)
            count += 1
    return count


def write_dump_jsonl(path: str | Path, records: Iterable[tuple[str, Sequence[float]]]) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", encoding="utf-8") as fh:
        for word, vec in records:
            fh.write(json.dumps({"word": word, "vec": [float(x) for x in vec]}, ensure_ascii=False) + "\n")
