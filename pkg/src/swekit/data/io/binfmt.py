"""swekit.data.io.binfmt

Little-endian binary primitives shared by the SWE1/SWD1/SWT1/SWP1 formats.

All integers are unsigned 32-bit, strings are u32-length-prefixed UTF-8.
"""

from __future__ import annotations

import struct
from typing import BinaryIO

import numpy as np

from swekit.common.errors import FormatError

_U32 = struct.Struct("<I")


class BinaryReader:
    """Reads from a file object and raises `FormatError("unexpected EOF")` on short reads."""

    def __init__(self, fh: BinaryIO, name: str = "") -> None:
        self.fh = fh
        self.name = name

    def _eof(self, what: str) -> FormatError:
        where = f" in {self.name}" if self.name else ""
        return FormatError(f"unexpected EOF while reading {what}{where}")

    def read_exact(self, n: int, what: str = "data") -> bytes:
        buf = self.fh.read(n)
        if len(buf) != n:
            raise self._eof(what)
        return buf

    def read_magic(self, expected: bytes) -> None:
        got = self.fh.read(len(expected))
        if got != expected:
            raise FormatError(f"bad magic {got!r} (expected {expected!r}) in {self.name or 'stream'}")

    def read_u8(self, what: str = "byte") -> int:
        return self.read_exact(1, what)[0]

    def read_u32(self, what: str = "u32") -> int:
        return _U32.unpack(self.read_exact(4, what))[0]

    def read_str(self, what: str = "string") -> str:
        n = self.read_u32(what + " length")
        try:
            return self.read_exact(n, what).decode("utf-8")
        except UnicodeDecodeError as e:
            raise FormatError(f"invalid UTF-8 in {what}: {e}") from e

    def read_f32(self, count: int, what: str = "floats") -> np.ndarray:
        return np.frombuffer(self.read_exact(4 * count, what), dtype="<f4", count=count)

    def read_f64(self, count: int, what: str = "doubles") -> np.ndarray:
        return np.frombuffer(self.read_exact(8 * count, what), dtype="<f8", count=count)


def write_u8(fh: BinaryIO, v: int) -> None:
    fh.write(bytes([v]))


def write_u32(fh: BinaryIO, v: int) -> None:
    fh.write(_U32.pack(int(v)))


def write_str(fh: BinaryIO, s: str) -> None:
    raw = s.encode("utf-8")
    write_u32(fh, len(raw))
    fh.write(raw)


def write_f32(fh: BinaryIO, arr: np.ndarray) -> None:
    fh.write(np.ascontiguousarray(arr, dtype="<f4").tobytes())


def write_f64(fh: BinaryIO, arr: np.ndarray) -> None:
    fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())
