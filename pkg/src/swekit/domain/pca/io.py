"""swekit.domain.pca.io

PCA transform files (magic "SWP1"):
    b"SWP1" | u8 version=1 | u32 d | u32 skip | u32 keep | u8 mode (0 sentence, 1 word)
    | d float64 mean | d*d float64 W (row-major) | d float64 eigenvalues
"""

from __future__ import annotations

from pathlib import Path

from swekit.common.errors import FormatError
from swekit.data.io.binfmt import BinaryReader, write_f64, write_u32, write_u8
from swekit.domain.pca.transform import MODES, PcaTransform

PCA_MAGIC = b"SWP1"
PCA_VERSION = 1


def save_transform(t: PcaTransform, path: str | Path) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "wb") as fh:
        fh.write(PCA_MAGIC)
        write_u8(fh, PCA_VERSION)
        write_u32(fh, t.dim)
        write_u32(fh, t.skip)
        write_u32(fh, t.keep)
        write_u8(fh, MODES.index(t.mode))
        write_f64(fh, t.mean)
        write_f64(fh, t.components)
        write_f64(fh, t.eigenvalues)


def load_transform(path: str | Path) -> PcaTransform:
    p = Path(path)
    with open(p, "rb") as fh:
        r = BinaryReader(fh, str(p))
        r.read_magic(PCA_MAGIC)
        version = r.read_u8("version")
        if version != PCA_VERSION:
            raise FormatError(f"{p}: unsupported PCA version {version}")
        d = r.read_u32("dimension")
        skip = r.read_u32("skip")
        keep = r.read_u32("keep")
        mode_code = r.read_u8("mode")
        if mode_code >= len(MODES):
            raise FormatError(f"{p}: unknown PCA mode code {mode_code}")
        mean = r.read_f64(d, "mean")
        comps = r.read_f64(d * d, "components").reshape(d, d)
        eig = r.read_f64(d, "eigenvalues")
    return PcaTransform(mean.copy(), comps.copy(), eig.copy(), skip, keep, MODES[mode_code])
