"""Freeze the toy-pipeline metrics as "golden" values for regression testing.

Why this exists
---------------
The pipeline can be technically correct but still silently regress (a sign
flip in a gradient, a PCA window off by one, a tokenizer change). A small set
of frozen metrics from the deterministic toy build catches these.

This script *creates* tests/golden_rows.json from a finished toy build.

Usage
-----
  python scripts/build_all.py
  python scripts/freeze_golden.py

Optional:
  python scripts/freeze_golden.py --dir artifacts/toy --tolerance 1e-6

Notes
-----
- Reads:  <dir>/*.txt key=value reports written by build_all.py
- Writes: tests/golden_rows.json (no timestamps; rebuilds are reproducible)
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from swekit.data.io.write import read_report  # noqa: E402

# (report file, key) pairs worth freezing
GOLDEN_KEYS: list[tuple[str, str]] = [
    ("extract_report.txt", "words"),
    ("extract_report.txt", "zero_words"),
    ("pca_report.txt", "explained_variance_kept"),
    ("distill_report.txt", "best_val_loss"),
    ("sts_pca.txt", "spearman_x100"),
    ("sts_distilled.txt", "spearman_x100"),
    ("sts_ensemble.txt", "spearman_x100"),
    ("sts_sif.txt", "spearman_x100"),
    ("xl_report.txt", "best_val_loss"),
    ("retrieval.txt", "f1"),
    ("norms.txt", "norm_freq_spearman"),
    ("correlate.txt", "pearson.pc1"),
]


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--dir", default=r"artifacts/toy")
    ap.add_argument("--out", default=r"tests/golden_rows.json")
    ap.add_argument("--seed", type=int, default=0, help="seed the toy build used (recorded only)")
    ap.add_argument("--tolerance", type=float, default=1e-6, help="absolute tolerance stored per row")
    args = ap.parse_args()

    root = Path(args.dir)
    if not root.is_dir():
        print(f"❌ Missing build directory: {root}")
        print("Run: python scripts/build_all.py")
        return 2

    rows: list[dict] = []
    missing: list[str] = []
    for fname, key in GOLDEN_KEYS:
        path = root / fname
        if not path.exists():
            missing.append(fname)
            continue
        raw = read_report(path).get(key)
        if raw is None:
            missing.append(f"{fname}:{key}")
            continue
        value = float(raw)
        if not math.isfinite(value):
            print(f"⚠️  {fname}:{key} is {raw}; not frozen")
            continue
        rows.append({"id": f"{Path(fname).stem}.{key}", "report": fname, "key": key, "value": value, "tolerance": args.tolerance})

    if missing:
        print("❌ Missing reports/keys: " + ", ".join(missing))
        return 2

    payload = {"source_dir": root.as_posix(), "preset": "toy", "seed": args.seed, "rows": rows}
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")

    print(f"✅ Wrote {len(rows)} golden rows -> {out}")
    for r in rows:
        print(f"  {r['id']:<38} {r['value']}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
