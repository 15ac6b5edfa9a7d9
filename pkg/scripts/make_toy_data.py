"""Write the deterministic toy dataset.

Run:
  python scripts/make_toy_data.py
  python scripts/make_toy_data.py --out artifacts/toy/data --seed 3

Exit codes:
  0  success
  2  bad arguments
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from swekit.common.errors import UsageError  # noqa: E402
from swekit.common.logging_setup import setup_logging  # noqa: E402
from swekit.data.toy import write_toy_dataset  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description="Generate the synthetic toy dataset")
    ap.add_argument("--out", default=r"artifacts/toy/data")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--words", type=int, default=300)
    ap.add_argument("--dim", type=int, default=24)
    ns = ap.parse_args()

    setup_logging()
    try:
        paths = write_toy_dataset(ns.out, seed=ns.seed, n_words=ns.words, dim=ns.dim)
    except UsageError as e:
        print(f"❌ {e}")
        return 2

    for name, p in paths.items():
        print(f"  {name:<18} {p}")
    print(f"✅ toy dataset (seed={ns.seed}) -> {ns.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
