"""Encode throughput gate.

Builds a random table (default 150k words, d=256) and times
SentenceEncoder.encode_batch over short random sentences.

Usage:
  python scripts/bench_encode.py
  python scripts/bench_encode.py --sentences 50000 --threads 4
  python scripts/bench_encode.py --min-rate 0      # report only

Exit codes:
  0  rate >= --min-rate
  1  too slow
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from swekit.domain.embed_core import EmbeddingTable, StageTag, Vocabulary  # noqa: E402
from swekit.domain.encode import EncodeOptions, SentenceEncoder  # noqa: E402


def random_setup(words: int, dim: int, sentences: int, seed: int) -> tuple[EmbeddingTable, list[str]]:
    rng = np.random.default_rng(seed)
    vocab = Vocabulary(tuple(f"w{i}" for i in range(words)))
    table = EmbeddingTable(vocab, rng.normal(size=(words, dim)), StageTag.TRAINED)
    lengths = rng.integers(5, 16, size=sentences)
    # zipf-ish token draw so the cache sees realistic reuse
    ids = np.minimum(rng.zipf(1.2, size=int(lengths.sum())) - 1, words - 1)
    texts, pos = [], 0
    for k in lengths:
        texts.append(" ".join(f"w{i}" for i in ids[pos : pos + k]))
        pos += k
    return table, texts


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--words", type=int, default=150_000)
    ap.add_argument("--dim", type=int, default=256)
    ap.add_argument("--sentences", type=int, default=20_000)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--min-rate", type=float, default=10_000.0, help="sentences per second")
    args = ap.parse_args()

    table, texts = random_setup(args.words, args.dim, args.sentences, args.seed)
    enc = SentenceEncoder(table, None, EncodeOptions(lowercase=False, opaque=True), args.threads)

    t0 = time.perf_counter()
    out = enc.encode_batch(texts)
    elapsed = time.perf_counter() - t0
    rate = len(texts) / elapsed if elapsed > 0 else float("inf")

    print(f"words={args.words} dim={args.dim} sentences={len(texts)} threads={args.threads}")
    print(f"elapsed_s={elapsed:.3f} rate={rate:.0f}/s empty={int(out.empty.sum())}")
    if rate < args.min_rate:
        print(f"❌ FAIL: {rate:.0f}/s < {args.min_rate:.0f}/s")
        return 1
    print("✅ OK")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
