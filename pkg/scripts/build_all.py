"""Build the whole toy pipeline with clear stage boundaries.

This is the "one command" entrypoint:
  1) scripts/make_toy_data.py
  2) vocab -> extract -> pca -> distill -> encode -> sts-eval (monolingual)
  3) joint vocab -> extract -> pca -> xl-train -> retrieve-eval (cross-lingual)
  4) ensemble (distilled + pca) -> sts-eval
  5) analyze-norms, inspect-pcs, correlate-pc, sif

Every stage runs as its own process through run.py.

Run:
  python scripts/build_all.py
  python scripts/build_all.py --out artifacts/toy_b --seed 0

Exit codes:
  0  success
  1  a step failed
  2  interrupted (Ctrl+C)
"""

from __future__ import annotations

import argparse
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
SRC, TGT = "src", "tgt"
INTERRUPTED = 130


def _run_step(args: list[str], *, title: str) -> int:
    """Run a step and return its exit code."""
    print(f"\n▶ {title}")
    print("  " + " ".join(args))
    try:
        p = subprocess.run(args, check=False, cwd=ROOT)
        if p.returncode == 0:
            print(f"✅ OK: {title}")
        else:
            print(f"❌ FAIL ({p.returncode}): {title}")
        return int(p.returncode)
    except KeyboardInterrupt:
        return INTERRUPTED


def toy_steps(out: Path, seed: int, preset: str = "toy", threads: int = 1) -> list[tuple[list[str], str]]:
    py = sys.executable
    data = out / "data"

    def cli(*args: str) -> list[str]:
        return [py, str(ROOT / "run.py"), *args, "--preset", preset, "--seed", str(seed), "--threads", str(threads)]

    def d(name: str) -> str:
        return str(data / name)

    def o(name: str) -> str:
        return str(out / name)

    steps: list[tuple[list[str], str]] = [
        ([py, str(ROOT / "scripts" / "make_toy_data.py"), "--out", str(data), "--seed", str(seed)], "toy data"),
        # monolingual
        (cli("vocab", "--corpus", d("corpus.txt"), "--out", o("vocab.tsv")), "vocab"),
        (cli("extract", "--dump", d("dump.swd"), "--vocab", o("vocab.tsv"), "--out", o("raw.swe"), "--report", o("extract_report.txt")), "extract"),
        (cli("pca", "--table", o("raw.swe"), "--sentences", d("corpus.txt"), "--out", o("pca.swe"), "--report", o("pca_report.txt")), "pca"),
        (
            cli(
                "distill", "--table", o("pca.swe"),
                "--teacher-sentences", d("teacher.txt"), "--teacher-dump", d("teacher.swt"),
                "--out", o("distilled.swe"), "--report", o("distill_report.txt"),
            ),
            "distill",
        ),
        (cli("encode", "--table", o("distilled.swe"), "--input", d("teacher.txt"), "--out", o("encoded.swt")), "encode"),
        (cli("sts-eval", "--table", o("pca.swe"), "--data", d("sts.tsv"), "--report", o("sts_pca.txt")), "sts-eval (pca)"),
        (cli("sts-eval", "--table", o("distilled.swe"), "--data", d("sts.tsv"), "--report", o("sts_distilled.txt")), "sts-eval (distilled)"),
        # cross-lingual
        (
            cli("vocab", "--corpus", d("corpus.txt"), "--lang", SRC, "--corpus", d("corpus_tgt.txt"), "--lang", TGT, "--out", o("xl_vocab.tsv")),
            "joint vocab",
        ),
        (
            cli("extract", "--dump", d("dump.swd"), "--lang", SRC, "--dump", d("dump_tgt.swd"), "--lang", TGT, "--vocab", o("xl_vocab.tsv"), "--out", o("xl_raw.swe")),
            "joint extract",
        ),
        (
            cli("pca", "--table", o("xl_raw.swe"), "--sentences", d("corpus.txt"), "--lang", SRC, "--sentences", d("corpus_tgt.txt"), "--lang", TGT, "--out", o("xl_pca.swe")),
            "joint pca",
        ),
        (
            cli("xl-train", "--table", o("xl_pca.swe"), "--parallel", d("parallel.tsv"), "--src-lang", SRC, "--tgt-lang", TGT, "--out", o("xl_trained.swe"), "--report", o("xl_report.txt")),
            "xl-train",
        ),
        (
            cli(
                "retrieve-eval", "--table", o("xl_trained.swe"),
                "--src", d("retrieval_src.txt"), "--tgt", d("retrieval_tgt.txt"), "--gold", d("retrieval_gold.tsv"),
                "--src-lang", SRC, "--tgt-lang", TGT, "--report", o("retrieval.txt"),
            ),
            "retrieve-eval",
        ),
        # ensemble
        (
            cli("ensemble", "--spec", o("ensemble.conf"), "--input", d("teacher.txt"), "--out", o("ensemble.swt"), "--precombined-out", o("precombined.swe")),
            "ensemble",
        ),
        (cli("sts-eval", "--spec", o("ensemble.conf"), "--data", d("sts.tsv"), "--report", o("sts_ensemble.txt")), "sts-eval (ensemble)"),
        # analysis
        (
            cli("analyze-norms", "--table", o("raw.swe"), "--tags", d("tags.tsv"), "--profile-out", o("norm_profile.tsv"), "--report", o("norms.txt")),
            "analyze-norms",
        ),
        (
            cli("inspect-pcs", "--table", o("raw.swe"), "--transform", o("pca.swe.pca.swp"), "--components", "1,2", "--scatter-out", o("scatter.tsv")),
            "inspect-pcs",
        ),
        (
            cli("correlate-pc", "--table", o("raw.swe"), "--transform", o("pca.swe.pca.swp"), "--docs", d("docs.tsv"), "--components", "1,2", "--report", o("correlate.txt")),
            "correlate-pc",
        ),
        (cli("sif", "--table", o("distilled.swe"), "--out", o("sif.swe")), "sif"),
        (cli("sts-eval", "--table", o("sif.swe"), "--data", d("sts.tsv"), "--report", o("sts_sif.txt")), "sts-eval (sif)"),
    ]
    return steps


def write_ensemble_conf(out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / "ensemble.conf").write_text(
        "member.1.path = distilled.swe\nmember.1.weight = 1\nmember.1.name = distilled\n"
        "member.2.path = pca.swe\nmember.2.weight = 0.5\nmember.2.name = pca\n",
        encoding="utf-8",
    )


def build(out: Path, seed: int, preset: str = "toy", threads: int = 1) -> int:
    write_ensemble_conf(out)
    for cmd, title in toy_steps(out, seed, preset, threads):
        rc = _run_step(cmd, title=title)
        if rc == INTERRUPTED:
            print("\n⛔ Interrupted")
            return 2
        if rc != 0:
            print("\n⛔ Build stopped on first failing step.")
            return 1
    return 0


def main() -> int:
    ap = argparse.ArgumentParser(description="Build the toy pipeline end to end")
    ap.add_argument("--out", default=r"artifacts/toy")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--preset", default="toy")
    ap.add_argument("--threads", type=int, default=1)
    ns = ap.parse_args()

    rc = build(Path(ns.out).resolve(), ns.seed, ns.preset, ns.threads)
    if rc == 0:
        print(f"\n✅ ALL GREEN: toy pipeline built in {ns.out}")
    return rc


if __name__ == "__main__":
    raise SystemExit(main())
