"""swekit command line.

One stage per invocation:

  vocab -> extract -> pca -> distill | xl-train -> encode | ensemble
  -> sts-eval | retrieve-eval | analyze-norms | inspect-pcs | correlate-pc | sif

Exit codes:
  0  success
  1  data error (bad input content, malformed files, I/O)
  2  usage error (bad flags or config values)

stdout carries progress lines and key=value reports, stderr the log.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

import numpy as np
import pandas as pd
from dotenv import load_dotenv

from swekit._version import __version__
from swekit.app.config import PipelineConfig, load_pipeline_config
from swekit.app.provenance import build_meta, should_skip, write_meta
from swekit.common.errors import DataError, UsageError
from swekit.common.logging_setup import setup_logging
from swekit.data.io.paths import HISTORY_SUFFIX, OCCURRENCE_SUFFIX, TRANSFORM_SUFFIX, VOCAB_SUFFIX, sidecar_path
from swekit.data.io.safe_csv import to_tsv_safely
from swekit.data.io.write import format_report, write_report
from swekit.domain.distill import load_teacher, train_kd, write_sentence_embeddings
from swekit.domain.embed_core import (
    EmbeddingTable,
    StageTag,
    Vocabulary,
    build_vocab,
    iter_corpus_tokens,
    load_table,
    read_sentences,
    read_vocab_tsv,
    save_table,
    tag_word,
    write_vocab_tsv,
)
from swekit.domain.encode import (
    SentenceEncoder,
    SubwordTokenizer,
    load_piece_file,
    sif_reweight,
    tokenizer_from_vocab,
)
from swekit.domain.ensemble import EnsembleEncoder, EnsembleSpec, load_ensemble_spec, precombine_tables
from swekit.domain.ensemble.spec import EnsembleMember
from swekit.domain.extract import decontextualize_many, open_dump, write_occurrence_report
from swekit.domain.pca import (
    WORD_LEVEL,
    explained_variance_ratio,
    fit_sentence_pca,
    fit_word_pca,
    load_transform,
    pretransform,
    save_transform,
    top_bottom_words,
)
from swekit.domain.train.loop import TrainRun
from swekit.domain.xlingual import read_parallel_tsv, train_contrastive
from swekit.reports import (
    component_correlate,
    export_component_scatter,
    load_retrieval_dataset,
    load_scored_docs,
    load_sts_dataset,
    load_tag_map,
    norm_freq_spearman,
    pos_norm_profile,
    retrieval_eval,
    sts_eval,
    write_norm_profile_tsv,
)

logger = logging.getLogger("swekit.app.cli")

# flag dest -> PipelineConfig key
FLAG_KEYS = {
    "cap": "vocab_cap",
    "case_mode": "case_mode",
    "max_occurrences": "max_occurrences",
    "pca_samples": "pca_samples",
    "dim": "dim",
    "lr": "lr",
    "steps": "steps",
    "batch_size": "batch_size",
    "tau": "tau",
    "seed": "seed",
    "patience": "patience",
    "val_every": "val_every",
    "val_fraction": "val_fraction",
    "sif_alpha": "sif_alpha",
    "threshold": "threshold",
    "threads": "threads",
    "src_lang": "src_lang",
    "tgt_lang": "tgt_lang",
    "weights": "weights",
}


# ---------------------------
# helpers
# ---------------------------


def _say(msg: str) -> None:
    print(msg, flush=True)


def _report(report: dict[str, Any], path: Optional[str]) -> None:
    sys.stdout.write(format_report(report))
    if path:
        write_report(Path(path), report)


def _load_table(path: str | Path, cfg: PipelineConfig, vocab_path: Optional[str] = None) -> EmbeddingTable:
    """Load a table and attach word counts from its vocab sidecar when present."""
    table = load_table(path, cfg.case_mode)
    vp = Path(vocab_path) if vocab_path else sidecar_path(path, VOCAB_SUFFIX)
    if not vp.exists():
        return table
    vocab = read_vocab_tsv(vp, cfg.case_mode)
    if vocab.words != table.vocab.words:
        raise DataError(f"{vp}: word list does not match table {path}")
    return EmbeddingTable(vocab, table.matrix, table.stage_tag)


def _save_table(
    table: EmbeddingTable,
    out: str | Path,
    fmt: str,
    stage: str,
    cfg: PipelineConfig,
    inputs: Sequence[str | Path],
    extra: Optional[dict[str, Any]] = None,
) -> None:
    save_table(table, out, fmt)
    if table.vocab.frequency is not None:
        write_vocab_tsv(table.vocab, sidecar_path(out, VOCAB_SUFFIX))
    write_meta(out, build_meta(stage, cfg, inputs, extra))


def _tokenizer(args: argparse.Namespace, table: EmbeddingTable, cfg: PipelineConfig) -> Optional[SubwordTokenizer]:
    if getattr(args, "opaque", False):
        return None
    pieces = getattr(args, "pieces", None)
    if pieces:
        return load_piece_file(pieces, lowercase=cfg.lowercase)
    return tokenizer_from_vocab(table.vocab)


def _read_lines(path: str | Path) -> list[str]:
    p = Path(path)
    if not p.exists():
        raise DataError(f"file not found: {p}")
    return p.read_text(encoding="utf-8").splitlines()


def _write_vectors(vectors: np.ndarray, out: str | Path, fmt: Optional[str]) -> str:
    p = Path(out)
    fmt = fmt or ("text" if p.suffix in (".txt", ".tsv") else "binary")
    if fmt == "binary":
        write_sentence_embeddings(p, vectors)
    else:
        p.parent.mkdir(parents=True, exist_ok=True)
        with open(p, "w", encoding="utf-8", newline="\n") as fh:
            np.savetxt(fh, vectors.astype(np.float32), fmt="%.9g")
    return fmt


def _paired(values: Optional[list[str]], langs: Optional[list[str]], what: str) -> list[tuple[str, Optional[str]]]:
    values = values or []
    langs = langs or []
    if langs and len(langs) != len(values):
        raise UsageError(f"give one --lang per {what} ({len(values)} {what}s, {len(langs)} languages)")
    return list(zip(values, langs or [None] * len(values)))


def _resume(args: argparse.Namespace, out: str | Path, stage: str, cfg: PipelineConfig, inputs: Sequence[str | Path]) -> bool:
    if args.resume and should_skip(out, stage, cfg, inputs):
        _say(f"⏭️  {stage}: {out} is up to date")
        return True
    return False


def _train_report(run: TrainRun) -> dict[str, Any]:
    losses = run.train_losses()
    return {
        "steps_run": run.step,
        "best_step": run.best_step,
        "best_val_loss": run.best_val if run.val_history else float("nan"),
        "stopped_early": run.stopped_early,
        "first_train_loss": float(losses[0]) if losses.size else float("nan"),
        "last_train_loss": float(losses[-1]) if losses.size else float("nan"),
    }


def _write_history(run: TrainRun, out: str | Path) -> None:
    df = pd.DataFrame(run.history, columns=["step", "loss"])
    df["loss"] = df["loss"].map(lambda v: f"{v:.9g}")
    to_tsv_safely(df, sidecar_path(out, HISTORY_SUFFIX))


# ---------------------------
# stages
# ---------------------------


def cmd_vocab(args: argparse.Namespace, cfg: PipelineConfig) -> int:
    sources = _paired(args.corpus, args.lang, "--corpus")
    inputs = [c for c, _ in sources]
    if _resume(args, args.out, "vocab", cfg, inputs):
        return 0

    words: list[str] = []
    counts: list[int] = []
    for corpus, lang in sources:
        with open(corpus, "r", encoding="utf-8") as fh:
            tokens = iter_corpus_tokens(fh, cfg.lowercase)
            if lang:
                tokens = (tag_word(lang, t) for t in tokens)
            v = build_vocab(tokens, cfg.vocab_cap, cfg.case_mode)
        words.extend(v.words)
        counts.extend(v.frequency or ())
    vocab = Vocabulary(tuple(words), tuple(counts), cfg.case_mode)

    write_vocab_tsv(vocab, args.out)
    write_meta(args.out, build_meta("vocab", cfg, inputs))
    _say(f"✅ vocab: {len(vocab)} words -> {args.out}")
    return 0


def cmd_extract(args: argparse.Namespace, cfg: PipelineConfig) -> int:
    sources = _paired(args.dump, args.lang, "--dump")
    inputs = [args.vocab] + [d for d, _ in sources]
    if _resume(args, args.out, "extract", cfg, inputs):
        return 0

    vocab = read_vocab_tsv(args.vocab, cfg.case_mode)
    result = decontextualize_many([(open_dump(d), lang) for d, lang in sources], vocab, cfg.max_occurrences)
    _save_table(result.table, args.out, args.format, "extract", cfg, inputs)
    report_path = args.occurrence_report or sidecar_path(args.out, OCCURRENCE_SUFFIX)
    write_occurrence_report(result, report_path, cfg.max_occurrences)

    _say(f"✅ extract: {len(result.table)} x {result.table.dim} table -> {args.out}")
    _report(
        {
            "words": len(result.table),
            "dim": result.table.dim,
            "zero_words": len(result.zero_words),
            "skipped_records": result.skipped_records,
        },
        args.report,
    )
    return 0


def _sample_records(path: str, lang: Optional[str], m: int, cfg: PipelineConfig, rng: np.random.Generator):
    records = [r for r in read_sentences(path, lang, cfg.lowercase) if not r.empty]
    if len(records) > m:
        idx = np.sort(rng.choice(len(records), size=m, replace=False))
        records = [records[i] for i in idx]
    return records


def cmd_pca(args: argparse.Namespace, cfg: PipelineConfig) -> int:
    sources = _paired(args.sentences, args.lang, "--sentences")
    inputs = [args.table] + [s for s, _ in sources]
    transform_out = args.transform_out or sidecar_path(args.out, TRANSFORM_SUFFIX)
    if _resume(args, args.out, "pca", cfg, inputs):
        return 0

    table = _load_table(args.table, cfg)
    if table.stage_tag is not StageTag.RAW:
        logger.warning(f"PCA input {args.table} has stage {table.stage_tag.value}, expected raw")

    if cfg.pca_mode == WORD_LEVEL:
        t = fit_word_pca(table, cfg.dim, abtt=cfg.abtt)
    else:
        if not sources:
            raise UsageError("sentence-level PCA needs at least one --sentences file")
        rng = np.random.default_rng(cfg.seed)
        per_file = max(1, cfg.pca_samples // len(sources))
        samples = [_sample_records(s, lang, per_file, cfg, rng) for s, lang in sources]
        t = fit_sentence_pca([table] * len(samples), samples, cfg.dim, abtt=cfg.abtt)

    out_table = pretransform(table, t)
    save_transform(t, transform_out)
    _save_table(out_table, args.out, args.format, "pca", cfg, inputs, {"transform": Path(transform_out).name})

    _say(f"✅ pca: {t.mode}-level, skip r={t.skip}, keep d'={t.keep} -> {args.out}")
    _report(
        {
            "input_dim": t.dim,
            "skip": t.skip,
            "keep": t.keep,
            "mode": t.mode,
            "explained_variance_kept": explained_variance_ratio(t),
        },
        args.report,
    )
    return 0


def cmd_distill(args: argparse.Namespace, cfg: PipelineConfig) -> int:
    inputs = [args.table, args.teacher_sentences, args.teacher_dump]
    if _resume(args, args.out, "distill", cfg, inputs):
        return 0

    student = _load_table(args.table, cfg)
    teacher = load_teacher(args.teacher_sentences, args.teacher_dump, lowercase=cfg.lowercase, language=cfg.src_lang)
    trained, run = train_kd(student, teacher, cfg.train_config())
    _save_table(trained, args.out, args.format, "distill", cfg, inputs)
    _write_history(run, args.out)

    _say(f"✅ distill: {run.step} steps (best at {run.best_step}) -> {args.out}")
    _report(_train_report(run), args.report)
    return 0


def cmd_xl_train(args: argparse.Namespace, cfg: PipelineConfig) -> int:
    inputs = [args.table, args.parallel]
    if _resume(args, args.out, "xl-train", cfg, inputs):
        return 0
    if not (cfg.src_lang and cfg.tgt_lang):
        logger.warning("src_lang/tgt_lang unset; pairs are looked up without language tags")

    table = _load_table(args.table, cfg)
    corpus = read_parallel_tsv(args.parallel, cfg.src_lang, cfg.tgt_lang, cfg.lowercase)
    trained, run = train_contrastive(table, corpus, cfg.train_config())
    _save_table(trained, args.out, args.format, "xl-train", cfg, inputs)
    _write_history(run, args.out)

    _say(f"✅ xl-train: {run.step} steps (best at {run.best_step}) -> {args.out}")
    report = _train_report(run)
    report["dropped_pairs"] = corpus.dropped
    _report(report, args.report)
    return 0


def _encoder(args: argparse.Namespace, cfg: PipelineConfig, language: Optional[str] = None) -> SentenceEncoder:
    table = _load_table(args.table, cfg)
    opts = cfg.encode_options(language=language, sif=getattr(args, "sif", False), opaque=getattr(args, "opaque", False))
    return SentenceEncoder(table, _tokenizer(args, table, cfg), opts, cfg.threads)


def cmd_encode(args: argparse.Namespace, cfg: PipelineConfig) -> int:
    inputs = [args.table, args.input]
    if _resume(args, args.out, "encode", cfg, inputs):
        return 0

    enc = _encoder(args, cfg, args.encode_lang)
    out = enc.encode_batch(_read_lines(args.input))
    fmt = _write_vectors(out.vectors, args.out, args.format)
    write_meta(args.out, build_meta("encode", cfg, inputs))

    _say(f"✅ encode: {out.vectors.shape[0]} sentences ({fmt}) -> {args.out}")
    _report({"sentences": int(out.vectors.shape[0]), "dim": enc.dim, "empty": int(out.empty.sum())}, args.report)
    return 0


def _ensemble_spec(path: str, cfg: PipelineConfig) -> EnsembleSpec:
    spec = load_ensemble_spec(path, lambda p: _load_table(p, cfg))
    if cfg.weights:
        if len(cfg.weights) != len(spec.members):
            raise UsageError(f"{len(cfg.weights)} weights for {len(spec.members)} ensemble members")
        spec = EnsembleSpec(tuple(EnsembleMember(m.table, w, m.name) for m, w in zip(spec.members, cfg.weights)))
    return spec


def _ensemble_tokenizers(args: argparse.Namespace, spec: EnsembleSpec, cfg: PipelineConfig):
    return [_tokenizer(args, m.table, cfg) for m in spec.members]


def cmd_ensemble(args: argparse.Namespace, cfg: PipelineConfig) -> int:
    inputs = [args.spec, args.input]
    if _resume(args, args.out, "ensemble", cfg, inputs):
        return 0

    spec = _ensemble_spec(args.spec, cfg)
    tokenizers = _ensemble_tokenizers(args, spec, cfg)
    enc = EnsembleEncoder(spec, tokenizers, cfg.encode_options(opaque=args.opaque), cfg.threads)
    out = enc.encode_batch(_read_lines(args.input))
    fmt = _write_vectors(out.vectors, args.out, args.format)
    write_meta(args.out, build_meta("ensemble", cfg, inputs, {"weights": spec.weights.tolist(), "dims": list(spec.dims)}))
    _say(f"✅ ensemble: {len(spec.members)} members, {out.vectors.shape[0]} sentences ({fmt}) -> {args.out}")

    if args.precombined_out:
        pre = precombine_tables(spec, tokenizers)
        save_table(pre.table, args.precombined_out, "binary")
        write_meta(
            args.precombined_out,
            build_meta("ensemble", cfg, [args.spec], {"weights": pre.weights.tolist(), "block_dims": list(pre.block_dims)}),
        )
        _say(f"✅ precombined table {len(pre.table)} x {pre.table.dim} -> {args.precombined_out}")

    _report(
        {
            "members": len(spec.members),
            "dim": spec.total_dim,
            "sentences": int(out.vectors.shape[0]),
            "empty_blocks": int(out.empty_blocks.sum()),
        },
        args.report,
    )
    return 0


def _encode_fn(args: argparse.Namespace, cfg: PipelineConfig, language: Optional[str] = None) -> Callable[[Sequence[str]], np.ndarray]:
    if getattr(args, "spec", None):
        spec = _ensemble_spec(args.spec, cfg)
        ens = EnsembleEncoder(spec, _ensemble_tokenizers(args, spec, cfg), cfg.encode_options(language, opaque=args.opaque), cfg.threads)
        return lambda texts: ens.encode_batch(texts).vectors
    if not args.table:
        raise UsageError("give --table or --spec")
    enc = _encoder(args, cfg, language)
    return lambda texts: enc.encode_batch(texts).vectors


def cmd_sts_eval(args: argparse.Namespace, cfg: PipelineConfig) -> int:
    data = load_sts_dataset(args.data)
    score = sts_eval(data, _encode_fn(args, cfg, cfg.src_lang))
    _say(f"✅ sts-eval: {len(data)} pairs")
    _report({"pairs": len(data), "spearman_x100": score}, args.report)
    return 0


def cmd_retrieve_eval(args: argparse.Namespace, cfg: PipelineConfig) -> int:
    data = load_retrieval_dataset(args.src, args.tgt, args.gold)
    scores = retrieval_eval(data, _encode_fn(args, cfg, cfg.src_lang), _encode_fn(args, cfg, cfg.tgt_lang), cfg.threshold)
    _say(f"✅ retrieve-eval: {len(data.sources)} sources, {len(data.targets)} targets")
    _report(scores.as_report(), args.report)
    return 0


def cmd_analyze_norms(args: argparse.Namespace, cfg: PipelineConfig) -> int:
    table = _load_table(args.table, cfg, args.vocab)
    report: dict[str, Any] = {"words": len(table), "norm_freq_spearman": norm_freq_spearman(table)}
    if args.tags:
        profile = pos_norm_profile(table, load_tag_map(args.tags))
        for tag, value in profile.items():
            report[f"norm.{tag}"] = value
        if args.profile_out:
            write_norm_profile_tsv(profile, args.profile_out)
    _say(f"✅ analyze-norms: {args.table}")
    _report(report, args.report)
    return 0


def _components(spec: str) -> list[int]:
    try:
        return [int(c) for c in spec.split(",") if c.strip()]
    except ValueError as e:
        raise UsageError(f"--components must be comma-separated integers, got {spec!r}") from e


def cmd_inspect_pcs(args: argparse.Namespace, cfg: PipelineConfig) -> int:
    table = _load_table(args.table, cfg)
    t = load_transform(args.transform)
    comps = _components(args.components)
    for c in comps:
        smallest, largest = top_bottom_words(table, t, c, k=args.k, restrict=args.restrict)
        _say(f"PC{c} largest: " + ", ".join(f"{w} ({v:.3f})" for w, v in largest))
        _say(f"PC{c} smallest: " + ", ".join(f"{w} ({v:.3f})" for w, v in smallest))
    if args.scatter_out:
        pair = comps[:2] if len(comps) >= 2 else [1, 2]
        export_component_scatter(table, t, args.scatter_out, pair, args.restrict)
        _say(f"✅ scatter PC{pair[0]}/PC{pair[1]} -> {args.scatter_out}")
    return 0


def cmd_correlate_pc(args: argparse.Namespace, cfg: PipelineConfig) -> int:
    table = _load_table(args.table, cfg)
    t = load_transform(args.transform)
    docs = load_scored_docs(args.docs)
    tokenizer = _tokenizer(args, table, cfg)
    report: dict[str, Any] = {"documents": len(docs.texts)}
    for c in _components(args.components):
        report[f"pearson.pc{c}"] = component_correlate(docs, table, t, c, tokenizer, cfg.encode_options(cfg.src_lang))
    _say(f"✅ correlate-pc: {args.docs}")
    _report(report, args.report)
    return 0


def cmd_sif(args: argparse.Namespace, cfg: PipelineConfig) -> int:
    inputs = [args.table] + ([args.vocab] if args.vocab else [])
    if _resume(args, args.out, "sif", cfg, inputs):
        return 0
    table = _load_table(args.table, cfg, args.vocab)
    out = sif_reweight(table, alpha=cfg.sif_alpha)
    _save_table(out, args.out, args.format, "sif", cfg, inputs)
    _say(f"✅ sif: alpha={cfg.sif_alpha} -> {args.out}")
    return 0


# ---------------------------
# parser
# ---------------------------


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common")
    g.add_argument("--config", action="append", default=[], help="key=value or .yaml config file (repeatable)")
    g.add_argument("--preset", help="named preset from presets.json")
    g.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ERROR")
    g.add_argument("--threads", type=int, default=None)
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--case-mode", choices=("sensitive", "insensitive"), default=None)
    g.add_argument("--resume", action="store_true", help="skip the stage when its output is up to date")
    g.add_argument("--report", default=None, help="also write the key=value report to this file")
    return p


def _add_train_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--train-config", default=None, help="key=value training config (lr, steps, batch_size, tau, seed, patience, val_every)")
    p.add_argument("--lr", type=float, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--batch-size", type=int, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--patience", type=int, default=None)
    p.add_argument("--val-every", type=int, default=None)
    p.add_argument("--val-fraction", type=float, default=None)


def _add_encode_flags(p: argparse.ArgumentParser, table_required: bool = True) -> None:
    p.add_argument("--table", required=table_required)
    p.add_argument("--pieces", default=None, help="subword piece file (one piece per line, '##' continues a word)")
    p.add_argument("--opaque", action="store_true", help="pre-tokenized input: no lowercasing, no subword fallback")
    p.add_argument("--sif", action="store_true", help="apply SIF reweighting (needs word counts)")


def _add_lang_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--src-lang", default=None)
    p.add_argument("--tgt-lang", default=None)


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="swekit", description="Static word embeddings for sentence semantics")
    parser.add_argument("--version", action="version", version=f"swekit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("vocab", parents=[common], help="count a corpus and keep the most frequent words")
    p.add_argument("--corpus", action="append", required=True)
    p.add_argument("--lang", action="append", help="language tag per --corpus (joint vocabularies)")
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_vocab)

    p = sub.add_parser("extract", parents=[common], help="average contextual occurrence vectors per word")
    p.add_argument("--dump", action="append", required=True)
    p.add_argument("--lang", action="append", help="language tag per --dump")
    p.add_argument("--vocab", required=True)
    p.add_argument("--max-occurrences", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("binary", "text"), default="binary")
    p.add_argument("--occurrence-report", default=None)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("pca", parents=[common], help="fit PCA and pre-transform the table")
    p.add_argument("--table", required=True)
    p.add_argument("--sentences", action="append", help="sample sentences (repeat per language)")
    p.add_argument("--lang", action="append", help="language tag per --sentences")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--pca-samples", type=int, default=None)
    p.add_argument("--no-abtt", action="store_true", help="keep the leading components (r = 0)")
    p.add_argument("--word-pca", action="store_true", help="fit on word rows instead of sentence averages")
    p.add_argument("--out", required=True)
    p.add_argument("--transform-out", default=None)
    p.add_argument("--format", choices=("binary", "text"), default="binary")
    p.set_defaults(func=cmd_pca)

    p = sub.add_parser("distill", parents=[common], help="knowledge distillation from teacher sentence vectors")
    p.add_argument("--table", required=True)
    p.add_argument("--teacher-sentences", required=True)
    p.add_argument("--teacher-dump", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("binary", "text"), default="binary")
    p.add_argument("--src-lang", default=None)
    _add_train_flags(p)
    p.set_defaults(func=cmd_distill)

    p = sub.add_parser("xl-train", parents=[common], help="contrastive refinement on translation pairs")
    p.add_argument("--table", required=True)
    p.add_argument("--parallel", required=True, help="source<TAB>target pairs")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("binary", "text"), default="binary")
    _add_lang_flags(p)
    _add_train_flags(p)
    p.set_defaults(func=cmd_xl_train)

    p = sub.add_parser("encode", parents=[common], help="encode sentences (one per line)")
    _add_encode_flags(p)
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("binary", "text"), default=None)
    p.add_argument("--lang", dest="encode_lang", default=None, help="language tag for joint vocabularies")
    p.add_argument("--sif-alpha", type=float, default=None)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("ensemble", parents=[common], help="weighted concatenation of several tables")
    p.add_argument("--spec", required=True, help="member.<i>.path / member.<i>.weight config")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("binary", "text"), default=None)
    p.add_argument("--pieces", default=None)
    p.add_argument("--opaque", action="store_true")
    p.add_argument("--weights", default=None, help="comma-separated member weights")
    p.add_argument("--precombined-out", default=None)
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("sts-eval", parents=[common], help="100 * Spearman on an STS TSV")
    _add_encode_flags(p, table_required=False)
    p.add_argument("--spec", default=None, help="evaluate an ensemble instead of --table")
    p.add_argument("--data", required=True, help="sent1<TAB>sent2<TAB>score")
    p.add_argument("--sif-alpha", type=float, default=None)
    p.set_defaults(func=cmd_sts_eval)

    p = sub.add_parser("retrieve-eval", parents=[common], help="translation retrieval precision/recall/F1")
    _add_encode_flags(p, table_required=False)
    p.add_argument("--spec", default=None)
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--gold", default=None, help="src_idx<TAB>tgt_idx; default: line i <-> line i")
    p.add_argument("--threshold", type=float, default=None)
    _add_lang_flags(p)
    p.set_defaults(func=cmd_retrieve_eval)

    p = sub.add_parser("analyze-norms", parents=[common], help="norm/frequency correlation and POS norm profile")
    p.add_argument("--table", required=True)
    p.add_argument("--vocab", default=None, help="word counts (default: the table's vocab sidecar)")
    p.add_argument("--tags", default=None, help="word<TAB>tag")
    p.add_argument("--profile-out", default=None)
    p.set_defaults(func=cmd_analyze_norms)

    p = sub.add_parser("inspect-pcs", parents=[common], help="words at the extremes of principal components")
    p.add_argument("--table", required=True, help="table the transform was fitted on")
    p.add_argument("--transform", required=True)
    p.add_argument("--components", default="1,2")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--restrict", type=int, default=10_000)
    p.add_argument("--scatter-out", default=None)
    p.set_defaults(func=cmd_inspect_pcs)

    p = sub.add_parser("correlate-pc", parents=[common], help="Pearson r between a component and document scores")
    p.add_argument("--table", required=True, help="table the transform was fitted on")
    p.add_argument("--transform", required=True)
    p.add_argument("--docs", required=True, help="score<TAB>text")
    p.add_argument("--components", default="1")
    p.add_argument("--pieces", default=None)
    p.add_argument("--opaque", action="store_true")
    p.set_defaults(func=cmd_correlate_pc)

    p = sub.add_parser("sif", parents=[common], help="SIF-reweight a table")
    p.add_argument("--table", required=True)
    p.add_argument("--vocab", default=None)
    p.add_argument("--sif-alpha", type=float, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("binary", "text"), default="binary")
    p.set_defaults(func=cmd_sif)

    return parser


def config_from_args(args: argparse.Namespace) -> PipelineConfig:
    overrides: dict[str, Any] = {}
    for dest, key in FLAG_KEYS.items():
        value = getattr(args, dest, None)
        if value is not None:
            overrides[key] = value
    if getattr(args, "no_abtt", False):
        overrides["abtt"] = False
    if getattr(args, "word_pca", False):
        overrides["pca_mode"] = WORD_LEVEL
    paths = list(args.config or [])
    if getattr(args, "train_config", None):
        paths.append(args.train_config)
    return load_pipeline_config(args.preset, paths, overrides)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    load_dotenv()
    setup_logging(level=args.log_level)
    try:
        cfg = config_from_args(args)
        return int(args.func(args, cfg))
    except UsageError as e:
        logger.error(f"usage error: {e}")
        return 2
    except (DataError, OSError) as e:
        logger.error(f"data error: {e}")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
