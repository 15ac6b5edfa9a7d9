"""swekit.data.toy

Deterministic synthetic world for the toy pipeline, the script gates and the
tests.

Every word has a hidden meaning vector. A "contextual model" maps an
occurrence to meaning + context mixing + a shared frequency direction + noise,
so decontextualized rows carry the frequency bias that ABTT removes. The
teacher encodes a sentence as a projected mean of meanings. Target-language
words are translations of source words sharing their meaning, so the same
contextual model yields aligned dumps for both languages.

Everything flows from `numpy.random.default_rng(seed)`; identical seeds give
byte-identical files.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import product
from pathlib import Path

import numpy as np
import pandas as pd

from swekit.common.errors import UsageError
from swekit.data.io.safe_csv import to_tsv_safely
from swekit.domain.distill.teacher import write_sentence_embeddings
from swekit.domain.extract.dump import write_dump

logger = logging.getLogger(__name__)

SRC_CONSONANTS = "bdgklmnprst"
TGT_CONSONANTS = "fhjvwz"
VOWELS = "aeiou"
TAG_CYCLE = ("NOUN", "VERB", "ADJ", "NOUN", "ADV", "PROPN", "NOUN", "VERB")
FUNCTION_TAGS = ("DET", "ADP", "PRON", "CCONJ", "AUX")


def _syllables(consonants: str) -> list[str]:
    return [c + v for c, v in product(consonants, VOWELS)]


def _words(consonants: str, n: int, rng: np.random.Generator) -> list[str]:
    syl = _syllables(consonants)
    pool = [a + b for a, b in product(syl, syl)]
    if n > len(pool):
        pool += [a + b + c for a, b, c in product(syl, syl, syl[:5])]
    if n > len(pool):
        raise UsageError(f"toy world supports at most {len(pool)} words, got {n}")
    idx = rng.choice(len(pool), size=n, replace=False)
    return [pool[i] for i in idx]


@dataclass(frozen=True)
class ToyWorld:
    words: tuple[str, ...]
    translations: tuple[str, ...]
    probs: np.ndarray
    meanings: np.ndarray
    tags: tuple[str, ...]
    mixing: np.ndarray
    freq_direction: np.ndarray
    teacher_proj: np.ndarray

    @property
    def size(self) -> int:
        return len(self.words)

    @property
    def dim(self) -> int:
        return self.mixing.shape[1]


def make_world(n_words: int = 300, dim: int = 24, meaning_dim: int = 8, teacher_dim: int = 16, seed: int = 0) -> ToyWorld:
    if n_words < 10 or dim < meaning_dim:
        raise UsageError(f"need n_words >= 10 and dim >= meaning_dim, got {n_words}, {dim}, {meaning_dim}")
    rng = np.random.default_rng(seed)
    words = _words(SRC_CONSONANTS, n_words, rng)
    translations = _words(TGT_CONSONANTS, n_words, rng)

    # Zipf: word i has probability ∝ 1/(i+1)
    probs = 1.0 / np.arange(1, n_words + 1)
    probs /= probs.sum()

    meanings = rng.normal(size=(n_words, meaning_dim))
    n_func = max(1, n_words // 20)
    tags = tuple(FUNCTION_TAGS[i % len(FUNCTION_TAGS)] if i < n_func else TAG_CYCLE[i % len(TAG_CYCLE)] for i in range(n_words))

    mixing = rng.normal(size=(meaning_dim, dim)) / np.sqrt(meaning_dim)
    freq_direction = rng.normal(size=dim)
    freq_direction /= np.linalg.norm(freq_direction)
    teacher_proj = rng.normal(size=(meaning_dim, teacher_dim)) / np.sqrt(meaning_dim)
    return ToyWorld(tuple(words), tuple(translations), probs, meanings, tags, mixing, freq_direction, teacher_proj)


def sample_sentences(world: ToyWorld, n: int, rng: np.random.Generator, min_len: int = 3, max_len: int = 9) -> list[np.ndarray]:
    lengths = rng.integers(min_len, max_len + 1, size=n)
    return [rng.choice(world.size, size=int(k), p=world.probs) for k in lengths]


def render(world: ToyWorld, ids: np.ndarray, target: bool = False) -> str:
    lex = world.translations if target else world.words
    return " ".join(lex[i] for i in ids)


def occurrence_vectors(world: ToyWorld, ids: np.ndarray, rng: np.random.Generator, context: float = 0.3, noise: float = 0.1) -> np.ndarray:
    """Contextual vectors for each token of one sentence."""
    own = world.meanings[ids] @ world.mixing
    ctx = world.meanings[ids].mean(axis=0) @ world.mixing
    freq = -np.log(world.probs[ids])[:, None] * world.freq_direction[None, :]
    return own + context * ctx[None, :] + 0.5 * freq + noise * rng.normal(size=own.shape)


def teacher_vectors(world: ToyWorld, sentences: list[np.ndarray]) -> np.ndarray:
    means = np.stack([world.meanings[s].mean(axis=0) for s in sentences])
    return np.tanh(means @ world.teacher_proj)


def _dump(path: Path, world: ToyWorld, sentences: list[np.ndarray], rng: np.random.Generator, target: bool) -> int:
    lex = world.translations if target else world.words

    def records():
        for s in sentences:
            vecs = occurrence_vectors(world, s, rng)
            for wid, v in zip(s, vecs):
                yield int(wid), v

    return write_dump(path, list(lex), records(), world.dim)


def _write_lines(path: Path, lines: list[str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def _pieces(world: ToyWorld) -> list[str]:
    syl = _syllables(SRC_CONSONANTS) + _syllables(TGT_CONSONANTS)
    return syl + ["##" + s for s in syl]


def write_toy_dataset(
    out_dir: str | Path,
    seed: int = 0,
    n_words: int = 300,
    dim: int = 24,
    n_corpus: int = 3000,
    n_teacher: int = 800,
    n_sts: int = 200,
    n_parallel: int = 400,
    n_retrieval: int = 60,
) -> dict[str, Path]:
    """Write the full toy dataset under `out_dir`; returns name -> path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    world = make_world(n_words=n_words, dim=dim, seed=seed)
    rng = np.random.default_rng(seed + 1)
    paths: dict[str, Path] = {}

    corpus = sample_sentences(world, n_corpus, rng)
    paths["corpus"] = out / "corpus.txt"
    _write_lines(paths["corpus"], [render(world, s) for s in corpus])
    paths["corpus_tgt"] = out / "corpus_tgt.txt"
    _write_lines(paths["corpus_tgt"], [render(world, s, target=True) for s in corpus])

    paths["dump"] = out / "dump.swd"
    n_src = _dump(paths["dump"], world, corpus, rng, target=False)
    paths["dump_tgt"] = out / "dump_tgt.swd"
    n_tgt = _dump(paths["dump_tgt"], world, corpus, rng, target=True)

    teacher = sample_sentences(world, n_teacher, rng)
    paths["teacher_sentences"] = out / "teacher.txt"
    _write_lines(paths["teacher_sentences"], [render(world, s) for s in teacher])
    paths["teacher_vectors"] = out / "teacher.swt"
    write_sentence_embeddings(paths["teacher_vectors"], teacher_vectors(world, teacher))

    a, b = sample_sentences(world, n_sts, rng), sample_sentences(world, n_sts, rng)
    ta, tb = teacher_vectors(world, a), teacher_vectors(world, b)
    gold = np.sum(ta * tb, axis=1) / (np.linalg.norm(ta, axis=1) * np.linalg.norm(tb, axis=1))
    paths["sts"] = out / "sts.tsv"
    to_tsv_safely(
        pd.DataFrame(
            {
                "sent1": [render(world, s) for s in a],
                "sent2": [render(world, s) for s in b],
                "score": [f"{5.0 * (g + 1.0) / 2.0:.4f}" for g in gold],
            }
        ),
        paths["sts"],
        header=False,
    )

    parallel = sample_sentences(world, n_parallel, rng)
    paths["parallel"] = out / "parallel.tsv"
    to_tsv_safely(
        pd.DataFrame({"source": [render(world, s) for s in parallel], "target": [render(world, s, True) for s in parallel]}),
        paths["parallel"],
        header=False,
    )

    held_out = sample_sentences(world, n_retrieval, rng, min_len=5)
    order = rng.permutation(n_retrieval)
    paths["retrieval_src"] = out / "retrieval_src.txt"
    _write_lines(paths["retrieval_src"], [render(world, s) for s in held_out])
    paths["retrieval_tgt"] = out / "retrieval_tgt.txt"
    _write_lines(paths["retrieval_tgt"], [render(world, held_out[i], True) for i in order])
    paths["retrieval_gold"] = out / "retrieval_gold.tsv"
    position = np.argsort(order)
    to_tsv_safely(pd.DataFrame({"src_idx": np.arange(n_retrieval), "tgt_idx": position}), paths["retrieval_gold"], header=False)

    paths["tags"] = out / "tags.tsv"
    to_tsv_safely(pd.DataFrame({"word": list(world.words), "tag": list(world.tags)}), paths["tags"], header=False)

    docs = sample_sentences(world, 150, rng)
    paths["docs"] = out / "docs.tsv"
    to_tsv_safely(
        pd.DataFrame(
            {
                "score": [f"{world.meanings[s, 0].mean():.6f}" for s in docs],
                "text": [render(world, s) for s in docs],
            }
        ),
        paths["docs"],
        header=False,
    )

    paths["pieces"] = out / "pieces.txt"
    _write_lines(paths["pieces"], _pieces(world))

    logger.info(f"toy dataset in {out}: {world.size} words, d={world.dim}, {n_src}+{n_tgt} occurrences")
    return paths
