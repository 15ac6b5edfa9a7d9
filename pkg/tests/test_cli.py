"""End-to-end CLI runs over a small synthetic dataset."""

import numpy as np
import pytest

from swekit.app.cli import main
from swekit.data.io.write import read_report
from swekit.data.toy import write_toy_dataset
from swekit.domain.distill import read_sentence_embeddings
from swekit.domain.embed_core import StageTag, load_table

SRC, TGT = "src", "tgt"


def _run(*args: str) -> int:
    return main([*args, "--preset", "toy", "--seed", "0"])


@pytest.fixture(scope="module")
def built(tmp_path_factory):
    root = tmp_path_factory.mktemp("pipeline")
    data = write_toy_dataset(root / "data", seed=0, n_corpus=600, n_teacher=200, n_sts=60, n_parallel=120, n_retrieval=20)
    out = root / "out"

    def o(name):
        return str(out / name)

    def d(key):
        return str(data[key])

    out.mkdir()
    (out / "ensemble.conf").write_text(
        "member.1.path = distilled.swe\nmember.1.weight = 1\nmember.2.path = pca.swe\nmember.2.weight = 0.5\n",
        encoding="utf-8",
    )
    steps = {
        "vocab": ("vocab", "--corpus", d("corpus"), "--out", o("vocab.tsv")),
        "extract": ("extract", "--dump", d("dump"), "--vocab", o("vocab.tsv"), "--out", o("raw.swe"), "--report", o("extract.txt")),
        "pca": ("pca", "--table", o("raw.swe"), "--sentences", d("corpus"), "--out", o("pca.swe"), "--report", o("pca.txt")),
        "distill": (
            "distill", "--table", o("pca.swe"), "--teacher-sentences", d("teacher_sentences"),
            "--teacher-dump", d("teacher_vectors"), "--out", o("distilled.swe"), "--steps", "40", "--report", o("distill.txt"),
        ),
        "encode": ("encode", "--table", o("distilled.swe"), "--input", d("teacher_sentences"), "--out", o("encoded.swt")),
        "encode-text": ("encode", "--table", o("distilled.swe"), "--input", d("teacher_sentences"), "--out", o("encoded.txt")),
        "sts": ("sts-eval", "--table", o("distilled.swe"), "--data", d("sts"), "--report", o("sts.txt")),
        "xl-vocab": ("vocab", "--corpus", d("corpus"), "--lang", SRC, "--corpus", d("corpus_tgt"), "--lang", TGT, "--out", o("xl_vocab.tsv")),
        "xl-extract": (
            "extract", "--dump", d("dump"), "--lang", SRC, "--dump", d("dump_tgt"), "--lang", TGT,
            "--vocab", o("xl_vocab.tsv"), "--out", o("xl_raw.swe"),
        ),
        "xl-pca": (
            "pca", "--table", o("xl_raw.swe"), "--sentences", d("corpus"), "--lang", SRC,
            "--sentences", d("corpus_tgt"), "--lang", TGT, "--out", o("xl_pca.swe"),
        ),
        "xl-train": (
            "xl-train", "--table", o("xl_pca.swe"), "--parallel", d("parallel"), "--src-lang", SRC, "--tgt-lang", TGT,
            "--out", o("xl_trained.swe"), "--steps", "40", "--report", o("xl.txt"),
        ),
        "retrieve": (
            "retrieve-eval", "--table", o("xl_trained.swe"), "--src", d("retrieval_src"), "--tgt", d("retrieval_tgt"),
            "--gold", d("retrieval_gold"), "--src-lang", SRC, "--tgt-lang", TGT, "--report", o("retrieval.txt"),
        ),
        "ensemble": (
            "ensemble", "--spec", o("ensemble.conf"), "--input", d("teacher_sentences"), "--out", o("ensemble.swt"),
            "--precombined-out", o("precombined.swe"), "--report", o("ensemble.txt"),
        ),
        "sts-ensemble": ("sts-eval", "--spec", o("ensemble.conf"), "--data", d("sts"), "--report", o("sts_ensemble.txt")),
        "norms": ("analyze-norms", "--table", o("raw.swe"), "--tags", d("tags"), "--profile-out", o("profile.tsv"), "--report", o("norms.txt")),
        "correlate": (
            "correlate-pc", "--table", o("raw.swe"), "--transform", o("pca.swe.pca.swp"), "--docs", d("docs"),
            "--components", "1,2", "--report", o("correlate.txt"),
        ),
        "sif": ("sif", "--table", o("distilled.swe"), "--out", o("sif.swe")),
    }
    codes = {name: _run(*args) for name, args in steps.items()}
    return {"out": out, "data": data, "codes": codes}


def test_every_stage_succeeds(built):
    assert built["codes"] == {name: 0 for name in built["codes"]}


def test_tables_carry_stage_and_sidecars(built):
    out = built["out"]
    assert load_table(out / "raw.swe").stage_tag is StageTag.RAW
    pca = load_table(out / "pca.swe")
    assert pca.stage_tag is StageTag.PCA and pca.dim == 16
    assert load_table(out / "distilled.swe").stage_tag is StageTag.TRAINED
    for name in ("raw.swe.vocab.tsv", "raw.swe.occurrences.tsv", "pca.swe.pca.swp", "distilled.swe.history.tsv", "pca.swe.meta.json"):
        assert (out / name).exists(), name


def test_reports(built):
    out = built["out"]
    assert int(read_report(out / "pca.txt")["skip"]) == 0
    distill = read_report(out / "distill.txt")
    assert int(distill["steps_run"]) <= 40
    assert -100.0 <= float(read_report(out / "sts.txt")["spearman_x100"]) <= 100.0
    assert -100.0 <= float(read_report(out / "sts_ensemble.txt")["spearman_x100"]) <= 100.0
    retrieval = read_report(out / "retrieval.txt")
    assert int(retrieval["n_gold"]) == 20
    assert 0.0 <= float(retrieval["f1"]) <= 1.0
    assert read_report(out / "ensemble.txt")["dim"] == "32"
    assert any(k.startswith("norm.") for k in read_report(out / "norms.txt"))
    assert set(read_report(out / "correlate.txt")) == {"documents", "pearson.pc1", "pearson.pc2"}


def test_encoded_outputs_agree(built):
    out = built["out"]
    binary = read_sentence_embeddings(out / "encoded.swt")
    text = np.loadtxt(out / "encoded.txt", ndmin=2)
    assert binary.shape == (200, 16)
    np.testing.assert_allclose(text, binary, rtol=1e-6, atol=1e-7)
    assert load_table(out / "precombined.swe").dim == 32


def test_inspect_prints_extremes(built, capsys):
    out = built["out"]
    rc = _run("inspect-pcs", "--table", str(out / "raw.swe"), "--transform", str(out / "pca.swe.pca.swp"), "--k", "3")
    assert rc == 0
    text = capsys.readouterr().out
    assert "PC1 largest:" in text and "PC2 smallest:" in text


def test_resume_skips_and_rejects_stale(built, capsys):
    out, data = built["out"], built["data"]
    args = ("vocab", "--corpus", str(data["corpus"]), "--out", str(out / "vocab.tsv"))
    assert _run(*args, "--resume") == 0
    assert "up to date" in capsys.readouterr().out
    assert _run(*args, "--resume", "--cap", "50") == 1


def test_reruns_are_byte_identical(built, tmp_path):
    data = built["data"]
    _run("vocab", "--corpus", str(data["corpus"]), "--out", str(tmp_path / "v.tsv"))
    assert (tmp_path / "v.tsv").read_bytes() == (built["out"] / "vocab.tsv").read_bytes()


class TestExitCodes:
    def test_unknown_config_key(self, built, tmp_path):
        conf = tmp_path / "bad.conf"
        conf.write_text("colour = blue\n", encoding="utf-8")
        assert _run("vocab", "--corpus", str(built["data"]["corpus"]), "--out", str(tmp_path / "v.tsv"), "--config", str(conf)) == 2

    def test_missing_input(self, tmp_path):
        assert _run("vocab", "--corpus", str(tmp_path / "missing.txt"), "--out", str(tmp_path / "v.tsv")) == 1

    def test_lang_count_mismatch(self, built, tmp_path):
        c = str(built["data"]["corpus"])
        assert _run("vocab", "--corpus", c, "--corpus", c, "--lang", "en", "--out", str(tmp_path / "v.tsv")) == 2

    def test_missing_required_flag(self):
        with pytest.raises(SystemExit) as e:
            main(["encode", "--table", "x.swe"])
        assert e.value.code == 2

    def test_empty_corpus(self, tmp_path):
        (tmp_path / "empty.txt").write_text("...\n", encoding="utf-8")
        assert _run("vocab", "--corpus", str(tmp_path / "empty.txt"), "--out", str(tmp_path / "v.tsv")) == 1
