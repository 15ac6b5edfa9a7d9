"""Occurrence dumps and decontextualization (per-word mean of the first N vectors)."""

import json

import numpy as np
import pytest

from swekit.common.errors import DataError, FormatError, UsageError
from swekit.domain.embed_core import StageTag, Vocabulary
from swekit.domain.extract import (
    OccurrenceDump,
    average_subwords,
    decontextualize,
    decontextualize_many,
    open_dump,
    write_dump,
    write_dump_jsonl,
    write_occurrence_report,
)


def _write(tmp_path, words, records, dim, name="d.swd"):
    p = tmp_path / name
    write_dump(p, words, records, dim)
    return p


class TestDecontextualize:
    def test_means_of_all_occurrences(self, tmp_path):
        vecs = {
            "bank": [np.array([1.0, 0.0]), np.array([3.0, 2.0])],
            "river": [np.array([0.0, 4.0])],
        }
        recs = [(0, vecs["bank"][0]), (1, vecs["river"][0]), (0, vecs["bank"][1])]
        dump = open_dump(_write(tmp_path, ["bank", "river"], recs, 2))
        out = decontextualize(dump, Vocabulary(("river", "bank")))
        np.testing.assert_allclose(out.table.matrix, [[0.0, 4.0], [2.0, 1.0]], atol=1e-7)
        np.testing.assert_array_equal(out.counts, [1, 2])
        assert out.table.stage_tag is StageTag.RAW

    def test_only_first_n_occurrences_in_stream_order(self, tmp_path):
        rows = [np.full(3, float(k)) for k in range(10)]
        dump = open_dump(_write(tmp_path, ["w"], [(0, r) for r in rows], 3))
        out = decontextualize(dump, Vocabulary(("w",)), max_occurrences=4)
        np.testing.assert_allclose(out.table.matrix[0], np.full(3, 1.5))
        assert out.counts[0] == 4

    def test_cap_spans_chunks(self, tmp_path):
        rows = [np.full(2, float(k)) for k in range(7)]
        dump = open_dump(_write(tmp_path, ["w"], [(0, r) for r in rows], 2))
        # three records per chunk: the cap is crossed in the second chunk
        assert len(list(dump.chunks(chunk_records=3))) == 3
        dump.chunks = lambda: OccurrenceDump.chunks(dump, chunk_records=3)
        out = decontextualize(dump, Vocabulary(("w",)), max_occurrences=5)
        np.testing.assert_allclose(out.table.matrix[0], np.full(2, 2.0))

    def test_zero_occurrence_words_get_zero_rows(self, tmp_path, caplog):
        dump = open_dump(_write(tmp_path, ["a"], [(0, np.ones(2))], 2))
        with caplog.at_level("WARNING"):
            out = decontextualize(dump, Vocabulary(("a", "ghost")))
        np.testing.assert_array_equal(out.table.matrix[1], [0.0, 0.0])
        assert out.zero_words == ["ghost"]
        assert "no occurrences" in caplog.text

    def test_out_of_vocab_records_skipped(self, tmp_path):
        dump = open_dump(_write(tmp_path, ["a", "zzz"], [(0, np.ones(2)), (1, np.ones(2)), (1, np.ones(2))], 2))
        out = decontextualize(dump, Vocabulary(("a",)))
        assert out.skipped_records == 2

    def test_rerun_is_bit_identical(self, tmp_path, rng):
        recs = [(int(rng.integers(0, 5)), rng.normal(size=8)) for _ in range(400)]
        dump_path = _write(tmp_path, [f"w{i}" for i in range(5)], recs, 8)
        vocab = Vocabulary(tuple(f"w{i}" for i in range(5)))
        a = decontextualize(open_dump(dump_path), vocab, max_occurrences=30)
        b = decontextualize(open_dump(dump_path), vocab, max_occurrences=30)
        assert a.table.matrix.tobytes() == b.table.matrix.tobytes()

    def test_bad_max_occurrences(self, tmp_path):
        dump = open_dump(_write(tmp_path, ["a"], [(0, np.ones(2))], 2))
        with pytest.raises(UsageError):
            decontextualize(dump, Vocabulary(("a",)), max_occurrences=0)

    def test_occurrence_report(self, tmp_path):
        recs = [(0, np.ones(2))] * 3 + [(1, np.ones(2))]
        dump = open_dump(_write(tmp_path, ["a", "b"], recs, 2))
        out = decontextualize(dump, Vocabulary(("a", "b", "c")), max_occurrences=3)
        write_occurrence_report(out, tmp_path / "occ.tsv", 3)
        assert (tmp_path / "occ.tsv").read_text(encoding="utf-8") == "b\t1\nc\t0\n"


class TestJointDumps:
    def test_language_tags_route_records(self, tmp_path):
        en = _write(tmp_path, ["house"], [(0, np.array([1.0, 0.0]))], 2, "en.swd")
        de = _write(tmp_path, ["haus", "house"], [(0, np.array([0.0, 1.0])), (1, np.array([0.0, 3.0]))], 2, "de.swd")
        vocab = Vocabulary(("en::house", "de::haus", "de::house"))
        out = decontextualize_many([(open_dump(en), "en"), (open_dump(de), "de")], vocab)
        np.testing.assert_allclose(out.table.matrix, [[1.0, 0.0], [0.0, 1.0], [0.0, 3.0]], atol=1e-7)

    def test_dims_must_agree(self, tmp_path):
        a = _write(tmp_path, ["x"], [(0, np.ones(2))], 2, "a.swd")
        b = _write(tmp_path, ["x"], [(0, np.ones(3))], 3, "b.swd")
        with pytest.raises(DataError, match="disagree"):
            decontextualize_many([(open_dump(a), None), (open_dump(b), None)], Vocabulary(("x",)))


class TestDumpFormats:
    def test_truncated_record(self, tmp_path):
        p = _write(tmp_path, ["a"], [(0, np.ones(4))], 4)
        raw = p.read_bytes()
        p.write_bytes(raw[:-2])
        with pytest.raises(FormatError, match="unexpected EOF"):
            list(open_dump(p).chunks())

    def test_word_id_outside_list(self, tmp_path):
        with pytest.raises(UsageError):
            _write(tmp_path, ["a"], [(3, np.ones(2))], 2)

    def test_jsonl_with_pieces(self, tmp_path):
        p = tmp_path / "d.jsonl"
        p.write_text(
            json.dumps({"word": "tokeniser", "pieces": [[1.0, 2.0], [3.0, 4.0], [5.0, 0.0]]}) + "\n"
            + json.dumps({"word": "cat", "vec": [1.0, 1.0]}) + "\n",
            encoding="utf-8",
        )
        dump = open_dump(p)
        assert dump.dim == 2
        out = decontextualize(dump, Vocabulary(("cat", "tokeniser")))
        np.testing.assert_allclose(out.table.matrix, [[1.0, 1.0], [3.0, 2.0]])

    def test_jsonl_writer_matches_binary(self, tmp_path, rng):
        recs = [("a", rng.normal(size=3)), ("b", rng.normal(size=3)), ("a", rng.normal(size=3))]
        write_dump_jsonl(tmp_path / "d.jsonl", recs)
        _write(tmp_path, ["a", "b"], [(0 if w == "a" else 1, v) for w, v in recs], 3)
        vocab = Vocabulary(("a", "b"))
        j = decontextualize(open_dump(tmp_path / "d.jsonl"), vocab)
        b = decontextualize(open_dump(tmp_path / "d.swd"), vocab)
        np.testing.assert_allclose(j.table.matrix, b.table.matrix, atol=1e-6)

    def test_jsonl_wrong_length(self, tmp_path):
        p = tmp_path / "d.jsonl"
        p.write_text('{"word": "a", "vec": [1, 2]}\n{"word": "b", "vec": [1, 2, 3]}\n', encoding="utf-8")
        with pytest.raises(DataError, match="line 2"):
            list(open_dump(p).chunks())

    def test_empty_dump(self, tmp_path):
        p = tmp_path / "d.jsonl"
        p.write_text("\n", encoding="utf-8")
        with pytest.raises(DataError, match="empty dump"):
            open_dump(p)

    def test_average_subwords_empty(self):
        with pytest.raises(DataError):
            average_subwords([])
