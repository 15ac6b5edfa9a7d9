"""Weighted ensembles: the cosine-averaging identity and the precombined table."""

import numpy as np
import pytest

from swekit.common.errors import UsageError
from swekit.domain.embed_core import load_table, save_table
from swekit.domain.encode import SentenceEncoder, tokenizer_from_pieces
from swekit.domain.ensemble import (
    EnsembleEncoder,
    PrecombinedEncoder,
    combine_blocks,
    ensemble_encode,
    load_ensemble_spec,
    make_spec,
    precombine_tables,
)

from conftest import make_table, numbered_words


def _texts(rng, words, n):
    return [" ".join(rng.choice(words, size=int(rng.integers(1, 8)))) for _ in range(n)]


class TestEnsembleIdentity:
    @pytest.mark.parametrize("n_members", [2, 3])
    def test_dot_equals_weighted_mean_cosine(self, n_members, rng):
        words = numbered_words(50)
        tables = [make_table(words, dim=int(rng.integers(3, 9)), seed=10 + i) for i in range(n_members)]
        weights = rng.uniform(0.1, 3.0, size=n_members)
        spec = make_spec(tables, weights)
        ens = EnsembleEncoder(spec)
        members = [SentenceEncoder(t) for t in tables]

        a, b = _texts(rng, words, 100), _texts(rng, words, 100)
        fa, fb = ens.encode_batch(a).vectors, ens.encode_batch(b).vectors
        cos = np.stack([np.sum(m.encode_batch(a).vectors * m.encode_batch(b).vectors, axis=1) for m in members], axis=1)
        np.testing.assert_allclose(np.sum(fa * fb, axis=1), cos @ weights / weights.sum(), atol=1e-10)
        np.testing.assert_allclose(np.linalg.norm(fa, axis=1), 1.0, atol=1e-12)
        assert fa.shape[1] == spec.total_dim

    def test_missing_member_gives_zero_block(self):
        a = make_table(["x", "y"], dim=2, seed=1)
        b = make_table(["y", "z"], dim=3, seed=2)
        out = ensemble_encode("x", make_spec([a, b], [1.0, 3.0]))
        np.testing.assert_array_equal(out.empty_blocks, [False, True])
        np.testing.assert_array_equal(out.vectors[2:], 0.0)
        assert np.linalg.norm(out.vectors) == pytest.approx(0.5)

    def test_combine_blocks_scales(self):
        out = combine_blocks([np.array([[3.0, 4.0]]), np.array([[0.0, 2.0]])], np.array([1.0, 3.0]))
        np.testing.assert_allclose(out.vectors[0], [0.6 / 2, 0.8 / 2, 0.0, np.sqrt(3) / 2])

    def test_spec_validation(self):
        t = make_table(["a"])
        with pytest.raises(UsageError, match="at least 2"):
            make_spec([t])
        with pytest.raises(UsageError, match="weight must be > 0"):
            make_spec([t, t], [1.0, 0.0])


class TestPrecombined:
    def test_matches_member_path(self, rng):
        shared = numbered_words(40)
        t1 = make_table(shared + ["only1"], dim=5, seed=1)
        t2 = make_table(shared[5:] + ["only2"], dim=4, seed=2)
        t3 = make_table(shared[::-1], dim=6, seed=3)
        spec = make_spec([t1, t2, t3], [1.5, 0.5, 2.0])
        pre = precombine_tables(spec)
        texts = _texts(rng, shared + ["only1", "only2"], 200) + ["only1", "only2 only1", "nothing"]

        want = EnsembleEncoder(spec).encode_batch(texts)
        got = PrecombinedEncoder(pre).encode_batch(texts)
        np.testing.assert_allclose(got.vectors, want.vectors, atol=1e-12)
        np.testing.assert_array_equal(got.empty_blocks, want.empty_blocks)

    def test_matches_member_path_with_tokenizer(self):
        t1 = make_table(["tokeniser", "token", "the"], dim=3, seed=1)
        t2 = make_table(["token", "the", "cat"], dim=4, seed=2)
        spec = make_spec([t1, t2], [1.0, 2.0])
        tk = tokenizer_from_pieces(["token", "##ise", "##r", "##s", "the", "cat"])
        texts = ["tokeniser", "the tokeniser", "tokenisers cat", "cat", "dog"]

        pre = precombine_tables(spec, tk)
        want = EnsembleEncoder(spec, tk).encode_batch(texts)
        got = PrecombinedEncoder(pre, tk).encode_batch(texts)
        np.testing.assert_allclose(got.vectors, want.vectors, atol=1e-12)
        np.testing.assert_array_equal(got.empty_blocks, want.empty_blocks)
        assert not got.empty_blocks[0].any()

        row = pre.table.vocab.id_of("tokeniser")
        np.testing.assert_array_equal(pre.table.matrix[row, 3:], t2.matrix[0])
        np.testing.assert_array_equal(precombine_tables(spec).table.matrix[row, 3:], 0.0)

    def test_union_vocabulary_and_layout(self):
        t1 = make_table(["a", "b"], dim=2, seed=1)
        t2 = make_table(["b", "c"], dim=3, seed=2)
        pre = precombine_tables(make_spec([t1, t2]))
        assert pre.table.vocab.words == ("a", "b", "c")
        assert pre.block_dims == (2, 3)
        np.testing.assert_array_equal(pre.bounds, [0, 2, 5])
        np.testing.assert_array_equal(pre.table.matrix[0, 2:], 0.0)
        np.testing.assert_array_equal(pre.table.matrix[1, 2:], t2.matrix[0])


class TestSpecFile:
    def test_members_resolve_relative_to_file(self, tmp_path):
        (tmp_path / "m").mkdir()
        save_table(make_table(["a", "b"], dim=2), tmp_path / "m" / "one.swe")
        save_table(make_table(["a", "c"], dim=3, seed=1), tmp_path / "m" / "two.swe")
        conf = tmp_path / "ensemble.conf"
        conf.write_text(
            "# two members\nmember.2.path = m/two.swe\nmember.2.weight = 0.5\nmember.1.path = m/one.swe\n",
            encoding="utf-8",
        )
        spec = load_ensemble_spec(conf, load_table)
        assert [m.name for m in spec.members] == ["one", "two"]
        np.testing.assert_array_equal(spec.weights, [1.0, 0.5])
        assert spec.dims == (2, 3)

    def test_unknown_key(self, tmp_path):
        conf = tmp_path / "ensemble.conf"
        conf.write_text("member.1.colour = red\n", encoding="utf-8")
        with pytest.raises(UsageError, match="unknown ensemble key"):
            load_ensemble_spec(conf, load_table)

    def test_member_without_path(self, tmp_path):
        conf = tmp_path / "ensemble.conf"
        conf.write_text("member.1.weight = 2\nmember.2.weight = 1\n", encoding="utf-8")
        with pytest.raises(UsageError, match="has no path"):
            load_ensemble_spec(conf, load_table)
