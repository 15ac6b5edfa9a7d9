"""Sentence/word-level PCA, the ABTT window and the pre-transform identity."""

import numpy as np
import pytest

from swekit.common.errors import DataError, FormatError, UsageError
from swekit.domain.embed_core import StageTag, bag_means, bags_from_token_ids, make_record
from swekit.domain.pca import (
    SENTENCE_LEVEL,
    WORD_LEVEL,
    CovarianceAccumulator,
    PcaTransform,
    abtt_skip,
    eigen_decompose,
    explained_variance_ratio,
    fit_pca_matrix,
    fit_sentence_pca,
    fit_word_pca,
    load_transform,
    pretransform,
    project_components,
    reconstruct,
    save_transform,
    sentence_matrix,
    top_bottom_words,
)

from conftest import make_table, numbered_words


def _oracle_eigen(cov):
    # general (non-symmetric) solver as an independent reference
    w, v = np.linalg.eig(cov)
    w, v = w.real, v.real
    order = np.argsort(-w)
    w, v = w[order], v[:, order]
    v = v / np.linalg.norm(v, axis=0)
    piv = np.argmax(np.abs(v), axis=0)
    v = v * np.where(v[piv, np.arange(v.shape[1])] < 0, -1.0, 1.0)
    return w, v


class TestAbttSkip:
    @pytest.mark.parametrize("d, r", [(768, 7), (256, 2), (512, 5), (99, 0), (100, 1)])
    def test_floor_d_over_100(self, d, r):
        assert abtt_skip(d) == r


class TestFit:
    def test_matches_brute_force_eigendecomposition(self, rng):
        x = rng.normal(size=(50, 8)) @ rng.normal(size=(8, 8))
        t = fit_pca_matrix(x, d_prime=8, abtt=False)
        w, v = _oracle_eigen(np.cov(x, rowvar=False))
        np.testing.assert_allclose(t.eigenvalues, w, atol=1e-8)
        np.testing.assert_allclose(t.components, v, atol=1e-8)
        np.testing.assert_allclose(t.mean, x.mean(axis=0), atol=1e-12)

    def test_sign_convention(self, rng):
        t = fit_pca_matrix(rng.normal(size=(40, 6)), d_prime=3)
        piv = np.argmax(np.abs(t.components), axis=0)
        assert np.all(t.components[piv, np.arange(6)] > 0)

    def test_eigenvalues_descending(self, rng):
        t = fit_pca_matrix(rng.normal(size=(60, 10)) * np.arange(1, 11), d_prime=4)
        assert np.all(np.diff(t.eigenvalues) <= 0)

    def test_rank_deficient(self, rng):
        with pytest.raises(DataError, match="rank-deficient sample"):
            fit_pca_matrix(rng.normal(size=(5, 8)), d_prime=2)

    def test_abtt_toggle(self, rng):
        x = rng.normal(size=(300, 200))
        assert fit_pca_matrix(x, d_prime=10).skip == 2
        assert fit_pca_matrix(x, d_prime=10, abtt=False).skip == 0

    def test_window_must_fit(self, rng):
        with pytest.raises(UsageError, match="exceeds"):
            fit_pca_matrix(rng.normal(size=(40, 6)), d_prime=6, skip=1)


class TestCovarianceAccumulator:
    def test_matches_numpy_cov(self, rng):
        x = rng.normal(loc=1e4, size=(200, 5))
        mean, cov = CovarianceAccumulator(5).add(x).finalize()
        np.testing.assert_allclose(mean, x.mean(axis=0), rtol=1e-12)
        np.testing.assert_allclose(cov, np.cov(x, rowvar=False), atol=1e-9)

    def test_shards_merge_exactly(self, rng):
        x = rng.normal(size=(120, 4))
        whole = CovarianceAccumulator(4).add(x)
        a = CovarianceAccumulator(4).add(x[:30])
        b = CovarianceAccumulator(4).add(x[30:70]).add(x[70:])
        merged = a.merge(b)
        for got, want in zip(merged.finalize(), whole.finalize()):
            np.testing.assert_allclose(got, want, atol=1e-10)

    def test_too_few_rows(self):
        with pytest.raises(DataError, match="rank-deficient"):
            CovarianceAccumulator(3).add(np.ones((1, 3))).finalize()


class TestPretransform:
    def test_commutes_with_averaging(self, rng):
        table = make_table(numbered_words(1000), dim=64, seed=3)
        t = fit_word_pca(table, d_prime=32)
        pre = pretransform(table, t)
        bags = bags_from_token_ids([rng.integers(0, 1000, size=int(rng.integers(1, 20))) for _ in range(200)])
        lhs = (bag_means(table.matrix, bags) - t.mean) @ t.window()
        rhs = bag_means(pre.matrix, bags)
        np.testing.assert_allclose(lhs, rhs, atol=1e-10)

    def test_hand_rotation(self):
        table = make_table(["a", "b", "c"], dim=2)
        c, s = np.cos(0.3), np.sin(0.3)
        rot = np.array([[c, -s], [s, c]])
        t = PcaTransform(np.array([0.5, -1.0]), rot, np.array([2.0, 1.0]), 0, 2)
        out = pretransform(table, t)
        np.testing.assert_allclose(out.matrix, (table.matrix - [0.5, -1.0]) @ rot, atol=1e-12)
        assert out.stage_tag is StageTag.PCA

    def test_skipped_components_vanish(self, rng):
        table = make_table(numbered_words(400), dim=256, seed=5)
        t = fit_word_pca(table, d_prime=16)
        assert t.skip == 2
        back = reconstruct(pretransform(table, t).matrix, t)
        np.testing.assert_allclose((back - t.mean) @ t.components[:, :2], 0.0, atol=1e-10)

    def test_dimension_mismatch(self):
        t = fit_pca_matrix(np.random.default_rng(0).normal(size=(20, 3)), d_prime=2)
        with pytest.raises(UsageError):
            pretransform(make_table(["a"], dim=4), t)


class TestSentencePca:
    def test_sentence_matrix_skips_empty(self, small_table):
        recs = [make_record("the cat"), make_record("unicorn"), make_record("dog")]
        x, skipped = sentence_matrix(small_table, recs)
        assert skipped == 1
        np.testing.assert_allclose(x[0], small_table.matrix[:2].mean(axis=0))

    def test_fit_over_sentence_means(self, rng):
        words = numbered_words(50)
        table = make_table(words, dim=6, seed=2)
        recs = [make_record(" ".join(rng.choice(words, size=4))) for _ in range(80)]
        t = fit_sentence_pca(table, recs, d_prime=3)
        x, _ = sentence_matrix(table, recs)
        ref = fit_pca_matrix(x, d_prime=3)
        assert t.mode == SENTENCE_LEVEL
        np.testing.assert_allclose(t.components, ref.components, atol=1e-10)

    def test_languages_are_stacked(self, rng):
        words = numbered_words(30)
        table = make_table(words, dim=4, seed=4)
        a = [make_record(" ".join(rng.choice(words, size=3))) for _ in range(20)]
        b = [make_record(" ".join(rng.choice(words, size=3))) for _ in range(20)]
        stacked = fit_sentence_pca([table, table], [a, b], d_prime=2)
        single = fit_sentence_pca(table, a + b, d_prime=2)
        np.testing.assert_allclose(stacked.components, single.components, atol=1e-10)

    def test_word_level_mode(self):
        t = fit_word_pca(make_table(numbered_words(20), dim=4), d_prime=2)
        assert t.mode == WORD_LEVEL


class TestInspection:
    def test_collinear_pc1_tracks_position(self, rng):
        pos = rng.normal(size=12)
        direction = np.array([1.0, 2.0, -2.0]) / 3.0
        x = np.outer(pos, direction) + np.array([5.0, 0.0, 1.0])
        t = fit_pca_matrix(x, d_prime=1, abtt=False)
        pc1 = project_components(x, t, [1])[:, 0]
        assert abs(np.corrcoef(pc1, pos)[0, 1]) == pytest.approx(1.0, abs=1e-10)
        np.testing.assert_allclose(np.abs(pc1), np.abs(pos - pos.mean()), atol=1e-10)

    def test_top_bottom_match_full_sort(self):
        table = make_table(numbered_words(40), dim=5, seed=9)
        t = fit_word_pca(table, d_prime=2, abtt=False)
        smallest, largest = top_bottom_words(table, t, 1, k=5, restrict=30)
        values = project_components(table.matrix[:30], t, [1])[:, 0]
        order = np.argsort(values)
        assert [w for w, _ in smallest] == [f"w{i}" for i in order[:5]]
        assert [w for w, _ in largest] == [f"w{i}" for i in order[::-1][:5]]

    def test_component_index_is_one_based(self):
        t = fit_word_pca(make_table(numbered_words(10), dim=3), d_prime=2)
        with pytest.raises(UsageError):
            project_components(np.zeros((1, 3)), t, [0])

    def test_explained_variance(self, rng):
        t = fit_pca_matrix(rng.normal(size=(50, 5)), d_prime=5, abtt=False)
        assert explained_variance_ratio(t) == pytest.approx(1.0)
        assert 0.0 < explained_variance_ratio(t, keep=2) < 1.0


class TestTransformFile:
    def test_round_trip_exact(self, tmp_path, rng):
        t = fit_pca_matrix(rng.normal(size=(30, 4)), d_prime=2, skip=1)
        save_transform(t, tmp_path / "t.swp")
        back = load_transform(tmp_path / "t.swp")
        assert (back.skip, back.keep, back.mode) == (1, 2, SENTENCE_LEVEL)
        np.testing.assert_array_equal(back.components, t.components)

    def test_truncated(self, tmp_path, rng):
        save_transform(fit_pca_matrix(rng.normal(size=(30, 4)), d_prime=2), tmp_path / "t.swp")
        raw = (tmp_path / "t.swp").read_bytes()
        (tmp_path / "t.swp").write_bytes(raw[:-8])
        with pytest.raises(FormatError, match="unexpected EOF"):
            load_transform(tmp_path / "t.swp")

    def test_not_orthonormal(self):
        with pytest.raises(DataError, match="orthonormal"):
            PcaTransform(np.zeros(2), np.array([[1.0, 1.0], [0.0, 1.0]]), np.array([1.0, 0.5]), 0, 1)

    def test_eigen_decompose_clips_tiny_negatives(self):
        cov = np.diag([2.0, 1.0, -1e-14])
        w, _ = eigen_decompose(cov)
        assert w.min() == 0.0
