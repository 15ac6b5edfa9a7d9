"""Similarity matrices, the distillation loss and its gradient, and the KD driver."""

import numpy as np
import pytest

from swekit.common.errors import DataError, FormatError, UsageError
from swekit.domain.distill import (
    CROSS_LINGUAL,
    SimilarityMatrix,
    TeacherBatchSource,
    cosine_matrix,
    cross_cosine_matrix,
    kd_grad,
    kd_loss,
    kd_loss_and_grad,
    load_teacher,
    mean_abs_gap,
    read_sentence_embeddings,
    row_distributions,
    similarity_gap,
    train_kd,
    write_sentence_embeddings,
)
from swekit.domain.embed_core import StageTag, bags_from_records, bags_from_token_ids, make_record
from swekit.domain.train import TrainConfig, densify

from conftest import make_table, numbered_words


def _random_sim(rng, k):
    x = rng.normal(size=(k, 3))
    return cosine_matrix(x).values


def _naive_kd(s, t, tau):
    k = s.shape[0]
    total = 0.0
    for i in range(k):
        zs = sum(np.exp(s[i, j] / tau) for j in range(k) if j != i)
        zt = sum(np.exp(t[i, j] / tau) for j in range(k) if j != i)
        for j in range(k):
            if j != i:
                q = np.exp(t[i, j] / tau) / zt
                p = np.exp(s[i, j] / tau) / zs
                total -= q * np.log(p)
    return total / k


class TestSimilarityMatrix:
    def test_matches_pairwise_oracle(self, rng):
        x = rng.normal(size=(3, 5))
        s = cosine_matrix(x).values
        for i in range(3):
            for j in range(3):
                want = x[i] @ x[j] / (np.linalg.norm(x[i]) * np.linalg.norm(x[j]))
                assert s[i, j] == pytest.approx(want, abs=1e-12)
        np.testing.assert_allclose(s, s.T, atol=1e-12)

    def test_zero_row(self):
        with pytest.raises(DataError, match="zero-norm"):
            cosine_matrix(np.array([[1.0, 0.0], [0.0, 0.0]]))

    def test_out_of_range(self):
        with pytest.raises(DataError, match="outside"):
            SimilarityMatrix(np.array([[1.0, 1.5], [1.5, 1.0]]))

    def test_cross_lingual(self, rng):
        a, b = rng.normal(size=(4, 3)), rng.normal(size=(4, 3))
        u = cross_cosine_matrix(a, b)
        assert u.kind == CROSS_LINGUAL
        assert u.values[1, 2] == pytest.approx(
            a[1] @ b[2] / (np.linalg.norm(a[1]) * np.linalg.norm(b[2])), abs=1e-12
        )
        with pytest.raises(UsageError):
            cross_cosine_matrix(a, b[:3])


class TestKdLoss:
    def test_rows_are_distributions(self, rng):
        p = row_distributions(_random_sim(rng, 6), 0.05)
        np.testing.assert_allclose(p.sum(axis=1), 1.0, atol=1e-12)
        np.testing.assert_array_equal(np.diag(p), 0.0)

    def test_hand_matrices_match_double_loop(self):
        s = np.array([[1.0, 0.2, -0.1], [0.2, 1.0, 0.4], [-0.1, 0.4, 1.0]])
        t = np.array([[1.0, 0.5, 0.3], [0.5, 1.0, -0.2], [0.3, -0.2, 1.0]])
        assert kd_loss(s, t, 0.05) == pytest.approx(_naive_kd(s, t, 0.05), abs=1e-12)
        assert kd_loss(s, t, 0.7) == pytest.approx(_naive_kd(s, t, 0.7), abs=1e-12)

    def test_two_sentences_have_zero_loss(self, rng):
        for _ in range(10):
            assert kd_loss(_random_sim(rng, 2), _random_sim(rng, 2)) == 0.0

    def test_gibbs_bound(self, rng):
        for _ in range(100):
            k = int(rng.integers(3, 9))
            s, t = _random_sim(rng, k), _random_sim(rng, k)
            assert kd_loss(s, t) >= kd_loss(t, t) - 1e-12

    def test_row_shift_invariance(self, rng):
        s, t = _random_sim(rng, 5), _random_sim(rng, 5)
        shifted = s + rng.normal(size=(5, 1))
        assert kd_loss(shifted, t) == pytest.approx(kd_loss(s, t), abs=1e-10)

    def test_degenerate_batch(self):
        with pytest.raises(DataError, match="degenerate batch"):
            kd_loss(np.ones((1, 1)), np.ones((1, 1)))

    def test_shape_mismatch_and_tau(self, rng):
        with pytest.raises(UsageError):
            kd_loss(_random_sim(rng, 3), _random_sim(rng, 4))
        with pytest.raises(UsageError):
            kd_loss(_random_sim(rng, 3), _random_sim(rng, 3), tau=0.0)

    def test_mean_abs_gap(self):
        s = np.array([[1.0, 0.5], [0.5, 1.0]])
        t = np.array([[1.0, 0.1], [0.1, 1.0]])
        assert mean_abs_gap(s, t) == pytest.approx(0.4)


class TestKdGradient:
    @pytest.mark.parametrize("seed", range(20))
    def test_matches_central_differences(self, seed):
        rng = np.random.default_rng(seed)
        k = int(rng.integers(3, 9))
        d = int(rng.integers(4, 17))
        n_words = 6
        matrix = rng.normal(size=(n_words, d))
        bags = bags_from_token_ids([rng.integers(0, n_words, size=int(rng.integers(1, 4))) for _ in range(k)])
        t_unit = rng.normal(size=(k, d))
        t_unit /= np.linalg.norm(t_unit, axis=1, keepdims=True)
        teacher_sim = t_unit @ t_unit.T
        tau = 0.05

        rows, grads = kd_grad(bags, matrix, teacher_sim, tau)
        g = densify(rows, grads, matrix.shape)

        h = 1e-5
        fd = np.zeros_like(matrix)
        for i in range(n_words):
            for j in range(d):
                plus, minus = matrix.copy(), matrix.copy()
                plus[i, j] += h
                minus[i, j] -= h
                fd[i, j] = (
                    kd_loss_and_grad(bags, plus, teacher_sim, tau)[0]
                    - kd_loss_and_grad(bags, minus, teacher_sim, tau)[0]
                ) / (2 * h)
        np.testing.assert_allclose(g, fd, rtol=1e-4, atol=1e-5)

    def test_untouched_rows_absent(self, rng):
        matrix = rng.normal(size=(8, 4))
        bags = bags_from_token_ids([[0, 1], [2], [1, 3]])
        rows, _ = kd_grad(bags, matrix, _random_sim(rng, 3))
        np.testing.assert_array_equal(rows, [0, 1, 2, 3])


def _synthetic_task(n_words=30, dim=8, n_sent=400, seed=0):
    rng = np.random.default_rng(seed)
    words = numbered_words(n_words)
    truth = rng.normal(size=(n_words, dim))
    records, vectors = [], []
    for _ in range(n_sent):
        ids = rng.integers(0, n_words, size=int(rng.integers(3, 7)))
        records.append(make_record(" ".join(words[i] for i in ids)))
        vectors.append(truth[ids].mean(axis=0))
    teacher = TeacherBatchSource(tuple(records), np.array(vectors))
    student = make_table(words, dim=dim, seed=seed + 1, stage=StageTag.PCA)
    return student, teacher


class TestTrainKd:
    def test_gap_halves_and_best_snapshot_is_kept(self):
        student, teacher = _synthetic_task()
        cfg = TrainConfig(lr=0.01, steps=2000, batch_size=32, tau=0.05, val_fraction=0.1, val_every=100, patience=10)
        sample, _ = bags_from_records(student.vocab, teacher.sentences[:64])
        before = similarity_gap(student.matrix, sample, teacher.vectors[:64])

        trained, run = train_kd(student, teacher, cfg)
        after = similarity_gap(trained.matrix, sample, teacher.vectors[:64])

        assert after <= 0.5 * before
        assert trained.stage_tag is StageTag.TRAINED
        assert run.val_history[0][0] == 0
        assert run.best_val == min(v for _, v in run.val_history)
        assert (run.best_step, run.best_val) in run.val_history

    def test_is_seeded(self):
        student, teacher = _synthetic_task(n_sent=120)
        cfg = TrainConfig(lr=0.01, steps=50, batch_size=16, val_every=10)
        a, _ = train_kd(student, teacher, cfg)
        b, _ = train_kd(student, teacher, cfg)
        np.testing.assert_array_equal(a.matrix, b.matrix)

    def test_warns_before_pca(self, caplog):
        student, teacher = _synthetic_task(n_sent=60)
        raw = student.with_matrix(student.matrix, StageTag.RAW)
        with caplog.at_level("WARNING"):
            train_kd(raw, teacher, TrainConfig(steps=2, batch_size=8))
        assert "expected to run after PCA" in caplog.text
        assert "no improvement over the undistilled table" in caplog.text

    def test_out_of_vocab_sentences_dropped(self, caplog):
        student, teacher = _synthetic_task(n_sent=40)
        extra = TeacherBatchSource(
            teacher.sentences + (make_record("zebra quagga"),), np.vstack([teacher.vectors, np.ones((1, 8))])
        )
        with caplog.at_level("WARNING"):
            train_kd(student, extra, TrainConfig(steps=2, batch_size=8, val_fraction=0.0))
        assert "1 teacher sentences have no in-vocabulary token" in caplog.text

    def test_zero_mean_sentences_dropped(self, caplog):
        rng = np.random.default_rng(5)
        words = numbered_words(10)
        raw = make_table(words, dim=6, seed=2)
        raw = raw.with_matrix(np.vstack([raw.matrix[:9], np.zeros((1, 6))]))
        records = [make_record(" ".join(words[i] for i in rng.integers(0, 9, size=4))) for _ in range(20)]
        records.append(make_record(words[9]))
        teacher = TeacherBatchSource(tuple(records), rng.normal(size=(21, 5)))

        with caplog.at_level("WARNING"):
            trained, run = train_kd(raw, teacher, TrainConfig(steps=5, batch_size=20, val_fraction=0.0))

        assert "1 teacher sentences average to the zero vector" in caplog.text
        assert run.step == 5
        assert np.all(np.isfinite(trained.matrix))
        np.testing.assert_array_equal(trained.matrix[9], 0.0)


class TestTeacherFiles:
    def test_round_trip_float32(self, tmp_path, rng):
        x = rng.normal(size=(5, 3))
        write_sentence_embeddings(tmp_path / "t.swt", x)
        np.testing.assert_allclose(read_sentence_embeddings(tmp_path / "t.swt"), x.astype(np.float32), rtol=1e-7)

    def test_trailing_bytes(self, tmp_path):
        write_sentence_embeddings(tmp_path / "t.swt", np.ones((2, 2)))
        with open(tmp_path / "t.swt", "ab") as fh:
            fh.write(b"\x00")
        with pytest.raises(FormatError, match="trailing bytes"):
            read_sentence_embeddings(tmp_path / "t.swt")

    def test_count_mismatch(self, tmp_path):
        (tmp_path / "s.txt").write_text("one sentence\ntwo sentence\n", encoding="utf-8")
        write_sentence_embeddings(tmp_path / "t.swt", np.ones((3, 2)))
        with pytest.raises(DataError, match="3 vectors for 2 sentences"):
            load_teacher(tmp_path / "s.txt", tmp_path / "t.swt")

    def test_nonfinite_teacher(self):
        with pytest.raises(DataError, match="not finite"):
            TeacherBatchSource((make_record("a"),), np.array([[np.inf, 0.0]]))
