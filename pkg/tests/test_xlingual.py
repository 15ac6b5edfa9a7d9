"""Bidirectional contrastive loss, its gradient, and toy cross-lingual refinement."""

import numpy as np
import pytest

from swekit.common.errors import DataError, UsageError
from swekit.domain.embed_core import bags_from_token_ids
from swekit.domain.encode import SentenceEncoder
from swekit.domain.train import TrainConfig, densify, merge_sparse
from swekit.domain.xlingual import (
    contrastive_grad,
    contrastive_loss,
    contrastive_loss_and_grad,
    make_parallel_corpus,
    pair_retrieval_accuracy,
    positive_probabilities,
    read_parallel_tsv,
    train_contrastive,
)
from swekit.reports.datasets import identity_retrieval_dataset
from swekit.reports.retrieval import retrieval_eval

from conftest import make_table, numbered_words


def _naive_contrastive(u, tau):
    k = u.shape[0]
    total = 0.0
    for i in range(k):
        row = sum(np.exp(u[i, j] / tau) for j in range(k))
        col = sum(np.exp(u[j, i] / tau) for j in range(k))
        total -= np.log(np.exp(u[i, i] / tau) / row) + np.log(np.exp(u[i, i] / tau) / col)
    return total / k


class TestContrastiveLoss:
    def test_hand_matrix_matches_double_loop(self):
        u = np.array([[0.9, 0.1, -0.3], [0.2, 0.7, 0.4], [0.0, 0.5, 0.8]])
        for tau in (0.05, 0.5):
            assert contrastive_loss(u, tau) == pytest.approx(_naive_contrastive(u, tau), abs=1e-12)

    def test_symmetric_in_direction(self, rng):
        for _ in range(20):
            u = np.clip(rng.normal(scale=0.4, size=(5, 5)), -1, 1)
            assert contrastive_loss(u) == pytest.approx(contrastive_loss(u.T), abs=1e-12)

    def test_single_pair_is_zero(self):
        assert contrastive_loss(np.array([[0.3]])) == 0.0

    def test_positive_probabilities(self):
        u = np.eye(3)
        p = positive_probabilities(u, 1.0)
        np.testing.assert_allclose(p, np.e / (np.e + 2.0))

    def test_bad_inputs(self):
        with pytest.raises(UsageError):
            contrastive_loss(np.ones((2, 3)))
        with pytest.raises(UsageError):
            contrastive_loss(np.eye(2), tau=-1.0)


class TestContrastiveGradient:
    @pytest.mark.parametrize("seed", range(10))
    def test_shared_table_matches_central_differences(self, seed):
        rng = np.random.default_rng(seed)
        k = int(rng.integers(2, 7))
        d = int(rng.integers(3, 10))
        n_words = 10
        matrix = rng.normal(size=(n_words, d))
        src = bags_from_token_ids([rng.integers(0, 5, size=int(rng.integers(1, 4))) for _ in range(k)])
        tgt = bags_from_token_ids([rng.integers(5, 10, size=int(rng.integers(1, 4))) for _ in range(k)])
        tau = 0.05

        gs, gt = contrastive_grad(src, tgt, matrix, tau=tau)
        g = densify(*merge_sparse(gs, gt), matrix.shape)

        def loss(m):
            return contrastive_loss_and_grad(src, tgt, m, m, tau)[0]

        h = 1e-5
        fd = np.zeros_like(matrix)
        for i in range(n_words):
            for j in range(d):
                plus, minus = matrix.copy(), matrix.copy()
                plus[i, j] += h
                minus[i, j] -= h
                fd[i, j] = (loss(plus) - loss(minus)) / (2 * h)
        np.testing.assert_allclose(g, fd, rtol=1e-4, atol=1e-5)

    def test_separate_tables(self, rng):
        a, b = rng.normal(size=(4, 3)), rng.normal(size=(4, 3))
        src = bags_from_token_ids([[0], [1, 2], [3]])
        tgt = bags_from_token_ids([[1], [0], [2, 3]])
        (rs, _), (rt, _) = contrastive_grad(src, tgt, a, b)
        np.testing.assert_array_equal(rs, [0, 1, 2, 3])
        np.testing.assert_array_equal(rt, [0, 1, 2, 3])


def _toy_pairs(n_pairs=64, n_words=40, seed=0):
    rng = np.random.default_rng(seed)
    seen, pairs = set(), []
    while len(pairs) < n_pairs:
        ids = tuple(sorted(rng.choice(n_words, size=4, replace=False)))
        if ids in seen:
            continue
        seen.add(ids)
        order = rng.permutation(4)
        pairs.append((" ".join(f"s{ids[i]}" for i in order), " ".join(f"t{ids[i]}" for i in rng.permutation(4))))
    return pairs


class TestTrainContrastive:
    def test_toy_pairs_are_retrieved_perfectly(self):
        pairs = _toy_pairs()
        corpus = make_parallel_corpus(pairs, None, None)
        table = make_table(numbered_words(40, "s") + numbered_words(40, "t"), dim=16, seed=3)
        assert pair_retrieval_accuracy(table, corpus) < 0.5

        cfg = TrainConfig(lr=0.01, steps=2000, batch_size=16, tau=0.05, val_fraction=0.0)
        trained, run = train_contrastive(table, corpus, cfg)

        assert run.step == 2000
        assert pair_retrieval_accuracy(trained, corpus) == 1.0
        enc = SentenceEncoder(trained)
        scores = retrieval_eval(
            identity_retrieval_dataset([s for s, _ in pairs], [t for _, t in pairs]),
            lambda xs: enc.encode_batch(xs).vectors,
            lambda xs: enc.encode_batch(xs).vectors,
        )
        assert scores.f1 == 1.0

    def test_corpus_smaller_than_batch(self):
        corpus = make_parallel_corpus(_toy_pairs(n_pairs=4), None, None)
        table = make_table(numbered_words(40, "s") + numbered_words(40, "t"))
        with pytest.raises(DataError, match="smaller than one batch"):
            train_contrastive(table, corpus, TrainConfig(batch_size=8))

    def test_zero_mean_sides_dropped(self, caplog):
        pairs = _toy_pairs(n_pairs=16, n_words=39) + [("s39", "t0 t1")]
        corpus = make_parallel_corpus(pairs, None, None)
        table = make_table(numbered_words(40, "s") + numbered_words(40, "t"), dim=8, seed=4)
        m = table.matrix.copy()
        m[39] = 0.0
        table = table.with_matrix(m)

        with caplog.at_level("WARNING"):
            trained, run = train_contrastive(table, corpus, TrainConfig(steps=5, batch_size=16, val_fraction=0.0))

        assert "1 pair sides average to the zero vector" in caplog.text
        assert "1 pairs have a side" in caplog.text
        assert run.step == 5
        np.testing.assert_array_equal(trained.matrix[39], 0.0)
        assert 0.0 <= pair_retrieval_accuracy(trained, corpus) <= 1.0

    def test_loss_decreases_with_validation(self):
        corpus = make_parallel_corpus(_toy_pairs(n_pairs=60, seed=1), None, None)
        table = make_table(numbered_words(40, "s") + numbered_words(40, "t"), dim=8, seed=2)
        cfg = TrainConfig(lr=0.01, steps=300, batch_size=8, val_fraction=0.2, val_every=50, patience=20)
        _, run = train_contrastive(table, corpus, cfg)
        assert run.val_history[-1][1] < run.val_history[0][1]
        assert run.best_val == min(v for _, v in run.val_history)


class TestParallelCorpus:
    def test_tsv_drops_empty_sides(self, tmp_path, caplog):
        p = tmp_path / "pairs.tsv"
        p.write_text("the house\tdas Haus\nhello\t\n...\tnichts\ntree\tBaum\n", encoding="utf-8")
        with caplog.at_level("WARNING"):
            corpus = read_parallel_tsv(p, "en", "de")
        assert len(corpus) == 2
        assert corpus.dropped == 2
        assert corpus.targets[0].tokens == ("das", "haus")
        assert corpus.sources[1].language == "en"
        assert "dropped 2 translation pairs" in caplog.text

    def test_missing_tab(self, tmp_path):
        p = tmp_path / "pairs.tsv"
        p.write_text("a\tb\nno tab here\n", encoding="utf-8")
        with pytest.raises(DataError, match="source<TAB>target"):
            read_parallel_tsv(p, None, None)
