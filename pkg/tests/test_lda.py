"""Tests for the collapsed Gibbs sampler and its diagnostics."""

from __future__ import annotations

import math

import numpy as np
import pytest

from parlascope.errors import ConfigError
from parlascope.lda import (
    LdaConfig,
    load_model,
    log_likelihood,
    save_model,
    sweep_to_csv,
    sweep_topic_counts,
    train_lda,
)
from parlascope.preprocess import build_vocabulary, vectorize

from synthetic import greedy_match_topics, planted_corpus, random_corpus


def small_config(**kwargs) -> LdaConfig:
    defaults = dict(k=2, iterations=30, burn_in=10, seed=42)
    defaults.update(kwargs)
    return LdaConfig(**defaults)


class TestConfigValidation:
    def test_alpha_defaults_to_50_over_k(self):
        assert LdaConfig(k=10, iterations=5, burn_in=0).effective_alpha == 5.0

    def test_invalid_values_rejected(self):
        with pytest.raises(ConfigError):
            LdaConfig(k=0, iterations=5, burn_in=0)
        with pytest.raises(ConfigError):
            LdaConfig(k=2, iterations=5, burn_in=5)
        with pytest.raises(ConfigError):
            LdaConfig(k=2, iterations=5, burn_in=0, beta=0.0)


class TestTrain:
    def test_single_topic_degenerate_case(self):
        matrix, _vocab = random_corpus(n_docs=8, vocab_size=12, max_doc_len=20, seed=3)
        model = train_lda(matrix, small_config(k=1))
        assert np.allclose(model.theta, 1.0)
        freqs = np.asarray(matrix.term_frequencies(), dtype=float)
        beta = model.config.beta
        expected = (freqs + beta) / (freqs.sum() + len(freqs) * beta)
        assert np.allclose(model.phi[0], expected)

    def test_seed_determinism_bitwise(self):
        matrix, _vocab = random_corpus(n_docs=10, vocab_size=15, max_doc_len=25, seed=5)
        a = train_lda(matrix, small_config(k=3))
        b = train_lda(matrix, small_config(k=3))
        assert a.n_kw == b.n_kw
        assert a.n_dk == b.n_dk
        assert a.assignments == b.assignments
        assert np.array_equal(a.phi, b.phi)
        assert np.array_equal(a.theta, b.theta)

    def test_different_seed_differs(self):
        matrix, _vocab = random_corpus(n_docs=10, vocab_size=15, max_doc_len=25, seed=5)
        a = train_lda(matrix, small_config(k=3, seed=1))
        b = train_lda(matrix, small_config(k=3, seed=2))
        assert a.assignments != b.assignments

    def test_rows_are_distributions(self):
        matrix, _vocab = random_corpus(n_docs=12, vocab_size=20, max_doc_len=30, seed=9)
        model = train_lda(matrix, small_config(k=4))
        assert np.all(model.phi >= 0)
        assert np.all(model.theta >= 0)
        assert np.allclose(model.phi.sum(axis=1), 1.0, atol=1e-9)
        assert np.allclose(model.theta.sum(axis=1), 1.0, atol=1e-9)

    def test_count_invariants_every_sweep(self):
        matrix, _vocab = random_corpus(n_docs=20, vocab_size=25, max_doc_len=20, seed=13)
        config = small_config(k=3, iterations=25, check_invariants="every_sweep")
        model = train_lda(matrix, config)
        # one check after initialization plus one per sweep
        assert model.invariant_checks == config.iterations + 1
        model.check_count_invariants(matrix.term_frequencies())

    def test_final_state_invariants_always_checked(self):
        matrix, _vocab = random_corpus(n_docs=10, vocab_size=15, max_doc_len=15, seed=17)
        model = train_lda(matrix, small_config(k=2))
        assert model.invariant_checks == 2
        kw = np.asarray(model.n_kw)
        assert np.array_equal(kw.sum(axis=0), np.asarray(matrix.term_frequencies()))
        assert np.array_equal(kw.sum(axis=1), np.asarray(model.n_k))

    def test_planted_topics_recovered(self):
        matrix, _vocab, planted = planted_corpus(
            n_topics=3, docs_per_topic=40, doc_len=30, terms_per_topic=12, seed=101
        )
        config = LdaConfig(k=3, alpha=0.5, beta=0.01, iterations=80, burn_in=20, seed=7)
        model = train_lda(matrix, config)
        divergences = greedy_match_topics(model.phi, planted)
        assert max(divergences) < 0.1

    def test_empty_matrix_rejected(self):
        vocab = build_vocabulary([["a", "b"]])
        empty = vectorize([], vocab)
        with pytest.raises(ConfigError, match="empty"):
            train_lda(empty, small_config())

    def test_more_topics_than_terms_rejected(self):
        vocab = build_vocabulary([["a", "b"]])
        matrix = vectorize([["a", "b"]], vocab)
        with pytest.raises(ConfigError, match="more topics than terms"):
            train_lda(matrix, small_config(k=5))

    def test_empty_document_gets_uniform_theta(self):
        vocab = build_vocabulary([["a", "b", "c"]])
        matrix = vectorize([["a", "b", "c"], []], vocab, doc_ids=["d0", "d1"])
        model = train_lda(matrix, small_config(k=2))
        assert np.allclose(model.theta[1], 0.5)

    def test_document_order_does_not_change_per_document_results(self):
        matrix, _vocab = random_corpus(n_docs=12, vocab_size=18, max_doc_len=20, seed=21)
        reversed_matrix = type(matrix)(
            doc_ids=tuple(reversed(matrix.doc_ids)),
            rows=tuple(reversed(matrix.rows)),
            n_terms=matrix.n_terms,
            vocab_hash=matrix.vocab_hash,
        )
        a = train_lda(matrix, small_config(k=3))
        b = train_lda(reversed_matrix, small_config(k=3))
        assert np.array_equal(a.phi, b.phi)
        index_b = b.doc_index()
        for doc_id, row_a in zip(a.doc_ids, a.theta):
            assert np.array_equal(row_a, b.theta[index_b[doc_id]])


class TestLogLikelihood:
    def test_k1_equals_smoothed_unigram(self):
        matrix, _vocab = random_corpus(n_docs=8, vocab_size=10, max_doc_len=20, seed=31)
        model = train_lda(matrix, small_config(k=1))
        result = log_likelihood(model, matrix)
        freqs = np.asarray(matrix.term_frequencies(), dtype=float)
        beta = model.config.beta
        smoothed = (freqs + beta) / (freqs.sum() + len(freqs) * beta)
        expected = sum(
            f * math.log(p) for f, p in zip(matrix.term_frequencies(), smoothed)
        ) / sum(matrix.term_frequencies())
        assert result.per_token == pytest.approx(expected, abs=1e-12)
        assert result.n_oov == 0

    def test_uniform_model_scores_log_one_over_v(self):
        matrix, _vocab = random_corpus(n_docs=6, vocab_size=8, max_doc_len=15, seed=37)
        model = train_lda(matrix, small_config(k=2))
        v = matrix.n_terms
        model.phi = np.full((2, v), 1.0 / v)
        result = log_likelihood(model, matrix)
        assert result.per_token == pytest.approx(math.log(1.0 / v), abs=1e-12)

    def test_true_k_beats_k1_on_planted_corpus(self):
        matrix, _vocab, _planted = planted_corpus(
            n_topics=3, docs_per_topic=25, doc_len=25, terms_per_topic=10, seed=43
        )
        fitted = train_lda(
            matrix, LdaConfig(k=3, alpha=0.5, iterations=60, burn_in=20, seed=7)
        )
        flat = train_lda(matrix, LdaConfig(k=1, iterations=5, burn_in=0, seed=7))
        assert (
            log_likelihood(fitted, matrix).per_token
            > log_likelihood(flat, matrix).per_token
        )

    def test_unknown_document_rejected(self):
        vocab = build_vocabulary([["a", "b", "c"]])
        matrix = vectorize([["a", "b", "c"]], vocab, doc_ids=["d0"])
        model = train_lda(matrix, small_config(k=1))
        stranger = vectorize([["a"]], vocab, doc_ids=["ghost"])
        with pytest.raises(ConfigError, match="ghost"):
            log_likelihood(model, stranger)

    def test_oov_terms_excluded_and_counted(self):
        vocab = build_vocabulary([["a", "b", "c"]])
        matrix = vectorize([["a", "b", "c"]], vocab, doc_ids=["d0"])
        model = train_lda(matrix, small_config(k=1))
        wide = type(matrix)(
            doc_ids=("d0",),
            rows=(((0, 2), (3, 5)),),
            n_terms=4,
            vocab_hash="",
        )
        result = log_likelihood(model, wide)
        assert result.n_oov == 5
        assert result.n_tokens == 2


class TestSweep:
    def test_single_k_single_row(self):
        matrix, _vocab = random_corpus(n_docs=10, vocab_size=20, max_doc_len=15, seed=51)
        template = small_config(k=5, iterations=10, burn_in=2)
        models, rows = sweep_topic_counts(matrix, 5, 5, template)
        assert len(models) == 1 and len(rows) == 1
        assert rows[0].k == 5

    def test_full_range_has_eight_rows(self):
        matrix, _vocab = random_corpus(n_docs=25, vocab_size=30, max_doc_len=15, seed=53)
        template = small_config(k=5, iterations=8, burn_in=2)
        models, rows = sweep_topic_counts(matrix, 5, 12, template)
        assert [r.k for r in rows] == list(range(5, 13))
        assert len(models) == 8

    def test_distance_peaks_near_planted_k(self):
        matrix, _vocab, _planted = planted_corpus(
            n_topics=6, docs_per_topic=20, doc_len=25, terms_per_topic=8, seed=61
        )
        template = LdaConfig(k=5, alpha=0.5, iterations=60, burn_in=20, seed=11)
        _models, rows = sweep_topic_counts(matrix, 5, 8, template)
        best = max(rows, key=lambda r: r.mean_topic_distance)
        assert abs(best.k - 6) <= 1

    def test_csv_header(self):
        matrix, _vocab = random_corpus(n_docs=8, vocab_size=15, max_doc_len=10, seed=67)
        template = small_config(k=2, iterations=5, burn_in=1)
        _models, rows = sweep_topic_counts(matrix, 2, 3, template)
        lines = sweep_to_csv(rows).splitlines()
        assert lines[0] == "K,loglik_per_token,mean_topic_distance,seconds"
        assert len(lines) == 3


class TestPersistence:
    def test_round_trip(self, tmp_path):
        matrix, _vocab = random_corpus(n_docs=10, vocab_size=15, max_doc_len=20, seed=71)
        model = train_lda(matrix, small_config(k=3))
        path = tmp_path / "model.json"
        save_model(model, path, provenance={"seed": 42, "config_hash": "abc"})
        loaded = load_model(path)
        assert loaded.config == model.config
        assert loaded.n_kw == model.n_kw
        assert loaded.doc_ids == model.doc_ids
        assert np.allclose(loaded.phi, model.phi)
        assert np.allclose(loaded.theta, model.theta)

    def test_identical_runs_save_identical_bytes(self, tmp_path):
        matrix, _vocab = random_corpus(n_docs=10, vocab_size=15, max_doc_len=20, seed=73)
        p1, p2 = tmp_path / "m1.json", tmp_path / "m2.json"
        save_model(train_lda(matrix, small_config(k=3)), p1)
        save_model(train_lda(matrix, small_config(k=3)), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_averaged_estimates_round_trip(self, tmp_path):
        matrix, _vocab = random_corpus(n_docs=8, vocab_size=12, max_doc_len=15, seed=79)
        model = train_lda(matrix, small_config(k=2, average_estimates=True))
        assert np.allclose(model.theta.sum(axis=1), 1.0, atol=1e-9)
        path = tmp_path / "avg.json"
        save_model(model, path)
        loaded = load_model(path)
        assert np.array_equal(loaded.phi, model.phi)
        assert np.array_equal(loaded.theta, model.theta)
