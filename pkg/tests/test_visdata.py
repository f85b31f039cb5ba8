"""Tests for relevance ranking, topic distances, projection, and export."""

from __future__ import annotations

import math

import numpy as np
import pytest

from parlascope.errors import ConfigError
from parlascope.lda import LdaConfig, train_lda
from parlascope.visdata import (
    VisData,
    build_term_stats,
    export_vis,
    jensen_shannon,
    load_visdata,
    project_2d,
    rank_exported_terms,
    rank_terms,
    relevance,
    save_visdata,
    topic_distances,
)

from synthetic import planted_corpus, random_corpus


def trained_fixture(seed: int = 7):
    matrix, vocabulary, _planted = planted_corpus(
        n_topics=3, docs_per_topic=15, doc_len=20, terms_per_topic=8, seed=seed
    )
    model = train_lda(
        matrix, LdaConfig(k=3, alpha=0.5, iterations=40, burn_in=10, seed=seed)
    )
    return model, vocabulary


class TestRelevance:
    def test_lambda_one_is_log_p_kw(self):
        assert relevance(0.1, 0.5, 1.0) == pytest.approx(math.log(0.1), abs=1e-12)

    def test_lambda_zero_with_unit_lift_is_zero(self):
        assert relevance(0.03, 0.03, 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_formula_point_value(self):
        assert relevance(0.04, 0.01, 0.6) == pytest.approx(-1.3768, abs=1e-4)

    def test_domain_errors(self):
        with pytest.raises(ConfigError):
            relevance(0.0, 0.1, 0.5)
        with pytest.raises(ConfigError):
            relevance(0.1, -0.1, 0.5)
        with pytest.raises(ConfigError):
            relevance(0.1, 0.1, 1.5)

    def test_strictly_increasing_in_p_kw(self):
        rng = np.random.default_rng(3)
        for lam in (0.2, 0.6, 1.0):
            p_w = 0.05
            values = np.sort(rng.uniform(1e-6, 1.0, size=50))
            scores = [relevance(float(p), p_w, lam) for p in values]
            assert all(a < b for a, b in zip(scores, scores[1:]))


class TestRankTerms:
    def test_lambda_one_matches_p_kw_order(self):
        model, vocabulary = trained_fixture()
        stats = build_term_stats(model, vocabulary)
        ranked = [t for t, _s in rank_terms(stats, 0, 1.0, len(vocabulary))]
        by_p_kw = sorted(
            vocabulary.terms,
            key=lambda t: (-stats.p_kw[0, vocabulary.index[t]], t),
        )
        assert ranked == by_p_kw

    def test_lambda_zero_matches_lift_order(self):
        model, vocabulary = trained_fixture()
        stats = build_term_stats(model, vocabulary)
        ranked = [t for t, _s in rank_terms(stats, 1, 0.0, len(vocabulary))]
        by_lift = sorted(
            vocabulary.terms,
            key=lambda t: (
                -stats.p_kw[1, vocabulary.index[t]] / stats.p_w[vocabulary.index[t]],
                t,
            ),
        )
        assert ranked == by_lift

    def test_tie_break_lexicographic(self):
        from parlascope.visdata import TermStats

        stats = TermStats(
            terms=("zeta", "alpha"),
            p_kw=np.array([[0.5, 0.5]]),
            p_w=np.array([0.5, 0.5]),
        )
        ranked = rank_terms(stats, 0, 0.6, 2)
        assert [t for t, _s in ranked] == ["alpha", "zeta"]

    def test_invalid_topic_index(self):
        model, vocabulary = trained_fixture()
        stats = build_term_stats(model, vocabulary)
        with pytest.raises(ConfigError):
            rank_terms(stats, 99, 0.6, 5)

    def test_ranking_invariant_to_log_base(self):
        model, vocabulary = trained_fixture()
        stats = build_term_stats(model, vocabulary)
        for topic in range(stats.k):
            natural = [t for t, _s in rank_terms(stats, topic, 0.4, 10)]
            base2 = sorted(
                vocabulary.terms,
                key=lambda t: (
                    -(
                        0.4 * math.log2(stats.p_kw[topic, vocabulary.index[t]])
                        + 0.6
                        * math.log2(
                            stats.p_kw[topic, vocabulary.index[t]]
                            / stats.p_w[vocabulary.index[t]]
                        )
                    ),
                    t,
                ),
            )[:10]
            assert natural == base2


class TestJensenShannon:
    def test_identical_rows_zero(self):
        p = np.array([0.2, 0.3, 0.5])
        assert jensen_shannon(p, p) == 0.0

    def test_disjoint_support_is_one(self):
        assert jensen_shannon(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == pytest.approx(1.0)

    def test_hand_computed_value(self):
        value = jensen_shannon(np.array([1.0, 0.0]), np.array([0.5, 0.5]))
        assert value == pytest.approx(0.311278, abs=1e-6)

    def test_properties_on_random_distributions(self):
        rng = np.random.default_rng(17)
        for _ in range(200):
            n = int(rng.integers(2, 12))
            p = rng.dirichlet(np.ones(n))
            q = rng.dirichlet(np.ones(n))
            d_pq = jensen_shannon(p, q)
            d_qp = jensen_shannon(q, p)
            assert d_pq == pytest.approx(d_qp, abs=1e-12)
            assert 0.0 <= d_pq <= 1.0
            assert jensen_shannon(p, p) == 0.0

    def test_distance_matrix_shape_and_diagonal(self):
        model, _vocabulary = trained_fixture()
        dist = topic_distances(model)
        assert dist.shape == (3, 3)
        assert np.array_equal(dist, dist.T)
        assert np.all(np.diag(dist) == 0.0)
        assert dist.min() >= 0.0 and dist.max() <= 1.0


class TestProject2d:
    def test_two_points_at_half_distance(self):
        coords = project_2d(np.array([[0.0, 0.8], [0.8, 0.0]]))
        xs = sorted(coords[:, 0])
        assert xs == pytest.approx([-0.4, 0.4], abs=1e-12)
        assert np.allclose(coords[:, 1], 0.0, atol=1e-12)

    def test_three_equidistant_points_form_equilateral_triangle(self):
        d = 0.6
        dist = np.full((3, 3), d)
        np.fill_diagonal(dist, 0.0)
        coords = project_2d(dist)
        for i in range(3):
            for j in range(i + 1, 3):
                assert np.linalg.norm(coords[i] - coords[j]) == pytest.approx(d, abs=1e-6)

    def test_zero_matrix_all_points_at_origin(self):
        coords = project_2d(np.zeros((4, 4)))
        assert np.allclose(coords, 0.0, atol=1e-12)

    def test_output_centered(self):
        model, _vocabulary = trained_fixture()
        coords = project_2d(topic_distances(model))
        assert np.allclose(coords.mean(axis=0), 0.0, atol=1e-9)

    def test_too_few_topics_rejected(self):
        with pytest.raises(ConfigError):
            project_2d(np.zeros((1, 1)))


class TestExport:
    def test_single_topic_proportion_one(self):
        matrix, vocabulary = random_corpus(n_docs=6, vocab_size=10, max_doc_len=15, seed=5)
        model = train_lda(matrix, LdaConfig(k=1, iterations=5, burn_in=0, seed=1))
        vis = export_vis(model, vocabulary)
        assert vis.k == 1
        assert vis.topics[0].proportion == pytest.approx(1.0, abs=1e-9)
        assert (vis.topics[0].x, vis.topics[0].y) == (0.0, 0.0)

    def test_proportions_sum_to_one(self):
        model, vocabulary = trained_fixture()
        vis = export_vis(model, vocabulary)
        assert sum(t.proportion for t in vis.topics) == pytest.approx(1.0, abs=1e-9)

    def test_term_table_consistent_size(self):
        model, vocabulary = trained_fixture()
        vis = export_vis(model, vocabulary, top_n=10)
        assert {len(t.terms) for t in vis.topics} == {10}

    def test_round_trip_preserves_numbers_exactly(self, tmp_path):
        model, vocabulary = trained_fixture()
        vis = export_vis(model, vocabulary)
        path = tmp_path / "vis.json"
        save_visdata(vis, path)
        loaded = load_visdata(path)
        assert loaded == vis
        for original, reread in zip(vis.topics, loaded.topics):
            assert abs(original.x - reread.x) <= 1e-12
            assert abs(original.proportion - reread.proportion) <= 1e-12

    def test_payload_schema_fields(self):
        model, vocabulary = trained_fixture()
        payload = export_vis(model, vocabulary).to_payload()
        assert set(payload) == {"k", "default_lambda", "topics", "corpus"}
        assert payload["default_lambda"] == 0.6
        assert set(payload["topics"][0]) == {"id", "x", "y", "proportion", "terms"}
        assert set(payload["topics"][0]["terms"][0]) == {"term", "p_kw", "p_w"}
        assert set(payload["corpus"]) == {"n_tokens"}

    def test_reranking_from_file_matches_rank_terms(self, tmp_path):
        model, vocabulary = trained_fixture()
        stats = build_term_stats(model, vocabulary)
        # export the full vocabulary so every ranking is recoverable
        vis = export_vis(model, vocabulary, top_n=len(vocabulary))
        path = tmp_path / "vis.json"
        save_visdata(vis, path)
        payload = load_visdata(path).to_payload()
        for lam in (0.0, 0.3, 0.6, 1.0):
            for topic in range(vis.k):
                from_file = rank_exported_terms(payload["topics"][topic]["terms"], lam, 10)
                direct = rank_terms(stats, topic, lam, 10)
                assert [t for t, _s in from_file] == [t for t, _s in direct]

    def test_vocabulary_mismatch_rejected(self):
        model, _vocabulary = trained_fixture()
        _matrix, other_vocab = random_corpus(n_docs=4, vocab_size=24, max_doc_len=10, seed=9)
        with pytest.raises(ConfigError):
            build_term_stats(model, other_vocab)


class TestVisDataModel:
    def test_from_payload_round_trip(self):
        model, vocabulary = trained_fixture()
        vis = export_vis(model, vocabulary)
        assert VisData.from_payload(vis.to_payload()) == vis
