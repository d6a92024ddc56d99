from __future__ import annotations

import itertools

import numpy as np
import pytest

from c2fsum.baselines import (
    embedding_weights,
    exhaustive_oracle,
    lead,
    oracle,
    pacsum_like,
    textrank,
    tfidf_weights,
)
from c2fsum.core import EmbeddingMatrix, EngineError
from c2fsum.rouge import rouge_n

from conftest import basis, make_doc


def ref_pagerank(weights, damping=0.85, iters=500):
    """Independent dense power iteration used as the graph-ranking oracle."""
    n = weights.shape[0]
    x = np.full(n, 1.0 / n)
    for _ in range(iters):
        nxt = np.full(n, (1.0 - damping) / n)
        for j in range(n):
            degree = weights[j].sum()
            if degree > 0:
                for i in range(n):
                    nxt[i] += damping * x[j] * weights[j, i] / degree
            else:
                nxt += damping * x[j] / n
        x = nxt
    return x


class TestLead:
    def test_first_k(self):
        doc = make_doc("d", [f"s{i}" for i in range(10)])
        assert lead(doc, 3).sentence_ids == (0, 1, 2)

    def test_truncates(self):
        doc = make_doc("d", ["a", "b"])
        assert lead(doc, 5).sentence_ids == (0, 1)

    def test_k_one(self):
        doc = make_doc("d", ["a", "b"])
        assert lead(doc, 1).sentence_ids == (0,)

    def test_k_validation(self):
        with pytest.raises(ValueError):
            lead(make_doc("d", ["a"]), 0)


class TestPacsumLike:
    def test_identical_vectors_pick_leading_sentences(self):
        E = EmbeddingMatrix(np.tile(basis(4, 0), (5, 1)))
        assert pacsum_like(E, 3).sentence_ids == (0, 1, 2)

    def test_majority_direction_wins(self):
        E = EmbeddingMatrix(np.array([basis(4, 0), basis(4, 0), basis(4, 1)]))
        assert pacsum_like(E, 1).sentence_ids == (0,)

    def test_k_capped_at_n(self):
        E = EmbeddingMatrix(np.eye(3))
        assert pacsum_like(E, 10).sentence_ids == (0, 1, 2)


class TestTextrank:
    def test_two_identical_sentences(self):
        weights = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert textrank(weights, 1).sentence_ids == (0,)

    def test_star_graph_center_ranks_first(self):
        weights = np.zeros((4, 4))
        weights[0, 1:] = 1.0
        weights[1:, 0] = 1.0
        result = textrank(weights, 1)
        assert result.sentence_ids == (0,)
        # Cross-check stationary scores against the independent oracle.
        from c2fsum.estimators import rank_desc

        want = ref_pagerank(weights)
        assert rank_desc(want).ids()[0] == 0

    def test_disconnected_graph_uniform_scores(self):
        weights = np.zeros((5, 5))
        assert textrank(weights, 2).sentence_ids == (0, 1)

    def test_scores_form_distribution_and_match_reference(self):
        from c2fsum.baselines import pagerank_scores
        from c2fsum.estimators import rank_desc

        rng = np.random.default_rng(2)
        raw = rng.uniform(0, 1, size=(8, 8))
        weights = (raw + raw.T) / 2
        np.fill_diagonal(weights, 0.0)
        got = pagerank_scores(weights)
        want = ref_pagerank(weights)
        assert abs(got.sum() - 1.0) < 1e-6
        np.testing.assert_allclose(got, want, atol=1e-5)
        assert textrank(weights, 3).sentence_ids == tuple(sorted(rank_desc(want).ids()[:3]))

    @pytest.mark.parametrize(
        "weights,message",
        [
            (np.array([[0.0, 1.0], [0.5, 0.0]]), "symmetric"),
            (np.array([[0.5, 1.0], [1.0, 0.0]]), "diagonal"),
            (np.array([[0.0, -1.0], [-1.0, 0.0]]), "non-negative"),
        ],
    )
    def test_weight_validation(self, weights, message):
        with pytest.raises(ValueError, match=message):
            textrank(weights, 1)

    def test_damping_validation(self):
        with pytest.raises(ValueError):
            textrank(np.zeros((2, 2)), 1, damping=1.0)


class TestWeightBuilders:
    def test_tfidf_symmetric_zero_diagonal(self):
        doc = make_doc("d", ["the cat sat", "the dog ran", "cats and dogs"])
        weights = tfidf_weights(doc)
        assert np.allclose(weights, weights.T)
        assert np.all(np.diagonal(weights) == 0.0)
        assert np.all(weights >= -1e-12)

    def test_tfidf_shared_rare_token_links_sentences(self):
        doc = make_doc("d", ["unique zebra here", "zebra again today", "nothing shared"])
        weights = tfidf_weights(doc)
        assert weights[0, 1] > weights[0, 2]

    def test_embedding_weights_clamped(self):
        rows = np.array([basis(4, 0), -basis(4, 0), basis(4, 1)])
        weights = embedding_weights(EmbeddingMatrix(rows))
        assert np.all(weights >= 0.0)
        assert weights[0, 1] == 0.0  # cosine -1 clamps to 0


class TestOracle:
    def test_exact_match_single_sentence(self):
        doc = make_doc(
            "d",
            ["alpha beta", "gamma delta", "epsilon zeta eta", "theta iota"],
            reference=["epsilon zeta eta"],
        )
        assert oracle(doc, 1).sentence_ids == (2,)

    def test_matches_exhaustive_on_pairs(self):
        doc = make_doc(
            "d",
            [
                "the cat sat on the mat",
                "dogs bark loudly at night",
                "the mat was red",
                "birds fly south in winter",
            ],
            reference=["the cat sat on the red mat", "dogs bark at night"],
        )
        greedy = oracle(doc, 2)
        best = exhaustive_oracle(doc, 2)
        assert set(greedy.sentence_ids) == set(best.sentence_ids)

    def test_empty_reference_selects_nothing(self):
        doc = make_doc("d", ["alpha beta", "gamma"], reference=["..."])
        assert oracle(doc, 2).sentence_ids == ()

    def test_missing_reference_rejected(self):
        with pytest.raises(EngineError, match="reference"):
            oracle(make_doc("d", ["a"]), 1)

    def test_monotone_in_k(self):
        doc = make_doc(
            "d",
            ["aa bb", "cc dd", "ee ff", "gg hh", "aa cc ee"],
            reference=["aa bb cc dd ee"],
        )

        def score(ids):
            cand = [doc.sentences[i].tokens for i in ids]
            return (rouge_n(cand, doc.reference, 1).f1 + rouge_n(cand, doc.reference, 2).f1) / 2

        scores = [score(oracle(doc, k).sentence_ids) for k in range(1, 5)]
        assert all(b >= a - 1e-12 for a, b in zip(scores, scores[1:]))

    def test_exhaustive_guard(self):
        doc = make_doc("d", [f"s{i}" for i in range(13)], reference=["s1"])
        with pytest.raises(ValueError, match="n <= 12"):
            exhaustive_oracle(doc, 2)

    def test_exhaustive_considers_smaller_subsets(self):
        # Adding any second sentence hurts precision, so the optimum is size 1.
        doc = make_doc(
            "d",
            ["perfect match here", "totally unrelated words", "more noise tokens"],
            reference=["perfect match here"],
        )
        assert exhaustive_oracle(doc, 2).sentence_ids == (0,)
        assert oracle(doc, 2).sentence_ids == (0,)
