from __future__ import annotations

import numpy as np
import pytest

from c2fsum.synthetic import planted_boundaries, synthetic_corpus, synthetic_document


class TestPlantedBoundaries:
    def test_gap_indices(self):
        assert planted_boundaries([4, 4]) == (3,)
        assert planted_boundaries([2, 3, 5]) == (1, 4)
        assert planted_boundaries([7]) == ()


class TestSyntheticDocument:
    def test_shapes_and_norms(self):
        rng = np.random.default_rng(0)
        doc, rows = synthetic_document("d", [3, 5], dim=8, noise=0.1, rng=rng)
        assert doc.n == 8
        assert rows.shape == (8, 8)
        np.testing.assert_allclose(np.linalg.norm(rows, axis=1), 1.0, atol=1e-12)

    def test_noiseless_rows_are_basis_vectors(self):
        rng = np.random.default_rng(0)
        _, rows = synthetic_document("d", [2, 2], dim=4, noise=0.0, rng=rng)
        np.testing.assert_array_equal(rows[0], [1, 0, 0, 0])
        np.testing.assert_array_equal(rows[3], [0, 1, 0, 0])

    def test_dim_must_cover_blocks(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError, match="dim"):
            synthetic_document("d", [2, 2, 2], dim=2, noise=0.0, rng=rng)


class TestSyntheticCorpus:
    def test_same_seed_identical(self):
        a_docs, a_rows, a_truth = synthetic_corpus(5, (2, 4), (3, 6), 16, 0.05, seed=42)
        b_docs, b_rows, b_truth = synthetic_corpus(5, (2, 4), (3, 6), 16, 0.05, seed=42)
        assert [d.id for d in a_docs] == [d.id for d in b_docs]
        assert a_truth == b_truth
        for doc in a_docs:
            np.testing.assert_array_equal(a_rows[doc.id], b_rows[doc.id])

    def test_different_seed_differs(self):
        _, a_rows, _ = synthetic_corpus(2, (2, 4), (3, 6), 16, 0.1, seed=1)
        _, b_rows, _ = synthetic_corpus(2, (2, 4), (3, 6), 16, 0.1, seed=2)
        assert any(
            not np.array_equal(a_rows[k], b_rows[k]) for k in a_rows
        )

    def test_fixed_specs(self):
        docs, rows, truth = synthetic_corpus(3, 2, 4, 8, 0.0, seed=0)
        for doc in docs:
            assert doc.n == 8
            assert truth[doc.id] == (3,)
