from __future__ import annotations

import math

import numpy as np
import pytest

from c2fsum.baselines import pacsum_like
from c2fsum.core import (
    Document,
    EmbeddingError,
    EmbeddingMatrix,
    PipelineConfig,
    Segmentation,
)
from c2fsum.estimators import directed_centrality
from c2fsum.pipeline import (
    coarse_stage,
    derive_beta,
    facet_spread,
    fine_candidates,
    summarize,
)
from c2fsum.segmentation import segment

from conftest import basis, block_rows, make_doc


def ref_pipeline(rows, config, k):
    """Independent re-derivation of the whole chain with plain loops."""
    from test_segmentation import ref_chain

    n = len(rows)
    _, cuts = ref_chain([rows[i] for i in range(n)], config.window, config.smooth_window,
                        config.granularity)
    starts = [0] + [c + 1 for c in cuts]
    ends = list(cuts) + [n - 1]
    blocks = list(zip(starts, ends))
    m = len(blocks)
    reps = [rows[s : e + 1].mean(axis=0) for s, e in blocks]

    def centrality(vectors):
        out = []
        for i, vi in enumerate(vectors):
            before = sum(float(np.dot(vi, vectors[j])) for j in range(i))
            after = sum(float(np.dot(vi, vectors[j])) for j in range(i + 1, len(vectors)))
            out.append(config.prev_weight * before + config.next_weight * after)
        return out

    block_scores = centrality(reps)
    keep = max(1, min(m, math.ceil(config.keep_ratio * m - 1e-9)))
    kept = sorted(sorted(range(m), key=lambda b: (-block_scores[b], b))[:keep])
    beta = config.candidates_per_block or -(-n // m)
    candidates = []
    for b in kept:
        s, e = blocks[b]
        cos = []
        for i in range(s, e + 1):
            denom = np.linalg.norm(rows[i]) * np.linalg.norm(reps[b])
            cos.append(float(rows[i] @ reps[b] / denom) if denom > 0 else 0.0)
        order = sorted(range(s, e + 1), key=lambda i: (-cos[i - s], i))
        candidates.extend(sorted(order[: min(beta, e - s + 1)]))
    cand_scores = centrality([rows[i] for i in candidates])
    ranked = sorted(zip(candidates, cand_scores), key=lambda p: (-p[1], p[0]))
    return tuple(sorted(i for i, _ in ranked[: min(k, len(candidates))]))


class TestCoarseStage:
    def test_keep_half_of_four(self):
        rows = block_rows(8, [2, 2, 2, 2])
        seg = Segmentation.from_boundaries(8, [1, 3, 5])
        kept, _ = coarse_stage(EmbeddingMatrix(rows), seg, keep_ratio=0.5)
        assert len(kept) == 2

    def test_single_block_always_kept(self):
        rows = block_rows(4, [3])
        seg = Segmentation.from_boundaries(3, [])
        kept, _ = coarse_stage(EmbeddingMatrix(rows), seg, keep_ratio=0.01)
        assert kept == (0,)

    def test_ceil_of_three_halves(self):
        # Blocks 0 and 1 share a direction, block 2 is orthogonal, so the
        # brute-force ranking keeps blocks {0, 1} and ceil(1.5) = 2.
        rows = np.array([basis(8, 0)] * 2 + [basis(8, 0)] * 2 + [basis(8, 5)] * 2)
        seg = Segmentation.from_boundaries(6, [1, 3])
        kept, scores = coarse_stage(EmbeddingMatrix(rows), seg, keep_ratio=0.5)
        assert kept == (0, 1)
        assert scores.ids()[:2] == (0, 1)

    def test_kept_blocks_in_document_order(self):
        # Last block most central: reps e0, e1, (e0+e1)/2-ish mix.
        rows = np.array([basis(4, 0)] * 2 + [basis(4, 1)] * 2 + [basis(4, 0), basis(4, 1)])
        seg = Segmentation.from_boundaries(6, [1, 3])
        kept, _ = coarse_stage(EmbeddingMatrix(rows), seg, keep_ratio=0.5)
        assert list(kept) == sorted(kept)

    def test_float_fuzz_does_not_overcount(self):
        rows = block_rows(16, [1] * 10)
        seg = Segmentation.from_boundaries(10, list(range(9)))
        kept, _ = coarse_stage(EmbeddingMatrix(rows), seg, keep_ratio=0.1)
        assert len(kept) == 1


class TestDeriveBeta:
    @pytest.mark.parametrize(
        "n,cuts,expected",
        [
            (12, [2, 5, 8], 3),   # 12 sentences, 4 blocks
            (13, [2, 5, 8], 4),   # ceil(13 / 4)
            (7, [], 7),           # single block
        ],
    )
    def test_values(self, n, cuts, expected):
        assert derive_beta(Segmentation.from_boundaries(n, cuts)) == expected


class TestFineCandidates:
    def test_small_block_keeps_everything(self):
        rows = block_rows(4, [2])
        seg = Segmentation.from_boundaries(2, [])
        assert fine_candidates(EmbeddingMatrix(rows), seg, (0,), beta=5) == (0, 1)

    def test_ties_keep_earliest(self):
        rows = np.tile(basis(4, 1), (5, 1))
        seg = Segmentation.from_boundaries(5, [])
        assert fine_candidates(EmbeddingMatrix(rows), seg, (0,), beta=2) == (0, 1)

    def test_relevance_picks_majority_direction(self):
        rows = np.array([basis(4, 0), basis(4, 1), basis(4, 0)])
        seg = Segmentation.from_boundaries(3, [])
        assert fine_candidates(EmbeddingMatrix(rows), seg, (0,), beta=1) == (0,)

    def test_candidates_in_document_order(self):
        rows = np.vstack([block_rows(8, [3, 3])])
        seg = Segmentation.from_boundaries(6, [2])
        cands = fine_candidates(EmbeddingMatrix(rows), seg, (0, 1), beta=2)
        assert list(cands) == sorted(cands)


class TestSummarize:
    def test_two_block_fixture_matches_reference(self, two_block_doc):
        doc, rows = two_block_doc
        config = PipelineConfig(keep_ratio=1.0, k=2)
        result = summarize(doc, EmbeddingMatrix(rows), config)
        assert result.sentence_ids == ref_pipeline(rows, config, 2)
        # All candidates tie at score 3.0, so document order wins.
        assert result.sentence_ids == (0, 1)

    def test_all_sentences_when_k_exceeds_n(self):
        doc = make_doc("d", ["one", "two", "three"])
        rows = block_rows(8, [3])
        result = summarize(doc, EmbeddingMatrix(rows), PipelineConfig(k=5))
        assert result.sentence_ids == (0, 1, 2)

    def test_single_block_document(self):
        doc = make_doc("d", [f"s{i}" for i in range(5)])
        rows = np.array(
            [basis(4, 0), basis(4, 0), basis(4, 1), basis(4, 0), basis(4, 1)],
            dtype=float,
        )
        rows = rows / np.linalg.norm(rows, axis=1, keepdims=True)
        config = PipelineConfig(k=1, granularity=10.0)  # force one block
        result = summarize(doc, EmbeddingMatrix(rows), config)
        assert result.segmentation.m == 1
        assert result.sentence_ids == ref_pipeline(rows, config, 1)

    def test_mismatched_embeddings_rejected(self):
        doc = make_doc("d", ["a", "b"])
        with pytest.raises(EmbeddingError, match="match"):
            summarize(doc, EmbeddingMatrix(np.ones((3, 4))), PipelineConfig())

    def test_narrowing_property(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            n = int(rng.integers(2, 40))
            rows = rng.standard_normal((n, 8))
            rows /= np.linalg.norm(rows, axis=1, keepdims=True)
            doc = make_doc("d", [f"s{i}" for i in range(n)])
            config = PipelineConfig(
                keep_ratio=float(rng.uniform(0.2, 1.0)),
                k=int(rng.integers(1, 6)),
                granularity=float(rng.uniform(0, 2)),
            )
            result = summarize(doc, EmbeddingMatrix(rows), config)
            trace = result.trace
            kept_sentences = {
                i
                for b in trace.kept_blocks
                for i in result.segmentation.blocks[b].sentence_ids()
            }
            assert set(trace.candidates) <= kept_sentences
            assert set(result.sentence_ids) <= set(trace.candidates)
            assert len(result.sentence_ids) == min(config.k, len(trace.candidates))

    def test_matches_reference_pipeline_on_random_inputs(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            n = int(rng.integers(2, 30))
            rows = rng.standard_normal((n, 6))
            rows /= np.linalg.norm(rows, axis=1, keepdims=True)
            doc = make_doc("d", [f"s{i}" for i in range(n)])
            k = int(rng.integers(1, 5))
            if n <= k:
                continue
            config = PipelineConfig(
                keep_ratio=float(rng.uniform(0.3, 1.0)),
                granularity=float(rng.uniform(0, 1.5)),
                smooth_window=int(rng.integers(0, 3)),
                k=k,
            )
            result = summarize(doc, EmbeddingMatrix(rows), config)
            assert result.sentence_ids == ref_pipeline(rows, config, k)

    def test_reduction_to_full_centrality(self):
        rng = np.random.default_rng(23)
        for _ in range(25):
            n = int(rng.integers(2, 40))
            rows = rng.standard_normal((n, 8))
            rows /= np.linalg.norm(rows, axis=1, keepdims=True)
            doc = make_doc("d", [f"s{i}" for i in range(n)])
            k = int(rng.integers(1, 8))
            E = EmbeddingMatrix(rows)
            config = PipelineConfig(keep_ratio=1.0, candidates_per_block=n, k=k)
            assert summarize(doc, E, config).sentence_ids == pacsum_like(E, k).sentence_ids

    def test_deterministic(self, two_block_doc):
        doc, rows = two_block_doc
        config = PipelineConfig(k=3)
        first = summarize(doc, EmbeddingMatrix(rows), config)
        second = summarize(doc, EmbeddingMatrix(rows.copy()), config)
        assert first == second

    def test_work_bound_recorded(self):
        rng = np.random.default_rng(31)
        rows = rng.standard_normal((60, 8))
        rows /= np.linalg.norm(rows, axis=1, keepdims=True)
        doc = make_doc("d", [f"s{i}" for i in range(60)])
        config = PipelineConfig(k=5, keep_ratio=0.5)
        result = summarize(doc, EmbeddingMatrix(rows), config)
        seg, trace = result.segmentation, result.trace
        if seg.m >= 2:
            t_bound = math.ceil(0.5 * seg.m) * trace.beta_used
            t = len(trace.candidates)
            assert t <= t_bound
            assert trace.op_counts["fine_dots"] == t * (t - 1)
            assert trace.op_counts["fine_dots"] < 60 * 60


class TestFacetSpread:
    def test_two_sentences_two_blocks(self):
        seg = Segmentation.from_boundaries(8, [3])
        from c2fsum.core import SummaryResult

        assert facet_spread(SummaryResult(sentence_ids=(1, 5)), seg) == (2, 1.0)

    def test_all_in_one_block(self):
        seg = Segmentation.from_boundaries(8, [3])
        from c2fsum.core import SummaryResult

        count, ratio = facet_spread(SummaryResult(sentence_ids=(0, 1, 2)), seg)
        assert (count, ratio) == (1, 3.0)

    def test_empty_selection(self):
        seg = Segmentation.from_boundaries(4, [])
        from c2fsum.core import SummaryResult

        assert facet_spread(SummaryResult(sentence_ids=()), seg) == (0, 0.0)
