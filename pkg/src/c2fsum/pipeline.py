"""Two-stage coarse-to-fine extraction pipeline.

Coarse stage: segment the document into facet blocks, score blocks with
directed centrality, keep the top fraction. Fine stage: pick the most
block-relevant sentences per kept block, score that candidate pool with
directed centrality, and emit the top k in document order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    Document,
    EmbeddingError,
    EmbeddingMatrix,
    PipelineConfig,
    RankedItems,
    Segmentation,
    SummaryResult,
)
from .estimators import directed_centrality
from .segmentation import segment_boundaries


@dataclass(frozen=True, slots=True)
class StageTrace:
    """Per-stage diagnostics attached to a pipeline summary.

    op_counts tracks the pairwise dot products and cosine evaluations each
    stage performed, for the benchmark harness:

        gap_cosines        cosine evaluations during segmentation (n - 1)
        coarse_dots        ordered-pair dot products among block vectors
        relevance_cosines  sentence-to-block cosine evaluations (kept blocks
                           at or under the quota are taken whole, unscored)
        fine_dots          ordered-pair dot products among candidates
    """

    block_scores: RankedItems
    kept_blocks: tuple[int, ...]
    beta_used: int
    candidates: tuple[int, ...]
    candidate_scores: RankedItems
    op_counts: dict[str, int]


def _block_means(rows: np.ndarray, seg: Segmentation) -> np.ndarray:
    """Mean vector per block, batching runs of equal-sized blocks.

    A run of consecutive same-size blocks reduces with one reshape + sum,
    which matters for near-uniform segmentations of long documents.
    """
    reps = np.empty((seg.m, rows.shape[1]))
    sizes = np.fromiter((b.size for b in seg.blocks), dtype=np.float64, count=seg.m)
    j = 0
    while j < seg.m:
        size = seg.blocks[j].size
        end = j
        while end + 1 < seg.m and seg.blocks[end + 1].size == size:
            end += 1
        count = end - j + 1
        chunk = rows[seg.blocks[j].start : seg.blocks[end].end + 1]
        if count == 1:
            np.sum(chunk, axis=0, out=reps[j])
        else:
            np.sum(chunk.reshape(count, size, rows.shape[1]), axis=1, out=reps[j : end + 1])
        j = end + 1
    reps /= sizes[:, None]
    return reps


def coarse_stage(
    E: EmbeddingMatrix,
    seg: Segmentation,
    keep_ratio: float = 0.5,
    prev_weight: float = 1.0,
    next_weight: float = 1.0,
) -> tuple[tuple[int, ...], RankedItems]:
    """Score blocks by directed centrality and keep the top ceil(ratio * m).

    At least one block is always kept; the kept block ids are returned in
    document order for downstream position-aware scoring.
    """
    if not 0.0 < keep_ratio <= 1.0:
        raise ValueError("keep_ratio must be in (0, 1]")
    rows = E.vectors if isinstance(E, EmbeddingMatrix) else np.asarray(E, dtype=np.float64)
    reps = _block_means(rows, seg)
    scores = directed_centrality(reps, prev_weight, next_weight)
    ranked = RankedItems.from_scores(scores)
    # Small epsilon guards float artifacts like 0.1 * 10 landing above 1.0.
    count = max(1, min(seg.m, math.ceil(keep_ratio * seg.m - 1e-9)))
    kept = tuple(sorted(ranked.top(count)))
    return kept, ranked


def derive_beta(seg: Segmentation) -> int:
    """Per-block candidate quota: ceil(n / m) over the unfiltered segmentation."""
    return -(-seg.n // seg.m)


def fine_candidates(
    E: EmbeddingMatrix,
    seg: Segmentation,
    kept_blocks: tuple[int, ...],
    beta: int,
) -> tuple[int, ...]:
    """Top ``beta`` block-relevant sentences per kept block, in document order.

    Blocks smaller than ``beta`` contribute all of their sentences.
    """
    if beta < 1:
        raise ValueError("beta must be >= 1")
    rows = E.vectors if isinstance(E, EmbeddingMatrix) else np.asarray(E, dtype=np.float64)
    candidates: list[int] = []
    for block_id in kept_blocks:
        block = seg.blocks[block_id]
        take = min(beta, block.size)
        if take == block.size:
            candidates.extend(block.sentence_ids())
            continue
        block_rows = rows[block.start : block.end + 1]
        rep = block_rows.mean(axis=0)
        den = np.linalg.norm(block_rows, axis=1) * np.linalg.norm(rep)
        cos = np.zeros(block.size)
        np.divide(block_rows @ rep, den, out=cos, where=den > 0.0)
        # Stable argsort on -cos == rank by (-score, position), the shared
        # tie rule of relevance_scores.
        order = np.argsort(-cos, kind="stable")[:take]
        candidates.extend(sorted(block.start + int(i) for i in order))
    return tuple(candidates)


def summarize(doc: Document, E: EmbeddingMatrix, config: PipelineConfig) -> SummaryResult:
    """Run the full coarse-to-fine chain and return top-k sentences in order.

    When the document has no more than k sentences the whole document is the
    summary (the pipeline degenerates to keep-everything parameters).
    """
    if E.n != doc.n:
        raise EmbeddingError(
            f"embedding rows ({E.n}) do not match document {doc.id!r} "
            f"sentence count ({doc.n})"
        )
    seg = segment_boundaries(E, config)

    whole_doc = doc.n <= config.k
    keep_ratio = 1.0 if whole_doc else config.keep_ratio
    if whole_doc:
        beta = doc.n
    elif config.candidates_per_block is not None:
        beta = config.candidates_per_block
    else:
        beta = derive_beta(seg)

    kept, block_scores = coarse_stage(E, seg, keep_ratio, config.prev_weight, config.next_weight)
    candidates = fine_candidates(E, seg, kept, beta)
    candidate_rows = E.vectors[np.fromiter(candidates, dtype=np.intp, count=len(candidates))]
    scores = directed_centrality(candidate_rows, config.prev_weight, config.next_weight)
    ranked = RankedItems.from_scores(scores, ids=candidates)
    selected = tuple(sorted(ranked.top(min(config.k, len(candidates)))))

    t = len(candidates)
    trace = StageTrace(
        block_scores=block_scores,
        kept_blocks=kept,
        beta_used=beta,
        candidates=candidates,
        candidate_scores=ranked,
        op_counts={
            "gap_cosines": max(doc.n - 1, 0),
            "coarse_dots": seg.m * (seg.m - 1),
            "relevance_cosines": sum(
                seg.blocks[b].size for b in kept if seg.blocks[b].size > beta
            ),
            "fine_dots": t * (t - 1),
        },
    )
    return SummaryResult(sentence_ids=selected, segmentation=seg, trace=trace)


def facet_spread(result: SummaryResult, seg: Segmentation) -> tuple[int, float]:
    """Distinct blocks holding selected sentences, and sentences per block."""
    if not result.sentence_ids:
        return 0, 0.0
    facets = {seg.block_of(i) for i in result.sentence_ids}
    return len(facets), len(result.sentence_ids) / len(facets)


__all__ = [
    "StageTrace",
    "coarse_stage",
    "derive_beta",
    "facet_spread",
    "fine_candidates",
    "summarize",
]
