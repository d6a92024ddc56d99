"""Scoring primitives shared by the coarse and fine stages.

Directed centrality uses raw dot products and position-dependent weights;
relevance uses cosine similarity against a block representation. Both are
pure functions and safe for concurrent use.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import EmbeddingMatrix, RankedItems, SemanticBlock


def _rows(E: EmbeddingMatrix | np.ndarray) -> np.ndarray:
    return E.vectors if isinstance(E, EmbeddingMatrix) else np.asarray(E, dtype=np.float64)


def block_representation(E: EmbeddingMatrix | np.ndarray, block: SemanticBlock) -> np.ndarray:
    """Arithmetic mean of the block's sentence vectors."""
    rows = _rows(E)
    if block.end >= rows.shape[0]:
        raise ValueError(
            f"block [{block.start}, {block.end}] out of range for {rows.shape[0]} rows"
        )
    return rows[block.start : block.end + 1].mean(axis=0)


def directed_centrality(
    vectors: np.ndarray | Sequence[np.ndarray],
    prev_weight: float = 1.0,
    next_weight: float = 1.0,
) -> np.ndarray:
    """Position-weighted sum of pairwise dot products, self term excluded.

    score[i] = prev_weight * sum_{j<i} v_i . v_j
             + next_weight * sum_{j>i} v_i . v_j

    The dot products are unnormalized, so positively scaling all vectors by c
    scales every score by c**2 without changing the ranking.
    """
    rows = np.asarray(vectors, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] == 0:
        raise ValueError("directed centrality needs a non-empty list of vectors")
    gram = rows @ rows.T
    csum = np.cumsum(gram, axis=1)
    diag_idx = np.arange(rows.shape[0])
    inclusive = csum[diag_idx, diag_idx]
    prev_sums = inclusive - np.diagonal(gram)
    next_sums = csum[:, -1] - inclusive
    return prev_weight * prev_sums + next_weight * next_sums


def relevance_scores(
    E: EmbeddingMatrix | np.ndarray, block: SemanticBlock, representation: np.ndarray
) -> RankedItems:
    """Cosine relevance of each block sentence to the block representation.

    Returned ids are absolute sentence ids, ranked by descending relevance
    with ties broken by document position. A zero-norm vector on either side
    scores 0 to keep the operation total.
    """
    rows = _rows(E)[block.start : block.end + 1]
    rep_norm = float(np.linalg.norm(representation))
    num = rows @ np.asarray(representation, dtype=np.float64)
    den = np.linalg.norm(rows, axis=1) * rep_norm
    scores = np.zeros(rows.shape[0])
    np.divide(num, den, out=scores, where=den > 0.0)
    return RankedItems.from_scores(scores, ids=range(block.start, block.end + 1))


def rank_desc(scores: Sequence[float], ids: Sequence[int] | None = None) -> RankedItems:
    """Descending stable ranking; ties resolve to the smaller id."""
    return RankedItems.from_scores(scores, ids)


__all__ = [
    "block_representation",
    "directed_centrality",
    "rank_desc",
    "relevance_scores",
]
