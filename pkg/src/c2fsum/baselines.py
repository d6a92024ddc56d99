"""Reference summarizers: lead, full-sentence directed centrality, graph
ranking over a sentence-similarity matrix, and a greedy reference-maximizing
oracle."""

from __future__ import annotations

import itertools
import math
from collections import Counter

import numpy as np

from .core import Document, EmbeddingMatrix, EngineError, RankedItems, SummaryResult
from .estimators import directed_centrality
from .rouge import rouge_n

PAGERANK_DAMPING = 0.85
PAGERANK_TOL = 1e-6
PAGERANK_MAX_ITERS = 100


def lead(doc: Document, k: int) -> SummaryResult:
    """The first min(k, n) sentences."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return SummaryResult(sentence_ids=tuple(range(min(k, doc.n))))


def pacsum_like(
    E: EmbeddingMatrix,
    k: int,
    prev_weight: float = 1.0,
    next_weight: float = 1.0,
) -> SummaryResult:
    """Directed centrality over every sentence, top-k in document order."""
    if k < 1:
        raise ValueError("k must be >= 1")
    scores = directed_centrality(E.vectors, prev_weight, next_weight)
    ranked = RankedItems.from_scores(scores)
    return SummaryResult(sentence_ids=tuple(sorted(ranked.top(min(k, E.n)))))


def tfidf_weights(doc: Document) -> np.ndarray:
    """Symmetric TF-IDF cosine similarity matrix with a zero diagonal.

    idf = ln(n / df) over sentences; sentences with no tokens (or only
    zero-idf tokens) get zero similarity to everything.
    """
    n = doc.n
    df: Counter = Counter()
    for sent in doc.sentences:
        df.update(set(sent.tokens))
    vocab = {tok: i for i, tok in enumerate(sorted(df))}
    idf = np.zeros(len(vocab))
    for tok, i in vocab.items():
        idf[i] = math.log(n / df[tok])
    rows = np.zeros((n, len(vocab)))
    for i, sent in enumerate(doc.sentences):
        for tok, count in Counter(sent.tokens).items():
            rows[i, vocab[tok]] = count * idf[vocab[tok]]
    return _cosine_weights(rows)


def embedding_weights(E: EmbeddingMatrix) -> np.ndarray:
    """Symmetric embedding-cosine matrix, negatives clamped to 0, zero diagonal."""
    return np.maximum(_cosine_weights(E.vectors), 0.0)


def _cosine_weights(rows: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(rows, axis=1)
    safe = np.where(norms > 0.0, norms, 1.0)
    unit = rows / safe[:, None]
    unit[norms == 0.0] = 0.0
    weights = unit @ unit.T
    np.fill_diagonal(weights, 0.0)
    return weights


def pagerank_scores(weights: np.ndarray, damping: float = PAGERANK_DAMPING) -> np.ndarray:
    """Stationary scores of the damped walk on a symmetric similarity graph.

    Rows are normalized by degree; zero-degree rows teleport uniformly, so an
    edgeless graph yields uniform scores. Iteration stops when the L1 change
    drops below 1e-6 or after 100 rounds. The result sums to 1.
    """
    W = np.asarray(weights, dtype=np.float64)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError("weight matrix must be square")
    if np.any(W < 0.0):
        raise ValueError("weight matrix must be non-negative")
    if np.any(np.diagonal(W) != 0.0):
        raise ValueError("weight matrix must have a zero diagonal")
    if not np.allclose(W, W.T):
        raise ValueError("weight matrix must be symmetric")
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must be in (0, 1)")
    n = W.shape[0]
    degrees = W.sum(axis=1)
    P = np.full((n, n), 1.0 / n)
    nonzero = degrees > 0.0
    P[nonzero] = W[nonzero] / degrees[nonzero, None]
    scores = np.full(n, 1.0 / n)
    teleport = (1.0 - damping) / n
    for _ in range(PAGERANK_MAX_ITERS):
        updated = teleport + damping * (P.T @ scores)
        if np.abs(updated - scores).sum() < PAGERANK_TOL:
            scores = updated
            break
        scores = updated
    return scores


def textrank(
    weights: np.ndarray, k: int, damping: float = PAGERANK_DAMPING
) -> SummaryResult:
    """Top-k sentences by stationary graph score, in document order."""
    if k < 1:
        raise ValueError("k must be >= 1")
    scores = pagerank_scores(weights, damping)
    ranked = RankedItems.from_scores(scores)
    return SummaryResult(sentence_ids=tuple(sorted(ranked.top(min(k, len(scores))))))


def _selection_score(doc: Document, selected: tuple[int, ...]) -> float:
    cand = [doc.sentences[i].tokens for i in selected]
    ref = doc.reference or ()
    return 0.5 * (rouge_n(cand, ref, 1).f1 + rouge_n(cand, ref, 2).f1)


def oracle(doc: Document, k: int) -> SummaryResult:
    """Greedy forward selection maximizing mean ROUGE-1/2 F1 vs the reference.

    Stops after k sentences or as soon as no sentence strictly improves the
    running score, so the result can be shorter than k (or empty when the
    reference shares no vocabulary with the document).
    """
    if doc.reference is None:
        raise EngineError(f"document {doc.id!r} has no reference summary")
    if k < 1:
        raise ValueError("k must be >= 1")
    selected: tuple[int, ...] = ()
    best = 0.0
    while len(selected) < min(k, doc.n):
        # Strict improvement required; ties among equally good additions
        # resolve to the earliest sentence because only > replaces.
        best_gain_id = -1
        best_score = best
        for i in range(doc.n):
            if i in selected:
                continue
            score = _selection_score(doc, tuple(sorted(selected + (i,))))
            if score > best_score:
                best_score = score
                best_gain_id = i
        if best_gain_id < 0:
            break
        selected = tuple(sorted(selected + (best_gain_id,)))
        best = best_score
    return SummaryResult(sentence_ids=selected)


def exhaustive_oracle(doc: Document, k: int) -> SummaryResult:
    """Best selection of at most k sentences by brute-force enumeration.

    Test-only reference: factorial in k, guarded to n <= 12.
    """
    if doc.reference is None:
        raise EngineError(f"document {doc.id!r} has no reference summary")
    if doc.n > 12:
        raise ValueError("exhaustive oracle is limited to documents with n <= 12")
    best_ids: tuple[int, ...] = ()
    best = 0.0
    for size in range(1, min(k, doc.n) + 1):
        for combo in itertools.combinations(range(doc.n), size):
            score = _selection_score(doc, combo)
            if score > best:
                best = score
                best_ids = combo
    return SummaryResult(sentence_ids=best_ids)


__all__ = [
    "embedding_weights",
    "exhaustive_oracle",
    "lead",
    "oracle",
    "pacsum_like",
    "pagerank_scores",
    "textrank",
    "tfidf_weights",
]
