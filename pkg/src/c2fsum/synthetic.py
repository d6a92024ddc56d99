"""Seeded synthetic corpora with planted facet boundaries.

Each block's sentences embed as one orthonormal basis vector plus Gaussian
noise, re-normalized, so the true boundaries are known and segmentation
quality can be checked exactly.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import Document

_FILLER = ("covers", "reviews", "details", "examines", "reports", "surveys")


def planted_boundaries(block_sizes: Sequence[int]) -> tuple[int, ...]:
    """Gap indices that end each block except the last."""
    cuts = []
    pos = 0
    for size in block_sizes[:-1]:
        pos += size
        cuts.append(pos - 1)
    return tuple(cuts)


def synthetic_document(
    doc_id: str,
    block_sizes: Sequence[int],
    dim: int,
    noise: float,
    rng: np.random.Generator,
) -> tuple[Document, np.ndarray]:
    """One document plus its planted embedding rows (float64, unit norm)."""
    blocks = len(block_sizes)
    if blocks < 1:
        raise ValueError("need at least one block")
    if dim < blocks:
        raise ValueError(f"dim ({dim}) must be >= block count ({blocks})")
    sentences: list[str] = []
    rows: list[np.ndarray] = []
    for b, size in enumerate(block_sizes):
        for j in range(size):
            verb = _FILLER[(b + j) % len(_FILLER)]
            sentences.append(f"Topic {b} sentence {j} {verb} subject area {b}.")
        vecs = np.zeros((size, dim))
        vecs[:, b] = 1.0
        if noise > 0.0:
            vecs += noise * rng.standard_normal((size, dim))
        vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
        rows.append(vecs)
    return Document.from_texts(doc_id, sentences), np.vstack(rows)


def _resolve(spec: int | tuple[int, int], rng: np.random.Generator) -> int:
    if isinstance(spec, tuple):
        lo, hi = spec
        return int(rng.integers(lo, hi + 1))
    return int(spec)


def synthetic_corpus(
    docs: int,
    blocks: int | tuple[int, int],
    sentences_per_block: int | tuple[int, int],
    dim: int,
    noise: float,
    seed: int,
) -> tuple[list[Document], dict[str, np.ndarray], dict[str, tuple[int, ...]]]:
    """Seeded corpus; returns documents, embedding rows, and true boundaries.

    ``blocks`` and ``sentences_per_block`` may be fixed ints or inclusive
    (lo, hi) ranges sampled per document (sizes sampled per block). The same
    seed always produces identical output.
    """
    if docs < 1:
        raise ValueError("docs must be >= 1")
    rng = np.random.default_rng(seed)
    documents: list[Document] = []
    matrices: dict[str, np.ndarray] = {}
    truths: dict[str, tuple[int, ...]] = {}
    for d in range(docs):
        n_blocks = _resolve(blocks, rng)
        sizes = [_resolve(sentences_per_block, rng) for _ in range(n_blocks)]
        doc_id = f"synth-{d:04d}"
        doc, rows = synthetic_document(doc_id, sizes, dim, noise, rng)
        documents.append(doc)
        matrices[doc_id] = rows
        truths[doc_id] = planted_boundaries(sizes)
    return documents, matrices, truths


__all__ = ["planted_boundaries", "synthetic_corpus", "synthetic_document"]
