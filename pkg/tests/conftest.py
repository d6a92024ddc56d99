from __future__ import annotations

import numpy as np
import pytest

from c2fsum.core import Document


def basis(dim: int, i: int) -> np.ndarray:
    v = np.zeros(dim)
    v[i] = 1.0
    return v


def block_rows(dim: int, sizes: list[int]) -> np.ndarray:
    """Rows where block b repeats the b-th basis vector (planted boundaries)."""
    rows = []
    for b, size in enumerate(sizes):
        rows += [basis(dim, b)] * size
    return np.array(rows)


def make_doc(doc_id: str, sentences: list[str], reference: list[str] | None = None) -> Document:
    return Document.from_texts(doc_id, sentences, reference)


@pytest.fixture
def two_block_doc() -> tuple[Document, np.ndarray]:
    """8 sentences, two planted facets of 4, orthonormal embeddings."""
    sentences = [f"first facet sentence {i}" for i in range(4)] + [
        f"second facet sentence {i}" for i in range(4)
    ]
    return make_doc("two-block", sentences), block_rows(16, [4, 4])
