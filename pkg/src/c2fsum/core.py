"""Shared domain types and corpus I/O.

Indexing convention: sentence ids, block bounds, and gap positions are
0-based everywhere in this package, including file formats and CLI output.
Gap ``i`` sits between sentences ``i`` and ``i + 1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

if TYPE_CHECKING:
    from .pipeline import StageTrace


class EngineError(Exception):
    """Base class for every error this package raises deliberately."""


class CorpusError(EngineError):
    """Malformed corpus file or document."""


class EmbeddingError(EngineError):
    """Malformed embedding file or inconsistent embedding data."""


def tokenize(text: str) -> tuple[str, ...]:
    """Lowercase, split on whitespace, strip non-alphanumeric edges per token.

    Deterministic and dependency-free; empty tokens are dropped, so a
    whitespace- or punctuation-only string yields an empty tuple.
    """
    out: list[str] = []
    for raw in text.lower().split():
        start, end = 0, len(raw)
        while start < end and not raw[start].isalnum():
            start += 1
        while end > start and not raw[end - 1].isalnum():
            end -= 1
        if end > start:
            out.append(raw[start:end])
    return tuple(out)


@dataclass(frozen=True, slots=True)
class Sentence:
    """One pre-split sentence; tokens are derived from text by ``tokenize``."""

    text: str
    tokens: tuple[str, ...]

    @classmethod
    def from_text(cls, text: str) -> "Sentence":
        return cls(text=text, tokens=tokenize(text))


@dataclass(frozen=True, slots=True)
class Document:
    """A pre-sentence-split document, optionally with a reference summary.

    ``reference`` holds the reference-summary sentences as token tuples for
    ROUGE scoring; it is None when the corpus carries no gold summary.
    """

    id: str
    sentences: tuple[Sentence, ...]
    reference: tuple[tuple[str, ...], ...] | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise CorpusError("document id must be a non-empty string")
        if not self.sentences:
            raise CorpusError(f"document {self.id!r} has no sentences")

    @property
    def n(self) -> int:
        return len(self.sentences)

    @classmethod
    def from_texts(
        cls,
        doc_id: str,
        sentences: Sequence[str],
        reference: Sequence[str] | None = None,
    ) -> "Document":
        ref = tuple(tokenize(s) for s in reference) if reference is not None else None
        return cls(
            id=doc_id,
            sentences=tuple(Sentence.from_text(s) for s in sentences),
            reference=ref,
        )


def parse_corpus_line(line: str, lineno: int = 0) -> Document:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"corpus line {lineno}: invalid JSON ({exc})") from exc
    if not isinstance(obj, dict):
        raise CorpusError(f"corpus line {lineno}: expected a JSON object")
    doc_id = obj.get("id")
    sentences = obj.get("sentences")
    if not isinstance(doc_id, str):
        raise CorpusError(f"corpus line {lineno}: 'id' must be a string")
    if (
        not isinstance(sentences, list)
        or not sentences
        or not all(isinstance(s, str) for s in sentences)
    ):
        raise CorpusError(
            f"corpus line {lineno} (doc {doc_id!r}): 'sentences' must be a "
            "non-empty list of strings"
        )
    reference = obj.get("reference")
    if reference is not None and (
        not isinstance(reference, list)
        or not all(isinstance(s, str) for s in reference)
    ):
        raise CorpusError(
            f"corpus line {lineno} (doc {doc_id!r}): 'reference' must be a "
            "list of strings"
        )
    return Document.from_texts(doc_id, sentences, reference)


def read_corpus(path: str | Path) -> list[Document]:
    """Read a JSONL corpus: one ``{"id", "sentences", "reference"?}`` per line."""
    path = Path(path)
    if not path.exists():
        raise CorpusError(f"corpus file not found: {path}")
    docs: list[Document] = []
    seen: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            doc = parse_corpus_line(line, lineno)
            if doc.id in seen:
                raise CorpusError(f"duplicate document id {doc.id!r} at line {lineno}")
            seen.add(doc.id)
            docs.append(doc)
    if not docs:
        raise CorpusError(f"corpus file is empty: {path}")
    return docs


def write_corpus(docs: Iterable[Document], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for doc in docs:
            obj: dict = {"id": doc.id, "sentences": [s.text for s in doc.sentences]}
            if doc.reference is not None:
                obj["reference"] = [" ".join(toks) for toks in doc.reference]
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


class EmbeddingMatrix:
    """Per-sentence embedding rows for one document.

    Rows are float64, finite, and never all-zero; ``repaired`` lists the row
    indices that were replaced with the first basis vector because the source
    data contained a zero vector.
    """

    __slots__ = ("vectors", "repaired")

    def __init__(self, vectors: np.ndarray, repaired: tuple[int, ...] = ()) -> None:
        arr = np.asarray(vectors, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise EmbeddingError(
                f"embedding matrix must be 2-D and non-empty, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise EmbeddingError("embedding matrix contains non-finite values")
        if np.any(~arr.any(axis=1)):
            raise EmbeddingError("embedding matrix contains all-zero rows")
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        self.vectors = arr
        self.repaired = repaired

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


@dataclass(frozen=True, slots=True)
class SemanticBlock:
    """A contiguous run of sentences covering one facet; bounds inclusive."""

    start: int
    end: int
    representation: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not 0 <= self.start <= self.end:
            raise ValueError(f"invalid block bounds [{self.start}, {self.end}]")

    @property
    def size(self) -> int:
        return self.end - self.start + 1

    def sentence_ids(self) -> range:
        return range(self.start, self.end + 1)


@dataclass(frozen=True, slots=True)
class Segmentation:
    """Ordered, disjoint, contiguous blocks covering sentences 0..n-1."""

    blocks: tuple[SemanticBlock, ...]

    def __post_init__(self) -> None:
        if not self.blocks:
            raise ValueError("segmentation must contain at least one block")
        if self.blocks[0].start != 0:
            raise ValueError("first block must start at sentence 0")
        for prev, cur in zip(self.blocks, self.blocks[1:]):
            if cur.start != prev.end + 1:
                raise ValueError(
                    f"blocks are not contiguous: [{prev.start}, {prev.end}] "
                    f"followed by [{cur.start}, {cur.end}]"
                )

    @property
    def n(self) -> int:
        return self.blocks[-1].end + 1

    @property
    def m(self) -> int:
        return len(self.blocks)

    @classmethod
    def from_boundaries(cls, n: int, boundaries: Sequence[int]) -> "Segmentation":
        """Build blocks from gap indices; a boundary at gap i ends a block at i."""
        if n < 1:
            raise ValueError("segmentation needs at least one sentence")
        cuts = sorted(set(int(b) for b in boundaries))
        if cuts and not 0 <= cuts[0] <= cuts[-1] < n - 1:
            raise ValueError(f"boundary gaps {cuts} out of range for n={n}")
        starts = [0] + [c + 1 for c in cuts]
        ends = [c for c in cuts] + [n - 1]
        return cls(tuple(SemanticBlock(s, e) for s, e in zip(starts, ends)))

    def block_of(self, sentence_id: int) -> int:
        """Index of the block containing ``sentence_id``."""
        if not 0 <= sentence_id < self.n:
            raise ValueError(f"sentence id {sentence_id} out of range")
        for j, block in enumerate(self.blocks):
            if block.start <= sentence_id <= block.end:
                return j
        raise AssertionError("cover invariant violated")


@dataclass(frozen=True, slots=True)
class PipelineConfig:
    """All pipeline hyper-parameters.

    window:
        Sentences averaged on each side of a gap for boundary similarity
        (CLI ``--w``).
    smooth_window:
        Half-width of the centered moving average applied to the gap
        similarity curve (CLI ``--w-hat``). The default is 0 (off): centered
        smoothing flattens the similarity valley at sharp topic transitions,
        which erases the depth signal exactly where a boundary belongs and
        can displace detected boundaries by up to the half-width. Enable it
        for noisy similarity curves.
    granularity:
        Multiplier on the depth-score standard deviation in the boundary
        threshold ``mean + granularity * std`` (CLI ``--lambda``). Larger
        values produce fewer, larger blocks.
    keep_ratio:
        Fraction of blocks kept by the coarse filter, in (0, 1]
        (CLI ``--alpha``).
    k:
        Number of summary sentences to extract.
    candidates_per_block:
        Per-block candidate quota for the fine stage (CLI ``--beta``).
        None derives it as ceil(n / block count) from the segmentation.
    prev_weight / next_weight:
        Weights on similarity mass from earlier / later positions in the
        directed centrality score (CLI ``--lambda1`` / ``--lambda2``).
    """

    window: int = 2
    smooth_window: int = 0
    granularity: float = 1.0
    keep_ratio: float = 0.5
    k: int = 5
    candidates_per_block: int | None = None
    prev_weight: float = 1.0
    next_weight: float = 1.0

    def __post_init__(self) -> None:
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.smooth_window < 0:
            raise ValueError("smooth_window must be >= 0")
        if not 0.0 < self.keep_ratio <= 1.0:
            raise ValueError("keep_ratio must be in (0, 1]")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.candidates_per_block is not None and self.candidates_per_block < 1:
            raise ValueError("candidates_per_block must be >= 1 when set")
        for name in ("granularity", "prev_weight", "next_weight"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True, slots=True)
class RankedItems:
    """Ids paired with scores, sorted by descending score then ascending id."""

    items: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        ids = [i for i, _ in self.items]
        if len(ids) != len(set(ids)):
            raise ValueError("ranked items must have unique ids")
        for _, score in self.items:
            if not math.isfinite(score):
                raise ValueError("ranked scores must be finite")

    @classmethod
    def from_scores(
        cls, scores: Sequence[float], ids: Sequence[int] | None = None
    ) -> "RankedItems":
        if isinstance(scores, np.ndarray):
            scores = scores.tolist()  # plain floats sort much faster
        if ids is None:
            ids = range(len(scores))
        pairs = sorted(zip(ids, scores), key=lambda p: (-p[1], p[0]))
        return cls(tuple((int(i), float(s)) for i, s in pairs))

    def ids(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.items)

    def top(self, k: int) -> tuple[int, ...]:
        return self.ids()[: max(k, 0)]

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


@dataclass(frozen=True, slots=True)
class SummaryResult:
    """Selected sentence ids (ascending) plus per-stage diagnostics."""

    sentence_ids: tuple[int, ...]
    segmentation: "Segmentation | None" = None
    trace: "StageTrace | None" = None

    def __post_init__(self) -> None:
        ids = self.sentence_ids
        if list(ids) != sorted(set(ids)):
            raise ValueError("summary sentence ids must be unique and ascending")
        if ids and ids[0] < 0:
            raise ValueError("summary sentence ids must be non-negative")


__all__ = [
    "CorpusError",
    "Document",
    "EmbeddingError",
    "EmbeddingMatrix",
    "EngineError",
    "PipelineConfig",
    "RankedItems",
    "Segmentation",
    "SemanticBlock",
    "Sentence",
    "SummaryResult",
    "parse_corpus_line",
    "read_corpus",
    "tokenize",
    "write_corpus",
]
