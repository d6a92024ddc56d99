"""Embedding providers: file loading and a deterministic hashing encoder.

Canonical file format (binary, little-endian):

    header:  magic ``C2FE`` (4 bytes), version u16 = 1, dim u32, doc_count u32
    record:  id_len u16, id (UTF-8 bytes), n u32, n * dim float32 row-major

A JSONL debug format is also readable: one ``{"id": ..., "vectors": [[...]]}``
object per line. Values are stored as 32-bit floats on disk and upcast to
64-bit for all computation. Rows that are entirely zero are repaired to the
first basis vector and flagged, because cosine similarity is undefined on
zero vectors.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path
from typing import Iterator, Mapping, Sequence

import numpy as np

from .core import Document, EmbeddingError, EmbeddingMatrix

MAGIC = b"C2FE"
VERSION = 1
_HEADER = struct.Struct("<4sHII")
_U16 = struct.Struct("<H")
_U32 = struct.Struct("<I")

# FNV-1a, 64-bit: fixed offset basis and prime, applied to UTF-8 token bytes.
# Chosen for cross-platform reproducibility; no per-process randomization.
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


class DocumentNotFound(EmbeddingError):
    def __init__(self, doc_id: str, path: str | Path | None = None) -> None:
        where = f" in {path}" if path is not None else ""
        super().__init__(f"document not found{where}: {doc_id!r}")
        self.doc_id = doc_id


class SentenceCountMismatch(EmbeddingError):
    def __init__(self, doc_id: str, expected: int, actual: int) -> None:
        super().__init__(
            f"sentence count mismatch for document {doc_id!r}: corpus has "
            f"{expected} sentences, embedding record has {actual} rows"
        )
        self.doc_id = doc_id
        self.expected = expected
        self.actual = actual


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


def _repair_zero_rows(rows: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    zero = ~rows.any(axis=1)
    repaired = tuple(int(i) for i in np.nonzero(zero)[0])
    if repaired:
        rows = rows.copy()
        rows[zero] = 0.0
        rows[zero, 0] = 1.0
    return rows, repaired


def hash_embed(doc: Document, dim: int = 256) -> EmbeddingMatrix:
    """Feature-hashed bag-of-tokens embedding, L2-normalized per sentence.

    Each token's FNV-1a 64-bit hash selects a coordinate (``hash % dim``) and
    a sign (the top hash bit); a sentence with no tokens becomes the first
    basis vector. Deterministic across runs and platforms.
    """
    if dim < 8:
        raise ValueError("hash embedding dim must be >= 8")
    rows = np.zeros((doc.n, dim), dtype=np.float64)
    for i, sentence in enumerate(doc.sentences):
        for token in sentence.tokens:
            h = fnv1a64(token.encode("utf-8"))
            sign = -1.0 if h >> 63 else 1.0
            rows[i, h % dim] += sign
    norms = np.linalg.norm(rows, axis=1)
    zero = norms == 0.0
    rows[zero, 0] = 1.0
    norms[zero] = 1.0
    rows /= norms[:, None]
    return EmbeddingMatrix(rows, repaired=tuple(int(i) for i in np.nonzero(zero)[0]))


def write_embedding_file(
    path: str | Path, records: Mapping[str, np.ndarray] | Sequence[tuple[str, np.ndarray]]
) -> None:
    """Write the canonical binary embedding file.

    ``records`` maps document id to an (n, dim) array; iteration order is the
    on-disk record order. All records must share one dim.
    """
    items = list(records.items()) if isinstance(records, Mapping) else list(records)
    if not items:
        raise EmbeddingError("refusing to write an embedding file with no records")
    dim = int(np.asarray(items[0][1]).shape[1])
    with Path(path).open("wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, dim, len(items)))
        for doc_id, rows in items:
            arr = np.asarray(rows, dtype=np.float32)
            if arr.ndim != 2 or arr.shape[1] != dim:
                raise EmbeddingError(
                    f"record {doc_id!r} has shape {arr.shape}, expected (*, {dim})"
                )
            encoded = doc_id.encode("utf-8")
            if len(encoded) > 0xFFFF:
                raise EmbeddingError(f"document id too long: {doc_id[:32]!r}...")
            fh.write(_U16.pack(len(encoded)))
            fh.write(encoded)
            fh.write(_U32.pack(arr.shape[0]))
            fh.write(arr.astype("<f4").tobytes(order="C"))


class EmbeddingReader:
    """Indexed, read-only view of an embedding file (binary or JSONL debug).

    The whole file is parsed once at open; per-document matrices are
    materialized on demand, so concurrent loads of different documents are
    safe.
    """

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        if not self.path.exists():
            raise EmbeddingError(f"embedding file not found: {self.path}")
        self._records: dict[str, np.ndarray] = {}
        self.dim = 0
        with self.path.open("rb") as fh:
            head = fh.read(4)
            fh.seek(0)
            if head == MAGIC:
                self._read_binary(fh)
            else:
                self._read_jsonl(fh)
        if not self._records:
            raise EmbeddingError(f"embedding file contains no records: {self.path}")

    def _read_binary(self, fh) -> None:
        raw = fh.read(_HEADER.size)
        if len(raw) < _HEADER.size:
            raise EmbeddingError(f"truncated embedding header in {self.path}")
        magic, version, dim, doc_count = _HEADER.unpack(raw)
        if magic != MAGIC:
            raise EmbeddingError(f"bad magic in {self.path}: {magic!r}")
        if version != VERSION:
            raise EmbeddingError(f"unsupported embedding format version {version}")
        if dim < 1:
            raise EmbeddingError(f"invalid embedding dim {dim} in {self.path}")
        self.dim = dim
        for i in range(doc_count):
            raw = fh.read(_U16.size)
            if len(raw) < _U16.size:
                raise EmbeddingError(
                    f"truncated embedding file {self.path}: header promises "
                    f"{doc_count} records, found {i}"
                )
            (id_len,) = _U16.unpack(raw)
            doc_id = fh.read(id_len).decode("utf-8")
            raw = fh.read(_U32.size)
            if len(raw) < _U32.size:
                raise EmbeddingError(f"truncated record {doc_id!r} in {self.path}")
            (n,) = _U32.unpack(raw)
            payload = fh.read(n * dim * 4)
            if len(payload) < n * dim * 4:
                raise EmbeddingError(f"truncated rows for record {doc_id!r} in {self.path}")
            if doc_id in self._records:
                raise EmbeddingError(f"duplicate record id {doc_id!r} in {self.path}")
            rows = np.frombuffer(payload, dtype="<f4").reshape(n, dim)
            self._records[doc_id] = rows.astype(np.float64)

    def _read_jsonl(self, fh) -> None:
        for lineno, line in enumerate(fh.read().decode("utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise EmbeddingError(
                    f"{self.path} is neither a binary embedding file nor JSONL "
                    f"(line {lineno}: {exc})"
                ) from exc
            if not isinstance(obj, dict) or "id" not in obj or "vectors" not in obj:
                raise EmbeddingError(
                    f"{self.path} line {lineno}: expected {{'id', 'vectors'}} object"
                )
            rows = np.asarray(obj["vectors"], dtype=np.float64)
            if rows.ndim != 2:
                raise EmbeddingError(
                    f"{self.path} line {lineno}: 'vectors' must be a 2-D array"
                )
            if self.dim == 0:
                self.dim = rows.shape[1]
            elif rows.shape[1] != self.dim:
                raise EmbeddingError(
                    f"{self.path} line {lineno}: dim {rows.shape[1]} does not "
                    f"match earlier records ({self.dim})"
                )
            if obj["id"] in self._records:
                raise EmbeddingError(f"duplicate record id {obj['id']!r} in {self.path}")
            self._records[str(obj["id"])] = rows

    def ids(self) -> tuple[str, ...]:
        return tuple(self._records)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._records

    def load(self, doc_id: str, expected_n: int | None = None) -> EmbeddingMatrix:
        if doc_id not in self._records:
            raise DocumentNotFound(doc_id, self.path)
        rows = self._records[doc_id]
        if expected_n is not None and rows.shape[0] != expected_n:
            raise SentenceCountMismatch(doc_id, expected_n, rows.shape[0])
        rows, repaired = _repair_zero_rows(rows)
        return EmbeddingMatrix(rows, repaired=repaired)


def load_embeddings(
    path: str | Path, doc_id: str, expected_n: int | None = None
) -> EmbeddingMatrix:
    """Load one document's matrix from an embedding file."""
    return EmbeddingReader(path).load(doc_id, expected_n)


def iter_matrices(
    reader: EmbeddingReader | None, docs: Sequence[Document], hash_dim: int = 256
) -> Iterator[tuple[Document, EmbeddingMatrix]]:
    """Pair each document with its matrix from ``reader``, or hash-embed."""
    for doc in docs:
        if reader is None:
            yield doc, hash_embed(doc, hash_dim)
        else:
            yield doc, reader.load(doc.id, expected_n=doc.n)


__all__ = [
    "DocumentNotFound",
    "EmbeddingReader",
    "MAGIC",
    "SentenceCountMismatch",
    "VERSION",
    "fnv1a64",
    "hash_embed",
    "iter_matrices",
    "load_embeddings",
    "write_embedding_file",
]
