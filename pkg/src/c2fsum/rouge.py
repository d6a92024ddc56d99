"""Self-contained ROUGE-N and summary-level ROUGE-L.

N-grams are counted within sentences (they never cross sentence boundaries),
and overlap is clipped by the reference multiset counts. ROUGE-L is the
summary-level union-LCS variant: for each reference sentence, the union of
its LCS token positions against every candidate sentence is credited, with
hits clipped by candidate token counts. No stemming or stopword removal is
applied.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

TokenLists = Sequence[Sequence[str]]


@dataclass(frozen=True, slots=True)
class RougeScore:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_pr(cls, precision: float, recall: float) -> "RougeScore":
        total = precision + recall
        f1 = 2.0 * precision * recall / total if total > 0.0 else 0.0
        return cls(precision, recall, f1)


def _as_sentences(text: Sequence) -> list[tuple[str, ...]]:
    """Accept a flat token list or a list of per-sentence token lists."""
    if not text:
        return []
    first = text[0]
    if isinstance(first, str):
        return [tuple(text)]
    return [tuple(sent) for sent in text]


def _ngram_counts(sentences: list[tuple[str, ...]], n: int) -> Counter:
    counts: Counter = Counter()
    for sent in sentences:
        for i in range(len(sent) - n + 1):
            counts[sent[i : i + n]] += 1
    return counts


def rouge_n(candidate: Sequence, reference: Sequence, n: int = 1) -> RougeScore:
    """Clipped n-gram overlap; zero denominators score 0."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cand = _ngram_counts(_as_sentences(candidate), n)
    ref = _ngram_counts(_as_sentences(reference), n)
    overlap = sum(min(count, ref[gram]) for gram, count in cand.items())
    cand_total = sum(cand.values())
    ref_total = sum(ref.values())
    precision = overlap / cand_total if cand_total else 0.0
    recall = overlap / ref_total if ref_total else 0.0
    return RougeScore.from_pr(precision, recall)


def _lcs_positions(ref: tuple[str, ...], cand: tuple[str, ...]) -> set[int]:
    """Positions in ``ref`` that belong to one LCS of (ref, cand)."""
    m, n = len(ref), len(cand)
    if m == 0 or n == 0:
        return set()
    table = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        row, prev = table[i], table[i - 1]
        tok = ref[i - 1]
        for j in range(1, n + 1):
            if tok == cand[j - 1]:
                row[j] = prev[j - 1] + 1
            else:
                row[j] = row[j - 1] if row[j - 1] >= prev[j] else prev[j]
    positions: set[int] = set()
    i, j = m, n
    while i > 0 and j > 0:
        if ref[i - 1] == cand[j - 1] and table[i][j] == table[i - 1][j - 1] + 1:
            positions.add(i - 1)
            i -= 1
            j -= 1
        elif table[i - 1][j] >= table[i][j - 1]:
            i -= 1
        else:
            j -= 1
    return positions


def rouge_l(candidate: TokenLists, reference: TokenLists) -> RougeScore:
    """Summary-level ROUGE-L with union LCS and candidate-count clipping."""
    cand_sents = _as_sentences(candidate)
    ref_sents = _as_sentences(reference)
    cand_total = sum(len(s) for s in cand_sents)
    ref_total = sum(len(s) for s in ref_sents)
    if cand_total == 0 or ref_total == 0:
        return RougeScore.from_pr(0.0, 0.0)
    remaining = Counter(tok for sent in cand_sents for tok in sent)
    hits = 0
    for ref_sent in ref_sents:
        union: set[int] = set()
        for cand_sent in cand_sents:
            union |= _lcs_positions(ref_sent, cand_sent)
        for pos in sorted(union):
            tok = ref_sent[pos]
            if remaining[tok] > 0:
                remaining[tok] -= 1
                hits += 1
    return RougeScore.from_pr(hits / cand_total, hits / ref_total)


__all__ = ["RougeScore", "rouge_l", "rouge_n"]
