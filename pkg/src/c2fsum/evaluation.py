"""Corpus-level ROUGE evaluation, inference-time benchmarking, and the
combination-scoring cost model used to contextualize speedups."""

from __future__ import annotations

import gc
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from threadpoolctl import threadpool_limits

from .baselines import embedding_weights, lead, oracle, pacsum_like, textrank, tfidf_weights
from .core import Document, EmbeddingMatrix, EngineError, PipelineConfig, SummaryResult
from .pipeline import facet_spread, summarize
from .rouge import RougeScore, rouge_l, rouge_n
from .segmentation import segment

SystemFn = Callable[[Document, EmbeddingMatrix, PipelineConfig], SummaryResult]


def _run_c2f(doc: Document, E: EmbeddingMatrix, config: PipelineConfig) -> SummaryResult:
    return summarize(doc, E, config)


def _run_lead(doc: Document, E: EmbeddingMatrix, config: PipelineConfig) -> SummaryResult:
    return lead(doc, config.k)


def _run_pacsum(doc: Document, E: EmbeddingMatrix, config: PipelineConfig) -> SummaryResult:
    return pacsum_like(E, config.k, config.prev_weight, config.next_weight)


def _run_textrank_tfidf(doc: Document, E: EmbeddingMatrix, config: PipelineConfig) -> SummaryResult:
    return textrank(tfidf_weights(doc), config.k)


def _run_textrank_emb(doc: Document, E: EmbeddingMatrix, config: PipelineConfig) -> SummaryResult:
    return textrank(embedding_weights(E), config.k)


def _run_oracle(doc: Document, E: EmbeddingMatrix, config: PipelineConfig) -> SummaryResult:
    return oracle(doc, config.k)


SYSTEMS: dict[str, SystemFn] = {
    "c2f": _run_c2f,
    "lead": _run_lead,
    "pacsum": _run_pacsum,
    "textrank-tfidf": _run_textrank_tfidf,
    "textrank-emb": _run_textrank_emb,
    "oracle": _run_oracle,
}


def get_system(name: str) -> SystemFn:
    try:
        return SYSTEMS[name]
    except KeyError:
        raise EngineError(
            f"unknown system {name!r}; choose from {', '.join(sorted(SYSTEMS))}"
        ) from None


def score_summary(doc: Document, result: SummaryResult) -> dict[str, RougeScore]:
    """ROUGE-1/2/L of the selected sentences against the document reference."""
    if doc.reference is None:
        raise EngineError(f"document {doc.id!r} has no reference summary")
    cand = [doc.sentences[i].tokens for i in result.sentence_ids]
    ref = list(doc.reference)
    return {
        "rouge-1": rouge_n(cand, ref, 1),
        "rouge-2": rouge_n(cand, ref, 2),
        "rouge-l": rouge_l(cand, ref),
    }


def evaluate_corpus(
    docs: Sequence[Document],
    matrices: Mapping[str, EmbeddingMatrix],
    system: str,
    config: PipelineConfig,
    jobs: int = 1,
) -> tuple[list[dict], dict]:
    """Per-document ROUGE rows plus an arithmetic-mean aggregate.

    Documents without references are skipped and counted. The aggregate also
    reports facet-spread statistics of the selections against each document's
    segmentation.
    """
    run = get_system(system)
    scored = [doc for doc in docs if doc.reference is not None]
    skipped = len(docs) - len(scored)

    def one(doc: Document) -> dict:
        E = matrices[doc.id]
        result = run(doc, E, config)
        scores = score_summary(doc, result)
        seg = result.segmentation or segment(E, config)[0]
        facets, per_facet = facet_spread(result, seg)
        return {
            "id": doc.id,
            "summary_ids": list(result.sentence_ids),
            "rouge": {
                name: {"precision": s.precision, "recall": s.recall, "f1": s.f1}
                for name, s in scores.items()
            },
            "facet_count": facets,
            "sentences_per_facet": per_facet,
        }

    if jobs > 1 and len(scored) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_doc = list(pool.map(one, scored))
    else:
        per_doc = [one(doc) for doc in scored]

    aggregate: dict = {
        "system": system,
        "documents": len(scored),
        "skipped_without_reference": skipped,
    }
    if per_doc:
        for variant in ("rouge-1", "rouge-2", "rouge-l"):
            aggregate[variant] = {
                part: sum(row["rouge"][variant][part] for row in per_doc) / len(per_doc)
                for part in ("precision", "recall", "f1")
            }
        spreads = [row for row in per_doc if row["facet_count"] > 0]
        aggregate["facets"] = {
            "mean_count": (
                sum(row["facet_count"] for row in spreads) / len(spreads) if spreads else 0.0
            ),
            "mean_sentences_per_facet": (
                sum(row["sentences_per_facet"] for row in spreads) / len(spreads)
                if spreads
                else 0.0
            ),
        }
    return per_doc, aggregate


@dataclass(slots=True)
class BenchReport:
    """Wall-clock timing of scoring only (embedding loading excluded)."""

    repeats: int
    documents: int
    systems: dict[str, dict] = field(default_factory=dict)
    speedups: dict[str, dict[str, float]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "repeats": self.repeats,
            "documents": self.documents,
            "systems": self.systems,
            "speedups": self.speedups,
        }


def bench(
    docs: Sequence[Document],
    matrices: Mapping[str, EmbeddingMatrix],
    systems: Sequence[str],
    config: PipelineConfig,
    repeats: int = 10,
) -> BenchReport:
    """Time each system over the corpus, averaged over ``repeats`` runs.

    Matrices must be preloaded by the caller so timings cover ranking work
    only. Runs are single-threaded to keep numbers comparable. Pairwise-op
    counters come from the pipeline trace for c2f and from n(n-1) for the
    full-sentence centrality baseline.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    report = BenchReport(repeats=repeats, documents=len(docs))
    runners = {name: get_system(name) for name in systems}
    timings = {name: [0.0] * len(docs) for name in systems}
    counters: dict[str, dict[str, int]] = {name: {} for name in systems}
    # Untimed warmup pass that also collects the structural op counters.
    for name, run in runners.items():
        op_counts = counters[name]
        for doc in docs:
            result = run(doc, matrices[doc.id], config)
            if result.trace is not None:
                for key, value in result.trace.op_counts.items():
                    op_counts[key] = op_counts.get(key, 0) + value
            elif name == "pacsum":
                n = matrices[doc.id].n
                op_counts["pairwise_dots"] = op_counts.get("pairwise_dots", 0) + n * (n - 1)
    # Repeat-major timing loop so background drift lands on every system
    # alike. BLAS pools are pinned to one thread for comparable numbers and
    # the collector is paused while timing, as timeit does.
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        with threadpool_limits(limits=1):
            for _ in range(repeats):
                for name, run in runners.items():
                    per_doc_seconds = timings[name]
                    for d, doc in enumerate(docs):
                        E = matrices[doc.id]
                        start = time.perf_counter()
                        run(doc, E, config)
                        per_doc_seconds[d] += time.perf_counter() - start
    finally:
        if gc_was_enabled:
            gc.enable()
    for name in systems:
        mean_per_doc = [s / repeats for s in timings[name]]
        report.systems[name] = {
            "mean_seconds": sum(mean_per_doc) / len(mean_per_doc) if mean_per_doc else 0.0,
            "total_seconds": sum(timings[name]),
            "per_doc_seconds": mean_per_doc,
            "op_counts": counters[name],
        }
    for name in report.systems:
        mine = report.systems[name]["mean_seconds"]
        report.speedups[name] = {
            other: (report.systems[other]["mean_seconds"] / mine if mine > 0.0 else math.inf)
            for other in report.systems
            if other != name
        }
    return report


def far_cost_model(n_candidates: int, k: int) -> int:
    """Relevance evaluations a combination-scoring ranker would need: C(n, k).

    Exact arbitrary-precision arithmetic, so huge counts never overflow.
    """
    if k < 0 or n_candidates < 0:
        raise ValueError("n_candidates and k must be non-negative")
    if k > n_candidates:
        raise ValueError("k must be <= n_candidates")
    return math.comb(n_candidates, k)


def far_comparison(n_candidates: int, k: int) -> dict[str, int]:
    """Combination-scoring cost next to this pipeline's per-sentence cost.

    The coarse-to-fine pipeline evaluates relevance once per candidate
    sentence; a combination scorer evaluates every k-subset.
    """
    return {
        "candidates": n_candidates,
        "k": k,
        "combination_scoring_evaluations": far_cost_model(n_candidates, k),
        "c2f_relevance_evaluations": n_candidates,
    }


__all__ = [
    "BenchReport",
    "SYSTEMS",
    "bench",
    "evaluate_corpus",
    "far_comparison",
    "far_cost_model",
    "get_system",
    "score_summary",
]
