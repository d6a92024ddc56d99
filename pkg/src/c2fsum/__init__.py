"""Coarse-to-fine unsupervised extractive summarization for long documents.

The pipeline segments a document into facet blocks from sentence-embedding
similarity, filters blocks by directed centrality, picks block-relevant
candidate sentences, and extracts the final summary by candidate-level
centrality. The package also ships lead / full-centrality / graph-ranking /
oracle baselines, a self-contained ROUGE implementation, and a benchmark
harness for scoring-time comparisons.
"""

__version__ = "0.1.0"

from .baselines import lead, oracle, pacsum_like, textrank
from .core import (
    Document,
    EmbeddingMatrix,
    PipelineConfig,
    RankedItems,
    Segmentation,
    SemanticBlock,
    Sentence,
    SummaryResult,
    read_corpus,
    tokenize,
    write_corpus,
)
from .embeddings import EmbeddingReader, hash_embed, load_embeddings, write_embedding_file
from .estimators import block_representation, directed_centrality, rank_desc, relevance_scores
from .evaluation import bench, evaluate_corpus, far_cost_model
from .pipeline import StageTrace, facet_spread, summarize
from .rouge import RougeScore, rouge_l, rouge_n
from .segmentation import BoundaryProfile, segment

__all__ = [
    "BoundaryProfile",
    "Document",
    "EmbeddingMatrix",
    "EmbeddingReader",
    "PipelineConfig",
    "RankedItems",
    "RougeScore",
    "Segmentation",
    "SemanticBlock",
    "Sentence",
    "StageTrace",
    "SummaryResult",
    "__version__",
    "bench",
    "block_representation",
    "directed_centrality",
    "evaluate_corpus",
    "facet_spread",
    "far_cost_model",
    "hash_embed",
    "lead",
    "load_embeddings",
    "oracle",
    "pacsum_like",
    "rank_desc",
    "read_corpus",
    "relevance_scores",
    "rouge_l",
    "rouge_n",
    "segment",
    "summarize",
    "textrank",
    "tokenize",
    "write_corpus",
    "write_embedding_file",
]
