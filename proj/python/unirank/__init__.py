"""Explanation reconstruction: rank knowledge-base facts for a hypothesis by
lexical relevance plus the explanations of similar training hypotheses."""

from ._unirank import (
    Corpus,
    Fact,
    IngestError,
    Question,
    Ranker,
    RankerConfig,
    average_precision,
    content_overlap_count,
    ingest,
    load_corpus,
    mean_average_precision,
    overlap_bucket,
    precision_at_k,
    terms,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "Fact",
    "IngestError",
    "Question",
    "Ranker",
    "RankerConfig",
    "average_precision",
    "content_overlap_count",
    "ingest",
    "load_corpus",
    "mean_average_precision",
    "overlap_bucket",
    "precision_at_k",
    "terms",
    "tokenize",
]
