"""Sentence scoring: the native Kneser-Ney model and the external protocol.

The probability kernel has a compiled and a pure-Python implementation,
selected in ``kernel``; they are bit-identical, so outputs never depend on
which one is active.
"""

from .external import ExternalScorer, ExternalScorerError, external_score
from .kernel import KERNEL_NAME
from .ngram import (
    BOS,
    EOS,
    UNK,
    NGramLM,
    SentenceScore,
    corpus_perplexity,
    load_lm,
    save_lm,
    train_ngram,
)
from .scoring import (
    ScoredPair,
    pair_items,
    read_pair_scores,
    score_pairs,
    score_sentences,
    write_scores,
)

__all__ = [
    "BOS",
    "EOS",
    "UNK",
    "KERNEL_NAME",
    "ExternalScorer",
    "ExternalScorerError",
    "NGramLM",
    "ScoredPair",
    "SentenceScore",
    "corpus_perplexity",
    "external_score",
    "load_lm",
    "pair_items",
    "read_pair_scores",
    "save_lm",
    "score_pairs",
    "score_sentences",
    "train_ngram",
    "write_scores",
]
