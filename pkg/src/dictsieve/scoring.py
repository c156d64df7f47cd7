"""Per-document relevance scoring.

The unigram score sums, over dictionary terms present in a document, a
dampened term frequency relative to the document's average unique-term
frequency, weighted by the term's rank boost and by pivoted unique
normalization over the collection.  The context-sensitive score swaps raw
term frequency for tfsim, which rewards sentences whose dictionary-term
context resembles the term's filtered co-occurrence profile, mixed in by
the weight alpha.  With alpha = 0 the two scores coincide exactly.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .cooc import CoocMatrix
from .corpus import Corpus, Document, TermStats
from .dictionary import Dictionary

MODES = ("unigram", "context", "context-only")

# floor for tfsim before the log; only binds in context-only mode, where
# cosine-only values may fall below 1
_TFSIM_FLOOR = 1e-9


@dataclass(frozen=True)
class ScoringConfig:
    slope: float = 0.7
    alpha: float = 0.0
    mode: str = "unigram"

    def __post_init__(self) -> None:
        if not 0.0 <= self.slope <= 1.0:
            raise ValueError(f"slope must be in [0, 1], got {self.slope}")
        if self.alpha < 0.0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}, expected one of {MODES}")
        if self.mode == "context-only":
            object.__setattr__(self, "alpha", 1.0)


@dataclass
class CollectionNorms:
    """Pivoted unique normalization and average term frequency per document.

    Zero-token documents have no defined norm or avgtf; they are flagged in
    ``empty_doc_ids`` and score 0 everywhere.
    """

    pivot: float
    norm: dict[str, float]
    avgtf: dict[str, float]
    empty_doc_ids: frozenset[str]


def compute_norms(target: Corpus, stats: TermStats, config: ScoringConfig) -> CollectionNorms:
    """pivot = mean |U_d|; norm(d) = 1/sqrt((1-slope)*pivot + slope*|U_d|)."""
    if not target.documents:
        raise ValueError("cannot compute norms of an empty corpus")
    unique_counts = {doc.id: len(stats.tf_doc[doc.id]) for doc in target.documents}
    pivot = sum(unique_counts.values()) / len(target.documents)
    norm: dict[str, float] = {}
    avgtf: dict[str, float] = {}
    empty = set()
    for doc in target.documents:
        n_unique = unique_counts[doc.id]
        if n_unique == 0:
            empty.add(doc.id)
            continue
        norm[doc.id] = 1.0 / math.sqrt((1.0 - config.slope) * pivot + config.slope * n_unique)
        avgtf[doc.id] = sum(stats.tf_doc[doc.id].values()) / n_unique
    return CollectionNorms(pivot=pivot, norm=norm, avgtf=avgtf, empty_doc_ids=frozenset(empty))


def _term_contribution(tf_value: float, log_avgtf: float, boost: float, norm: float) -> float:
    """(1 + ln tf) / (1 + ln avgtf) * boost * norm, floored and clamped.

    Shared by the unigram and context paths so that equal tf values produce
    bit-identical scores.  The floor and clamp are no-ops for tf >= 1.
    """
    tf_value = max(tf_value, _TFSIM_FLOOR)
    return max(0.0, 1.0 + math.log(tf_value)) / (1.0 + log_avgtf) * boost * norm


def score_dict(q: Dictionary, d: Document, stats: TermStats, norms: CollectionNorms) -> float:
    """Unigram dictionary score; terms absent from the document contribute 0."""
    if len(q) == 0:
        raise ValueError("dictionary is empty")
    if d.id in norms.empty_doc_ids:
        return 0.0
    counts = stats.tf_doc[d.id]
    log_avgtf = math.log(norms.avgtf[d.id])
    norm = norms.norm[d.id]
    score = 0.0
    for entry in q.entries:
        tf_value = counts.get(entry.term, 0)
        if tf_value > 0:
            score += _term_contribution(float(tf_value), log_avgtf, entry.boost, norm)
    return score


def _sentence_profile(sentence: list[str], dict_terms: frozenset[str]):
    """Counts of dictionary terms in a sentence plus the binary-vector norm."""
    counts = Counter(t for t in sentence if t in dict_terms)
    return counts, math.sqrt(len(counts))


def _context_similarity(
    term: str, present: Counter, s_norm: float, cooc_filtered: CoocMatrix
) -> float:
    """Cosine between the sentence's binary dictionary-term vector and the
    term's filtered co-occurrence profile; 0 when either vector is zero."""
    col_norm = cooc_filtered.column_norm(term)
    if col_norm == 0.0 or s_norm == 0.0:
        return 0.0
    dot = sum(cooc_filtered.get(other, term) for other in present)
    if dot == 0.0:
        return 0.0
    return dot / (s_norm * col_norm)


def tfsim(term: str, d: Document, cooc_filtered: CoocMatrix, config: ScoringConfig) -> float:
    """Context-aware replacement for tf(w,d).

    Sums, over sentences containing the term, the in-sentence frequency plus
    alpha times the context similarity.  With alpha = 0 this is exactly
    tf(w,d); in context-only mode the frequency term is dropped.
    """
    if term not in cooc_filtered:
        raise ValueError(f"term {term!r} not in dictionary")
    dict_terms = frozenset(cooc_filtered.terms)
    total = 0.0
    for sentence in d.sentences:
        present, s_norm = _sentence_profile(sentence, dict_terms)
        if term not in present:
            continue
        if config.mode != "context-only":
            total += float(present[term])
        if config.alpha > 0.0:
            total += config.alpha * _context_similarity(term, present, s_norm, cooc_filtered)
    return total


def score_context(
    q: Dictionary,
    d: Document,
    cooc_filtered: CoocMatrix,
    norms: CollectionNorms,
    config: ScoringConfig,
) -> float:
    """Context-sensitive score: the unigram formula with tf replaced by tfsim."""
    if len(q) == 0:
        raise ValueError("dictionary is empty")
    if d.id in norms.empty_doc_ids:
        return 0.0
    dict_terms = frozenset(cooc_filtered.terms)
    sim: dict[str, float] = {}
    for sentence in d.sentences:
        present, s_norm = _sentence_profile(sentence, dict_terms)
        for term, count in present.items():
            value = 0.0
            if config.mode != "context-only":
                value += float(count)
            if config.alpha > 0.0:
                value += config.alpha * _context_similarity(term, present, s_norm, cooc_filtered)
            sim[term] = sim.get(term, 0.0) + value
    log_avgtf = math.log(norms.avgtf[d.id])
    norm = norms.norm[d.id]
    score = 0.0
    for entry in q.entries:
        tfsim_value = sim.get(entry.term, 0.0)
        if tfsim_value > 0.0:
            score += _term_contribution(tfsim_value, log_avgtf, entry.boost, norm)
    return score
