"""Ranked dictionary extraction and retrieval boost factors.

Two extraction routes: topic-model weights (log term frequency times the
summed per-topic word probabilities of the retained topics) and a plain
tf-idf baseline over the reference collection.  Either way the result is a
ranked list of N terms where rank feeds the boost factor 1/sqrt(rank).
Natural log throughout; ties in every ranking break lexicographically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .corpus import Corpus, TermStats, term_stats
from .topics import TopicModelResult

METHOD_TOPIC_MODEL = "topic-model"
METHOD_TFIDF = "tfidf"

# short labels used in system ids
METHOD_LABELS = {METHOD_TOPIC_MODEL: "tm", METHOD_TFIDF: "tfidf"}


def boost(rank: int) -> float:
    """Rank-derived boost in (0, 1]: the head of the dictionary matters most,
    terms near the tail are of near-equal importance."""
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    return 1.0 / math.sqrt(rank)


@dataclass(frozen=True)
class DictionaryEntry:
    term: str
    weight: float
    rank: int
    boost: float


@dataclass
class Dictionary:
    """Ordered dictionary of ranked terms with weights and boost factors."""

    entries: list[DictionaryEntry]
    method: str
    _index: dict[str, DictionaryEntry] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.method not in METHOD_LABELS:
            raise ValueError(f"unknown dictionary method {self.method!r}")
        self._index = {e.term: e for e in self.entries}
        if len(self._index) != len(self.entries):
            raise ValueError("dictionary terms must be unique")

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, term: str) -> bool:
        return term in self._index

    def __iter__(self):
        return iter(self.entries)

    def entry(self, term: str) -> DictionaryEntry:
        return self._index[term]

    @property
    def terms(self) -> tuple[str, ...]:
        return tuple(e.term for e in self.entries)

    @property
    def method_label(self) -> str:
        return METHOD_LABELS[self.method]


def term_weight(term: str, model: TopicModelResult, stats: TermStats) -> float:
    """ln(tf(w)) times the summed p(w|topic) over non-excluded topics."""
    retained = model.retained_topics()
    if not retained:
        raise ValueError("all topics excluded")
    if term not in stats.tf or term not in model.vocab_index:
        raise ValueError(f"unknown term {term!r}")
    col = model.vocab_index[term]
    prob_sum = sum(float(model.phi[k - 1, col]) for k in retained)
    return math.log(stats.tf[term]) * prob_sum


def _build_entries(weighted: list[tuple[str, float]], n: int) -> list[DictionaryEntry]:
    weighted.sort(key=lambda item: (-item[1], item[0]))
    return [
        DictionaryEntry(term=term, weight=weight, rank=rank, boost=boost(rank))
        for rank, (term, weight) in enumerate(weighted[:n], start=1)
    ]


def extract_dictionary_tm(model: TopicModelResult, stats: TermStats, n: int) -> Dictionary:
    """Top-n terms by topic-model weight (clamped to vocabulary size)."""
    if n < 1:
        raise ValueError("dictionary size must be >= 1")
    if not model.retained_topics():
        raise ValueError("all topics excluded")
    weighted = [(term, term_weight(term, model, stats)) for term in model.vocab]
    return Dictionary(entries=_build_entries(weighted, n), method=METHOD_TOPIC_MODEL)


def extract_dictionary_tfidf(reference: Corpus, n: int) -> Dictionary:
    """Baseline: top-n terms by tf(w) * ln(|D|/df(w)) within the reference."""
    if n < 1:
        raise ValueError("dictionary size must be >= 1")
    if len(reference.documents) < 2:
        raise ValueError("idf undefined: all idf terms zero (reference has a single document)")
    stats = term_stats(reference)
    n_docs = len(reference.documents)
    weighted = [
        (term, stats.tf[term] * math.log(n_docs / stats.df[term]))
        for term in reference.vocabulary
    ]
    return Dictionary(entries=_build_entries(weighted, n), method=METHOD_TFIDF)


def save_dictionary(dictionary: Dictionary, path) -> None:
    """TSV `rank<TAB>term<TAB>weight<TAB>boost`, full decimal precision."""
    with open(path, "w", encoding="utf-8") as out:
        out.write(f"#dictsieve-dictionary\tmethod={dictionary.method}\tn={len(dictionary)}\n")
        for e in dictionary.entries:
            out.write(f"{e.rank}\t{e.term}\t{e.weight!r}\t{e.boost!r}\n")


def load_dictionary(path) -> Dictionary:
    with open(path, "r", encoding="utf-8") as stream:
        header = stream.readline().rstrip("\n")
        if not header.startswith("#dictsieve-dictionary"):
            raise ValueError(f"not a dictionary file: {path}")
        method = dict(f.split("=", 1) for f in header.split("\t")[1:])["method"]
        entries = []
        for line in stream:
            if not line.strip():
                continue
            rank, term, weight, boost_value = line.rstrip("\n").split("\t")
            entries.append(
                DictionaryEntry(term=term, weight=float(weight), rank=int(rank), boost=float(boost_value))
            )
    return Dictionary(entries=entries, method=method)
