"""Sentence-window Dice co-occurrence matrices over dictionary terms.

A term pair counts once per sentence regardless of how often either term
repeats inside it.  The reference-corpus matrix C captures domain-specific
term associations; the generic-corpus matrix D captures common-language
regularities; the filtered matrix max(C - D, 0) keeps only the surplus
specific to the reference collection.  Values live in [0, 1] so matrices
from different corpora are directly comparable, which is what makes the
subtraction meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import Corpus
from .dictionary import Dictionary

PROVENANCES = ("reference", "generic", "filtered")


def dice(n_a: int, n_b: int, n_ab: int) -> float:
    """2*n_ab / (n_a + n_b) over sentence counts."""
    if n_a + n_b == 0:
        raise ValueError("dice undefined: n_a + n_b = 0")
    if n_ab > min(n_a, n_b):
        raise ValueError(f"n_ab={n_ab} exceeds min(n_a={n_a}, n_b={n_b})")
    return 2.0 * n_ab / (n_a + n_b)


def _pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a < b else (b, a)


@dataclass
class CoocMatrix:
    """Sparse symmetric matrix of Dice values over the dictionary terms.

    Keys are term pairs ordered lexicographically; the diagonal is defined
    as 0 and never stored, so a term's context profile excludes itself.
    """

    terms: tuple[str, ...]
    values: dict[tuple[str, str], float]
    provenance: str
    _term_pos: dict[str, int] = field(init=False, repr=False)
    _col_norms: dict[str, float] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        self._term_pos = {t: i for i, t in enumerate(self.terms)}
        self._col_norms = {}

    def __contains__(self, term: str) -> bool:
        return term in self._term_pos

    def get(self, a: str, b: str) -> float:
        if a == b:
            return 0.0
        return self.values.get(_pair(a, b), 0.0)

    def column(self, term: str) -> np.ndarray:
        """Context profile of ``term``: its row/column in dictionary order."""
        if term not in self._term_pos:
            raise ValueError(f"term {term!r} not in matrix")
        col = np.zeros(len(self.terms))
        for other, value in self.iter_term(term):
            col[self._term_pos[other]] = value
        return col

    def iter_term(self, term: str):
        for (a, b), value in self.values.items():
            if a == term:
                yield b, value
            elif b == term:
                yield a, value

    def column_norm(self, term: str) -> float:
        """Euclidean norm of the context profile; all norms cached on first use."""
        if not self._col_norms:
            sums: dict[str, float] = {t: 0.0 for t in self.terms}
            for (a, b), value in self.values.items():
                sums[a] += value * value
                sums[b] += value * value
            self._col_norms = {t: math.sqrt(s) for t, s in sums.items()}
        return self._col_norms[term]


def build_cooc(corpus: Corpus, dictionary: Dictionary) -> CoocMatrix:
    """Count sentence co-occurrences of dictionary terms and apply Dice.

    n_x counts sentences containing x at least once; pairs never seen in a
    common sentence are omitted from sparse storage.
    """
    if len(dictionary) == 0:
        raise ValueError("dictionary is empty")
    if not corpus.documents:
        raise ValueError("corpus is empty")
    dict_terms = set(dictionary.terms)
    n_single: dict[str, int] = {}
    n_joint: dict[tuple[str, str], int] = {}
    for doc in corpus.documents:
        for sentence in doc.sentences:
            present = sorted(dict_terms.intersection(sentence))
            for i, a in enumerate(present):
                n_single[a] = n_single.get(a, 0) + 1
                for b in present[i + 1 :]:
                    key = (a, b)
                    n_joint[key] = n_joint.get(key, 0) + 1
    values = {
        pair: dice(n_single[pair[0]], n_single[pair[1]], n_ab)
        for pair, n_ab in n_joint.items()
    }
    return CoocMatrix(terms=dictionary.terms, values=values, provenance=corpus.role)


def filter_cooc(reference: CoocMatrix, generic: CoocMatrix) -> CoocMatrix:
    """Entrywise max(C - D, 0); pairs absent from the generic matrix pass
    through unchanged, entries that would go negative are dropped."""
    if reference.provenance != "reference":
        raise ValueError(f"expected a reference matrix, got provenance {reference.provenance!r}")
    if generic.provenance != "generic":
        raise ValueError(f"expected a generic matrix, got provenance {generic.provenance!r}")
    if reference.terms != generic.terms:
        raise ValueError("term lists of the two matrices do not match")
    values = {}
    for pair, c_value in reference.values.items():
        filtered = c_value - generic.values.get(pair, 0.0)
        if filtered > 0.0:
            values[pair] = filtered
    return CoocMatrix(terms=reference.terms, values=values, provenance="filtered")


def save_cooc(matrix: CoocMatrix, path) -> None:
    """TSV triplets `term_a<TAB>term_b<TAB>value`, term_a < term_b."""
    with open(path, "w", encoding="utf-8") as out:
        out.write(f"#dictsieve-cooc\tprovenance={matrix.provenance}\tn={len(matrix.terms)}\n")
        out.write("#terms\t" + "\t".join(matrix.terms) + "\n")
        for a, b in sorted(matrix.values):
            out.write(f"{a}\t{b}\t{matrix.values[(a, b)]!r}\n")


def load_cooc(path) -> CoocMatrix:
    with open(path, "r", encoding="utf-8") as stream:
        header = stream.readline().rstrip("\n")
        if not header.startswith("#dictsieve-cooc"):
            raise ValueError(f"not a co-occurrence matrix file: {path}")
        provenance = dict(f.split("=", 1) for f in header.split("\t")[1:])["provenance"]
        terms_line = stream.readline().rstrip("\n").split("\t")
        if terms_line[0] != "#terms":
            raise ValueError(f"missing term list in {path}")
        terms = tuple(terms_line[1:])
        values = {}
        for line in stream:
            if not line.strip():
                continue
            a, b, value = line.rstrip("\n").split("\t")
            values[(a, b)] = float(value)
    return CoocMatrix(terms=terms, values=values, provenance=provenance)
