"""Corpus ingestion and term frequency statistics.

A document is an ordered list of sentences, each sentence an ordered list of
token strings.  Corpora arrive either pre-segmented as JSONL (the canonical
interchange format, which lets external lemmatizers and sentence splitters do
the heavy lifting) or as a directory of plaintext files that are segmented
and tokenized here with a deterministic, language-neutral baseline.
"""

from __future__ import annotations

import io
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

ROLES = ("reference", "generic", "target")

# Unicode letters and digits; punctuation and underscore split tokens.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

# Sentence ends at . ! ? followed by whitespace or end of text.
_SENTENCE_RE = re.compile(r"[.!?](?:\s+|$)")


def tokenize(text: str) -> list[str]:
    """Lowercase and split on whitespace/punctuation, keeping digits."""
    return _TOKEN_RE.findall(text.lower())


def split_sentences(text: str) -> list[str]:
    return [s for s in _SENTENCE_RE.split(text) if s.strip()]


@dataclass
class Document:
    """One document: an id plus ordered, tokenized sentences.

    ``paragraphs`` optionally groups sentence indices into paragraph units;
    topic modeling treats each group as a separate modeling document when
    present.
    """

    id: str
    sentences: list[list[str]]
    paragraphs: list[list[int]] | None = None

    def tokens(self) -> list[str]:
        return [t for sentence in self.sentences for t in sentence]

    @property
    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)


@dataclass
class Corpus:
    """A collection of documents with a role tag and derived vocabulary."""

    documents: list[Document]
    role: str
    vocabulary: frozenset[str] = field(init=False)

    def __post_init__(self) -> None:
        if self.role not in ROLES:
            raise ValueError(f"unknown corpus role {self.role!r}, expected one of {ROLES}")
        seen: set[str] = set()
        vocab: set[str] = set()
        for doc in self.documents:
            if doc.id in seen:
                raise ValueError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)
            for sentence in doc.sentences:
                vocab.update(sentence)
        self.vocabulary = frozenset(vocab)

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)


class TermStats:
    """Frequency statistics over a corpus.

    Exposes corpus-wide term frequency tf(w), per-document tf(w,d), document
    frequency df(w), and the unique-term set of each document.  Per-sentence
    frequencies tf(w,s) are cheap to count on demand and are provided as a
    helper rather than materialized.
    """

    def __init__(self, tf: Counter, df: Counter, tf_doc: dict[str, Counter]):
        self.tf = tf
        self.df = df
        self.tf_doc = tf_doc

    def unique_terms(self, doc_id: str) -> set[str]:
        """U_d: the set of distinct terms of a document."""
        return set(self.tf_doc[doc_id])

    @staticmethod
    def tf_sentence(sentence: list[str], term: str) -> int:
        return sentence.count(term)


def term_stats(corpus: Corpus) -> TermStats:
    """Count tf(w), tf(w,d) and df(w) for every term of the corpus."""
    if not corpus.documents:
        raise ValueError("cannot compute term statistics of an empty corpus")
    tf: Counter = Counter()
    df: Counter = Counter()
    tf_doc: dict[str, Counter] = {}
    for doc in corpus.documents:
        counts = Counter(doc.tokens())
        tf_doc[doc.id] = counts
        tf.update(counts)
        df.update(counts.keys())
    return TermStats(tf, df, tf_doc)


def _parse_jsonl_record(line: str, index: int) -> Document:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSONL record {index}: {exc}") from None
    if not isinstance(record, dict) or "id" not in record or "sentences" not in record:
        raise ValueError(f"malformed JSONL record {index}: expected object with 'id' and 'sentences'")
    doc_id = record["id"]
    sentences = record["sentences"]
    if not isinstance(doc_id, str) or not isinstance(sentences, list):
        raise ValueError(f"malformed JSONL record {index}: 'id' must be a string and 'sentences' a list")
    cleaned: list[list[str]] = []
    for sentence in sentences:
        if not isinstance(sentence, list) or any(not isinstance(t, str) or not t for t in sentence):
            raise ValueError(f"malformed JSONL record {index}: sentences must be lists of non-empty strings")
        if sentence:
            cleaned.append(list(sentence))
    paragraphs = record.get("paragraphs")
    if paragraphs is not None:
        if not isinstance(paragraphs, list) or any(
            not isinstance(p, list) or any(not isinstance(i, int) for i in p) for p in paragraphs
        ):
            raise ValueError(f"malformed JSONL record {index}: 'paragraphs' must be lists of sentence indices")
        paragraphs = [list(p) for p in paragraphs]
    return Document(id=doc_id, sentences=cleaned, paragraphs=paragraphs)


def _ingest_jsonl(stream: io.TextIOBase, role: str) -> Corpus:
    documents = []
    for index, line in enumerate(stream):
        if not line.strip():
            continue
        documents.append(_parse_jsonl_record(line, index))
    if not documents:
        raise ValueError("zero documents after parsing")
    return Corpus(documents=documents, role=role)


def _ingest_plaintext_dir(directory: Path, role: str) -> Corpus:
    documents = []
    for path in sorted(directory.glob("*.txt")):
        text = path.read_text(encoding="utf-8")
        sentences = [tokens for raw in split_sentences(text) if (tokens := tokenize(raw))]
        documents.append(Document(id=path.stem, sentences=sentences))
    if not documents:
        raise ValueError(f"zero documents found under {directory}")
    return Corpus(documents=documents, role=role)


def ingest_corpus(source, format: str = "jsonl", role: str = "target") -> Corpus:
    """Read a corpus from ``source``.

    ``source`` is a file path (either format) or an open text stream (JSONL
    only).  ``format`` is ``jsonl`` or ``plaintext-dir``.  Empty sentences are
    dropped; a corpus with zero documents is an error.
    """
    if format == "jsonl":
        if hasattr(source, "read"):
            return _ingest_jsonl(source, role)
        with open(source, "r", encoding="utf-8") as stream:
            return _ingest_jsonl(stream, role)
    if format == "plaintext-dir":
        directory = Path(source)
        if not directory.is_dir():
            raise ValueError(f"not a directory: {directory}")
        return _ingest_plaintext_dir(directory, role)
    raise ValueError(f"unknown corpus format {format!r}")


def export_corpus(corpus: Corpus, path) -> None:
    """Write a corpus as canonical JSONL; round-trips through ingest_corpus."""
    with open(path, "w", encoding="utf-8") as out:
        for doc in corpus.documents:
            record: dict = {"id": doc.id, "sentences": doc.sentences}
            if doc.paragraphs is not None:
                record["paragraphs"] = doc.paragraphs
            out.write(json.dumps(record, ensure_ascii=False) + "\n")
