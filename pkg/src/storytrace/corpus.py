"""Corpus ingestion: JSONL parsing, entity vocabulary, tf-idf weighting.

A corpus is a set of dated documents annotated with typed, counted
entities. Document vectors use raw term frequency times ln(N / df)
inverse document frequency and are cosine normalized, so every
non-empty vector sits on the unit L2 sphere. Entities that occur in
every document carry zero idf and are dropped from the sparse vectors.
"""

from __future__ import annotations

import datetime
import json
import math
import re
import warnings
from dataclasses import dataclass, field

ENTITY_TYPES = ("person", "organization", "location", "other")


class CorpusError(ValueError):
    """A corpus file or record failed validation."""


@dataclass(frozen=True)
class Document:
    """A raw document record, before any weighting.

    Entities are (name, type, count) triples; topics, when present,
    is the ingested topic distribution for the document.
    """

    id: str
    date: datetime.date
    title: str
    text: str | None = None
    entities: tuple[tuple[str, str, int], ...] = ()
    topics: tuple[float, ...] | None = None


@dataclass
class EntityVocabulary:
    """Dense entity index with per-entity document frequencies."""

    names: list[str]
    document_frequency: list[int]
    index: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {name: i for i, name in enumerate(self.names)}

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self.index


@dataclass
class WeightedDocument:
    """A document reduced to its tf-idf entity vector.

    ``weights`` maps entity index to tf-idf weight (unit L2 norm over
    the document, strictly positive entries only). ``counts`` keeps the
    raw occurrence counts, which later stages use as token counts.
    """

    doc_id: str
    timestamp: datetime.date
    weights: dict[int, float]
    counts: dict[int, int]
    title: str = ""


@dataclass
class Corpus:
    """Weighted documents sorted by (date, id) plus their vocabulary."""

    documents: list[WeightedDocument]
    vocabulary: EntityVocabulary
    raw_documents: list[Document]
    _by_id: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._by_id:
            self._by_id = {d.doc_id: i for i, d in enumerate(self.documents)}

    def __len__(self) -> int:
        return len(self.documents)

    def index_of(self, doc_id: str) -> int:
        try:
            return self._by_id[doc_id]
        except KeyError:
            raise CorpusError(f"unknown document id {doc_id!r}") from None

    def document(self, doc_id: str) -> WeightedDocument:
        return self.documents[self.index_of(doc_id)]

    def inline_topics(self) -> list[tuple[float, ...]] | None:
        """Topic vectors carried inside the corpus file, if any."""
        if self.raw_documents and self.raw_documents[0].topics is not None:
            return [d.topics for d in self.raw_documents]
        return None


_EDGE_PUNCT = re.compile(r"^[^0-9A-Za-z]+|[^0-9A-Za-z]+$")
_SENTENCE_SPLIT = re.compile(r"[.!?]+(?:\s+|$)")


def fallback_extract_entities(text: str) -> list[tuple[str, str, int]]:
    """Extract capitalized token runs as untyped entities.

    A maximal run of consecutive capitalized tokens inside one sentence
    is a candidate entity. Names seen only at the very start of
    sentences are discarded (usually just capitalized sentence
    openers), but a name that also appears mid-sentence keeps all of
    its occurrences, sentence-initial ones included. Token edges are
    stripped of punctuation before the capital check.

    Returns (name, "other", count) triples in first-appearance order.
    """
    if not text:
        return []
    counts: dict[str, int] = {}
    qualified: dict[str, bool] = {}
    for sentence in _SENTENCE_SPLIT.split(text):
        tokens = [_EDGE_PUNCT.sub("", tok) for tok in sentence.split()]
        caps = [bool(tok) and tok[0].isupper() for tok in tokens]
        i = 0
        while i < len(tokens):
            if not caps[i]:
                i += 1
                continue
            j = i
            while j < len(tokens) and caps[j]:
                j += 1
            name = " ".join(tokens[i:j])
            counts[name] = counts.get(name, 0) + 1
            qualified[name] = qualified.get(name, False) or i > 0
            i = j
    return [(name, "other", counts[name]) for name in counts if qualified[name]]


def compute_tf_idf(
    raw_counts: list[dict[str, int]], vocabulary: EntityVocabulary
) -> list[dict[int, float]]:
    """Turn per-document entity counts into normalized tf-idf vectors.

    Parameters
    ----------
    raw_counts : list of dict
        One name -> count map per document, covering the whole corpus
        (the corpus size that idf needs is ``len(raw_counts)``).
    vocabulary : EntityVocabulary
        Index and document frequencies for every entity that appears.

    Returns
    -------
    list of dict
        One sparse entity_index -> weight map per document. Each
        non-empty vector has unit L2 norm; zero-weight entries (idf 0)
        are omitted.
    """
    n_docs = len(raw_counts)
    vectors: list[dict[int, float]] = []
    for counts in raw_counts:
        vec: dict[int, float] = {}
        for name, count in counts.items():
            if name not in vocabulary:
                raise CorpusError(f"entity {name!r} missing from vocabulary")
            idx = vocabulary.index[name]
            idf = math.log(n_docs / vocabulary.document_frequency[idx])
            weight = count * idf
            if weight > 0.0:
                vec[idx] = weight
        norm = math.sqrt(math.fsum(w * w for w in vec.values()))
        if norm > 0.0:
            vec = {i: w / norm for i, w in vec.items()}
        vectors.append(vec)
    return vectors


def build_corpus(raw_documents: list[Document]) -> Corpus:
    """Assemble a Corpus (sorted, indexed, weighted) from raw records."""
    if not raw_documents:
        raise CorpusError("corpus is empty")
    docs = sorted(raw_documents, key=lambda d: (d.date, d.id))
    n_with_topics = sum(1 for d in docs if d.topics is not None)
    if 0 < n_with_topics < len(docs):
        raise CorpusError(
            "inline topic vectors must cover every document or none "
            f"({n_with_topics} of {len(docs)} documents have them)"
        )
    if n_with_topics:
        lengths = {len(d.topics) for d in docs}
        if len(lengths) != 1:
            raise CorpusError(
                f"inline topic vectors disagree on length: {sorted(lengths)}"
            )
    names: list[str] = []
    index: dict[str, int] = {}
    df: list[int] = []
    per_doc_counts: list[dict[str, int]] = []
    for doc in docs:
        counts: dict[str, int] = {}
        for name, _etype, count in doc.entities:
            counts[name] = counts.get(name, 0) + count
        per_doc_counts.append(counts)
        for name in counts:
            if name not in index:
                index[name] = len(names)
                names.append(name)
                df.append(0)
            df[index[name]] += 1
    vocabulary = EntityVocabulary(names, df, index)
    vectors = compute_tf_idf(per_doc_counts, vocabulary)
    weighted = []
    for doc, counts, vec in zip(docs, per_doc_counts, vectors):
        if not counts:
            warnings.warn(f"document {doc.id!r} has no entities; vector left empty")
        weighted.append(
            WeightedDocument(
                doc_id=doc.id,
                timestamp=doc.date,
                weights=vec,
                counts={index[name]: c for name, c in counts.items()},
                title=doc.title,
            )
        )
    return Corpus(documents=weighted, vocabulary=vocabulary, raw_documents=docs)


def _validate_entities(entries, lineno: int) -> list[tuple[str, str, int]]:
    if not isinstance(entries, list):
        raise CorpusError(f"line {lineno}: 'entities' must be a list")
    merged: dict[str, list] = {}
    for entry in entries:
        if not isinstance(entry, dict):
            raise CorpusError(f"line {lineno}: entity entries must be objects")
        name = entry.get("name")
        if not isinstance(name, str) or not name:
            raise CorpusError(f"line {lineno}: entity missing a non-empty 'name'")
        etype = entry.get("type")
        if etype not in ENTITY_TYPES:
            raise CorpusError(
                f"line {lineno}: entity {name!r} has invalid type {etype!r} "
                f"(expected one of {', '.join(ENTITY_TYPES)})"
            )
        count = entry.get("count")
        if isinstance(count, bool) or not isinstance(count, int) or count < 1:
            raise CorpusError(
                f"line {lineno}: entity {name!r} needs an integer count >= 1"
            )
        if name in merged:
            merged[name][1] += count
        else:
            merged[name] = [etype, count]
    return [(name, etype, count) for name, (etype, count) in merged.items()]


def _parse_record(record, lineno: int) -> Document:
    if not isinstance(record, dict):
        raise CorpusError(f"line {lineno}: document record must be a JSON object")
    doc_id = record.get("id")
    if not isinstance(doc_id, str) or not doc_id:
        raise CorpusError(f"line {lineno}: missing or invalid 'id'")
    raw_date = record.get("date")
    if not isinstance(raw_date, str):
        raise CorpusError(f"line {lineno}: missing 'date' field")
    try:
        day = datetime.date.fromisoformat(raw_date)
    except ValueError as exc:
        raise CorpusError(f"line {lineno}: unparseable date {raw_date!r}") from exc
    title = record.get("title")
    if not isinstance(title, str):
        raise CorpusError(f"line {lineno}: missing 'title' field")
    text = record.get("text")
    if text is not None and not isinstance(text, str):
        raise CorpusError(f"line {lineno}: 'text' must be a string")
    entities = record.get("entities")
    if entities is None:
        extracted = fallback_extract_entities(text) if text else []
    else:
        extracted = _validate_entities(entities, lineno)
    topics = record.get("topics")
    if topics is not None:
        ok = isinstance(topics, list) and topics and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in topics
        )
        if not ok:
            raise CorpusError(
                f"line {lineno}: 'topics' must be a non-empty list of numbers"
            )
        topics = tuple(float(x) for x in topics)
    return Document(
        id=doc_id,
        date=day,
        title=title,
        text=text,
        entities=tuple(extracted),
        topics=topics,
    )


def parse_corpus(path, format: str = "jsonl") -> Corpus:
    """Parse a JSONL corpus file into a weighted Corpus.

    Raises CorpusError with the offending line number on malformed
    records, naming the id on duplicates, and on an empty corpus.
    """
    if format != "jsonl":
        raise CorpusError(f"unsupported corpus format {format!r}")
    raw_docs: list[Document] = []
    seen: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
            doc = _parse_record(record, lineno)
            if doc.id in seen:
                raise CorpusError(
                    f"line {lineno}: duplicate document id {doc.id!r} "
                    f"(first seen on line {seen[doc.id]})"
                )
            seen[doc.id] = lineno
            raw_docs.append(doc)
    if not raw_docs:
        raise CorpusError(f"{path}: corpus is empty")
    return build_corpus(raw_docs)


def document_record(doc: Document) -> dict:
    """The JSONL representation of one raw document."""
    record: dict = {"id": doc.id, "date": doc.date.isoformat(), "title": doc.title}
    if doc.text is not None:
        record["text"] = doc.text
    record["entities"] = [
        {"name": name, "type": etype, "count": count}
        for name, etype, count in doc.entities
    ]
    if doc.topics is not None:
        record["topics"] = list(doc.topics)
    return record


def serialize_corpus(corpus: Corpus, path) -> None:
    """Write the corpus back out as JSONL (inverse of parse_corpus)."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc in corpus.raw_documents:
            fh.write(json.dumps(document_record(doc), ensure_ascii=False) + "\n")
