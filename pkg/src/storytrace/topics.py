"""Per-document topic distributions and the KL divergence that filters on them.

Topic vectors come from one of three sources, in order of precedence:
arrays carried inline in the corpus file, a sidecar JSONL file, or the
reference LDA below (collapsed Gibbs sampling over entity tokens). The
three are never mixed within one corpus.
"""

from __future__ import annotations

import json
import warnings

import numpy as np

from .corpus import Corpus, CorpusError

KL_EPSILON = 1e-10

LDA_BETA = 0.01


def kl_divergence(p, q) -> float:
    """KL(p || q) with flooring so sparse vectors stay finite.

    Both arguments are floored at 1e-10 and renormalized before the
    sum, so components that are exactly zero contribute negligibly
    instead of producing infinities.

    Parameters
    ----------
    p, q : array_like
        Topic distributions of equal length.

    Returns
    -------
    float
        Sum of p_i * ln(p_i / q_i), never negative.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(
            f"topic dimension mismatch: {p.shape} vs {q.shape}"
        )
    p = np.maximum(p, KL_EPSILON)
    p = p / p.sum()
    q = np.maximum(q, KL_EPSILON)
    q = q / q.sum()
    return max(0.0, float(np.sum(p * np.log(p / q))))


def validate_topic_distributions(topics, n_docs: int) -> list[np.ndarray]:
    """Check shape, non-negativity, and normalization of ingested topics."""
    if len(topics) != n_docs:
        raise CorpusError(
            f"expected {n_docs} topic vectors, got {len(topics)}"
        )
    arrays = [np.asarray(t, dtype=float) for t in topics]
    lengths = {a.shape for a in arrays}
    if len(lengths) != 1:
        raise CorpusError(f"topic vectors disagree on length: {sorted(lengths)}")
    for i, a in enumerate(arrays):
        if a.ndim != 1 or a.size == 0:
            raise CorpusError(f"topic vector {i} is not a flat non-empty array")
        if np.any(a < 0):
            raise CorpusError(f"topic vector {i} has negative components")
        if abs(float(a.sum()) - 1.0) > 1e-6:
            raise CorpusError(
                f"topic vector {i} sums to {float(a.sum()):.8f}, expected 1"
            )
    return arrays


def fit_reference_lda(
    corpus: Corpus, k: int, iterations: int = 100, rng_seed: int = 0
) -> list[np.ndarray]:
    """Collapsed Gibbs LDA over entity tokens, one distribution per document.

    Entities act as tokens, repeated by their occurrence count. Priors
    are symmetric (alpha = 50/k on topics, beta = 0.01 on tokens) and
    theta is read off the final sample's assignment counts. The chain
    is fully determined by ``rng_seed``.

    Parameters
    ----------
    corpus : Corpus
        Parsed corpus; vocabulary must have at least ``k`` entities.
    k : int
        Number of topics, at least 2.
    iterations : int
        Gibbs sweeps over the whole token stream.
    rng_seed : int
        Seed for the sampling chain.

    Returns
    -------
    list of ndarray
        One length-k distribution per document, summing to 1 within
        1e-6. Documents without entities get the uniform distribution
        and a warning.
    """
    if k < 2:
        raise ValueError(f"topic count must be at least 2, got {k}")
    n_vocab = len(corpus.vocabulary)
    if k > n_vocab:
        raise ValueError(
            f"topic count {k} exceeds vocabulary size {n_vocab}"
        )
    alpha = 50.0 / k
    beta = LDA_BETA
    rng = np.random.default_rng(rng_seed)

    doc_tokens: list[np.ndarray] = []
    for doc in corpus.documents:
        tokens = []
        for idx, count in doc.counts.items():
            tokens.extend([idx] * count)
        doc_tokens.append(np.asarray(tokens, dtype=np.intp))

    n_dk = np.zeros((len(corpus), k), dtype=np.int64)
    n_kw = np.zeros((k, n_vocab), dtype=np.int64)
    n_k = np.zeros(k, dtype=np.int64)
    assignments: list[np.ndarray] = []
    for d, tokens in enumerate(doc_tokens):
        z = rng.integers(0, k, size=len(tokens))
        assignments.append(z)
        for w, topic in zip(tokens, z):
            n_dk[d, topic] += 1
            n_kw[topic, w] += 1
            n_k[topic] += 1

    vbeta = n_vocab * beta
    for _ in range(iterations):
        for d, tokens in enumerate(doc_tokens):
            z = assignments[d]
            for pos, w in enumerate(tokens):
                topic = z[pos]
                n_dk[d, topic] -= 1
                n_kw[topic, w] -= 1
                n_k[topic] -= 1
                probs = (n_dk[d] + alpha) * (n_kw[:, w] + beta) / (n_k + vbeta)
                cdf = np.cumsum(probs)
                topic = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
                topic = min(topic, k - 1)
                z[pos] = topic
                n_dk[d, topic] += 1
                n_kw[topic, w] += 1
                n_k[topic] += 1

    theta: list[np.ndarray] = []
    for d, tokens in enumerate(doc_tokens):
        if len(tokens) == 0:
            warnings.warn(
                f"document {corpus.documents[d].doc_id!r} has no entities; "
                "assigning a uniform topic distribution"
            )
            theta.append(np.full(k, 1.0 / k))
            continue
        dist = (n_dk[d] + alpha) / (len(tokens) + k * alpha)
        theta.append(dist)
    return theta


def load_topics_sidecar(path, corpus: Corpus) -> list[np.ndarray]:
    """Read a JSONL sidecar of {"id", "topics"} rows aligned to the corpus.

    Every corpus document must appear exactly once; unknown or repeated
    ids are rejected by name.
    """
    rows: dict[str, list] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
            doc_id = record.get("id")
            topics = record.get("topics")
            if not isinstance(doc_id, str) or not isinstance(topics, list):
                raise CorpusError(
                    f"line {lineno}: sidecar rows need a string 'id' and a 'topics' list"
                )
            if doc_id in rows:
                raise CorpusError(f"line {lineno}: duplicate sidecar id {doc_id!r}")
            corpus.index_of(doc_id)
            rows[doc_id] = topics
    missing = [d.doc_id for d in corpus.documents if d.doc_id not in rows]
    if missing:
        raise CorpusError(
            f"topics sidecar is missing {len(missing)} document(s), "
            f"first: {missing[0]!r}"
        )
    ordered = [rows[d.doc_id] for d in corpus.documents]
    return validate_topic_distributions(ordered, len(corpus))


def resolve_topics(
    corpus: Corpus,
    sidecar_path=None,
    lda_k: int | None = None,
    lda_iterations: int = 100,
    lda_seed: int = 0,
) -> list[np.ndarray] | None:
    """Pick the topic source for a corpus.

    Inline vectors (in the corpus file) win over a sidecar, which wins
    over the reference LDA; with none of the three available, returns
    None (callers may still run with topical filtering disabled).
    """
    inline = corpus.inline_topics()
    if inline is not None:
        return validate_topic_distributions(inline, len(corpus))
    if sidecar_path is not None:
        return load_topics_sidecar(sidecar_path, corpus)
    if lda_k is not None:
        return fit_reference_lda(corpus, lda_k, lda_iterations, lda_seed)
    return None
