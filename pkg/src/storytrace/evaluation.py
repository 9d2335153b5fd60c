"""Chain quality metrics, baseline chain builders, and stability checks."""

import dataclasses

import numpy as np

from .objective import soergel


class EvaluationError(ValueError):
    """Raised when an evaluation routine gets unusable input."""


@dataclasses.dataclass(frozen=True)
class Chain:
    """An ordered document chain, oldest first."""

    doc_ids: tuple
    truncated: bool = False

    def __len__(self):
        return len(self.doc_ids)


@dataclasses.dataclass(frozen=True)
class SignificanceConfig:
    """Monte-Carlo sample count and matching tolerance."""

    num_samples: int = 1000
    tolerance: float = 5.0

    def __post_init__(self):
        if self.num_samples < 1:
            raise ValueError("num_samples must be at least 1")
        if self.tolerance < 0:
            raise ValueError("tolerance must be non-negative")


@dataclasses.dataclass(frozen=True)
class RepeatabilityConfig:
    """Per-coordinate distance threshold and required match count."""

    distance_threshold: float = 1.0
    min_matches: int = 1

    def __post_init__(self):
        if self.distance_threshold < 0:
            raise ValueError("distance_threshold must be non-negative")
        if self.min_matches < 1:
            raise ValueError("min_matches must be at least 1")


def story_chain(story):
    """Top-ranked document of each segment, oldest segment first."""
    doc_ids = []
    empty = False
    for segment in story.segments:
        if segment.docs:
            doc_ids.append(segment.docs[0].doc_id)
        else:
            empty = True
    return Chain(doc_ids=tuple(doc_ids), truncated=empty)


def dispersion_coefficient(chain, corpus, theta):
    """Score how well a chain avoids clumping around near-duplicates.

    Parameters
    ----------
    chain : Chain
        At least three documents, oldest first.
    corpus : Corpus
        Supplies the weighted documents the chain references.
    theta : float
        Distance threshold; non-adjacent pairs closer than this (strict)
        are penalized, with nearer-in-position pairs costing more.

    Returns
    -------
    float
        A value in [0, 1]; 1 means no non-adjacent pair falls within
        ``theta``.
    """
    n = len(chain)
    if n < 3:
        raise EvaluationError("dispersion needs a chain of at least 3 documents")
    weights = [corpus.document(doc_id).weights for doc_id in chain.doc_ids]
    total = 0.0
    for i in range(n - 2):
        for j in range(i + 2, n):
            if soergel(weights[i], weights[j]) < theta:
                total += 1.0 / (n + i - j)
    return 1.0 - total / (n - 2)


def similarity_chain_baseline(corpus, seed_id, length):
    """Chain the nearest strictly older neighbor backwards from a seed.

    Each step appends the document closest in Soergel distance to the
    current oldest element, restricted to strictly earlier dates and
    breaking ties by id. Runs out of earlier documents before reaching
    ``length`` -> the chain is returned short with ``truncated`` set.
    """
    if length < 1:
        raise EvaluationError("length must be at least 1")
    head = corpus.document(seed_id)
    chosen = [head]
    chosen_ids = {seed_id}
    while len(chosen) < length:
        older = [
            doc
            for doc in corpus.documents
            if doc.timestamp < head.timestamp and doc.doc_id not in chosen_ids
        ]
        if not older:
            break
        head = min(
            older, key=lambda doc: (soergel(head.weights, doc.weights), doc.doc_id)
        )
        chosen.append(head)
        chosen_ids.add(head.doc_id)
    chosen.reverse()
    return Chain(
        doc_ids=tuple(doc.doc_id for doc in chosen),
        truncated=len(chosen) < length,
    )


def _dense_features(docs, n_entities):
    """Entity weight matrix with a standardized time column appended."""
    features = np.zeros((len(docs), n_entities + 1))
    for row, doc in enumerate(docs):
        for index, weight in doc.weights.items():
            features[row, index] = weight
    days = np.array(
        [(doc.timestamp - docs[0].timestamp).days for doc in docs], dtype=float
    )
    std = days.std()
    if std > 0:
        features[:, -1] = (days - days.mean()) / std
    return features


def _seed_centers(features, k, rng):
    """Greedy distance-weighted center seeding."""
    centers = np.empty((k, features.shape[1]))
    centers[0] = features[int(rng.integers(features.shape[0]))]
    d2 = np.sum((features - centers[0]) ** 2, axis=1)
    for c in range(1, k):
        total = float(d2.sum())
        if total <= 0:
            pick = int(rng.integers(features.shape[0]))
        else:
            pick = int(rng.choice(features.shape[0], p=d2 / total))
        centers[c] = features[pick]
        d2 = np.minimum(d2, np.sum((features - centers[c]) ** 2, axis=1))
    return centers


def _lloyd(features, centers, max_iterations=100):
    """Alternate assignment and mean updates until labels stabilize."""
    k = centers.shape[0]
    labels = None
    for _ in range(max_iterations):
        dists = np.sum((features[:, None, :] - centers[None, :, :]) ** 2, axis=2)
        labels = np.argmin(dists, axis=1)
        counts = np.bincount(labels, minlength=k)
        if np.any(counts == 0):
            raise EvaluationError("empty cluster")
        new_centers = np.array(
            [features[labels == c].mean(axis=0) for c in range(k)]
        )
        if np.allclose(new_centers, centers):
            centers = new_centers
            break
        centers = new_centers
    return centers, labels


def kmeans_chain_baseline(corpus, seed_id, k, rng_seed=0):
    """Cluster documents up to the seed date and chain the representatives.

    Features are the dense entity weights with a unit-variance time
    coordinate appended. Clustering restarts once on an empty cluster
    and errors if the retry also degenerates. Per cluster the document
    nearest its centroid is taken, and the chain is ordered by date.
    """
    if k < 2:
        raise EvaluationError("k must be at least 2")
    seed = corpus.document(seed_id)
    docs = [doc for doc in corpus.documents if doc.timestamp <= seed.timestamp]
    if len(docs) < k:
        raise EvaluationError(
            f"need at least {k} documents on or before the seed date, have {len(docs)}"
        )
    features = _dense_features(docs, len(corpus.vocabulary))
    rng = np.random.default_rng(rng_seed)
    centers = labels = None
    for attempt in range(2):
        try:
            centers, labels = _lloyd(features, _seed_centers(features, k, rng))
            break
        except EvaluationError:
            if attempt == 1:
                raise EvaluationError(
                    "clustering produced an empty cluster twice; lower k"
                ) from None
    representatives = []
    for c in range(k):
        members = np.flatnonzero(labels == c)
        dists = np.sum((features[members] - centers[c]) ** 2, axis=1)
        best = min(zip(dists, (docs[m].doc_id for m in members)))
        representatives.append(best[1])
    representatives.sort(key=lambda doc_id: (corpus.document(doc_id).timestamp, doc_id))
    return Chain(doc_ids=tuple(representatives))


def significance_p_value(turning_points, date_max, config, rng_seed=0, samples=None):
    """Estimate how likely random turning points land this close to T.

    Parameters
    ----------
    turning_points : array_like
        The interior turning-point vector T, ascending.
    date_max : float
        Upper end of the scaled time axis.
    config : SignificanceConfig
        Sample count m and tolerance beta.
    rng_seed : int
        Seed for the uniform sampler; fixed seed -> identical p.
    samples : ndarray, optional
        Pre-drawn sample matrix of shape (m, len(T)) replacing the
        Monte-Carlo draw; rows are sorted before comparison.

    Returns
    -------
    float
        Fraction of samples whose every coordinate is within
        ``config.tolerance`` of T.
    """
    points = np.asarray(turning_points, dtype=float)
    if samples is None:
        rng = np.random.default_rng(rng_seed)
        samples = rng.uniform(0.0, date_max, size=(config.num_samples, points.size))
    else:
        samples = np.asarray(samples, dtype=float)
        if samples.ndim != 2 or samples.shape[1] != points.size:
            raise EvaluationError(
                "samples must be a 2d array with one column per turning point"
            )
    samples = np.sort(samples, axis=1)
    hits = np.all(np.abs(samples - points) <= config.tolerance, axis=1)
    return float(np.count_nonzero(hits)) / samples.shape[0]


def repeatability_buckets(vectors, config):
    """Count connected groups of near-identical turning-point vectors.

    Two vectors are similar when at least ``config.min_matches``
    coordinates differ by strictly less than ``config.distance_threshold``;
    buckets are the connected components of that relation.
    """
    if not len(vectors):
        raise EvaluationError("need at least one vector")
    rows = [np.asarray(v, dtype=float) for v in vectors]
    if any(r.ndim != 1 or r.size != rows[0].size for r in rows):
        raise EvaluationError("all vectors must have the same length")
    matrix = np.vstack(rows)
    n = matrix.shape[0]
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            matches = np.count_nonzero(
                np.abs(matrix[i] - matrix[j]) < config.distance_threshold
            )
            if matches >= config.min_matches:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    return sum(1 for i in range(n) if find(i) == i)
