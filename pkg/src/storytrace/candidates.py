"""Candidate selection: the documents eligible to join a story.

A document qualifies when its publication date falls strictly between
a lower bound and the newest seed's date, and its topic distribution
stays within a KL-divergence budget of every seed. Seed documents are
always included. Candidate dates are mapped affinely onto the scaled
timeline [0, date_max] that the objective operates on.
"""

from __future__ import annotations

import datetime
import math
from dataclasses import dataclass

import numpy as np

from .corpus import Corpus, CorpusError, WeightedDocument
from .topics import kl_divergence


class CandidateError(ValueError):
    """Candidate filtering could not produce a usable set."""


@dataclass(frozen=True)
class CandidateFilterConfig:
    """Temporal and topical admission bounds.

    alpha is the largest admissible KL divergence against any seed;
    t_min the earliest (exclusive) publication date; date_max the upper
    end of the scaled timeline.
    """

    alpha: float
    t_min: datetime.date
    date_max: float = 100.0

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")
        if not self.date_max > 0:
            raise ValueError(f"date_max must be positive, got {self.date_max}")


@dataclass
class CandidateSet:
    """Filtered documents with scaled times and seed positions."""

    documents: list[WeightedDocument]
    scaled_times: np.ndarray
    seed_indices: list[int]

    def __len__(self) -> int:
        return len(self.documents)

    @property
    def seed_ids(self) -> list[str]:
        return [self.documents[i].doc_id for i in self.seed_indices]


def normalize_dates(dates, date_max: float = 100.0) -> np.ndarray:
    """Map calendar dates affinely onto [0, date_max].

    The earliest date lands on 0 and the latest on date_max; a single
    date (or all-equal dates) maps to 0. Order and ratios of
    differences are preserved.
    """
    if len(dates) == 0:
        raise ValueError("need at least one date")
    lo = min(dates)
    hi = max(dates)
    span = (hi - lo).days
    if span == 0:
        return np.zeros(len(dates))
    return np.array([(d - lo).days / span * date_max for d in dates])


def filter_candidates(
    corpus: Corpus,
    topics,
    seeds: list[str],
    config: CandidateFilterConfig,
) -> CandidateSet:
    """Select the candidate documents for a story around the given seeds.

    Parameters
    ----------
    corpus : Corpus
        The full parsed corpus.
    topics : list of array_like or None
        Per-document topic distributions aligned with corpus.documents.
        May be None only when ``config.alpha`` is infinite (no topical
        filtering).
    seeds : list of str
        Seed document ids; all must exist in the corpus.
    config : CandidateFilterConfig

    Returns
    -------
    CandidateSet
        Sorted by date, with dates rescaled onto [0, date_max] and the
        seed positions recorded.

    Raises
    ------
    CandidateError
        On an unknown seed id, or when no non-seed document survives
        the filter (the seeds alone cannot form a story; raise alpha or
        widen the window).
    """
    if not seeds:
        raise CandidateError("at least one seed id is required")
    seed_positions = []
    for seed_id in seeds:
        try:
            seed_positions.append(corpus.index_of(seed_id))
        except CorpusError:
            raise CandidateError(f"unknown seed id {seed_id!r}") from None
    if topics is None and math.isfinite(config.alpha):
        raise CandidateError(
            "topical filtering (finite alpha) requires topic distributions"
        )
    if topics is not None and len(topics) != len(corpus):
        raise CandidateError(
            f"expected {len(corpus)} topic vectors, got {len(topics)}"
        )
    seed_set = set(seed_positions)
    t_seed_max = max(corpus.documents[i].timestamp for i in seed_positions)

    chosen: list[int] = []
    non_seed = 0
    for i, doc in enumerate(corpus.documents):
        if i in seed_set:
            chosen.append(i)
            continue
        if not (config.t_min < doc.timestamp < t_seed_max):
            continue
        if topics is not None and math.isfinite(config.alpha):
            divergences = (
                kl_divergence(topics[i], topics[s]) for s in seed_positions
            )
            if any(d > config.alpha for d in divergences):
                continue
        chosen.append(i)
        non_seed += 1
    if non_seed == 0:
        raise CandidateError(
            "no candidate documents passed the filter besides the seeds; "
            "increase alpha or widen the temporal window"
        )
    documents = [corpus.documents[i] for i in chosen]
    scaled = normalize_dates([d.timestamp for d in documents], config.date_max)
    chosen_pos = {idx: pos for pos, idx in enumerate(chosen)}
    seed_indices = sorted(chosen_pos[i] for i in seed_positions)
    return CandidateSet(documents=documents, scaled_times=scaled, seed_indices=seed_indices)
