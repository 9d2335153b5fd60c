"""Synthetic clustered corpora with planted turning points."""

import dataclasses
import datetime
import json

import numpy as np


@dataclasses.dataclass(frozen=True)
class SyntheticSpec:
    """Shape of a generated corpus: clustered docs over disjoint date ranges."""

    clusters: int = 3
    docs_per_cluster: int = 20
    core_vocab_per_cluster: int = 12
    entities_per_doc: int = 8
    shared_vocab: int = 6
    shared_per_doc: int = 2
    time_ranges: tuple = ((0, 30), (35, 65), (70, 100))
    base_date: datetime.date = datetime.date(2021, 1, 1)
    date_max: float = 100.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.clusters < 1:
            raise ValueError("clusters must be at least 1")
        if self.docs_per_cluster < 2:
            raise ValueError("docs_per_cluster must be at least 2")
        if len(self.time_ranges) != self.clusters:
            raise ValueError("need one time range per cluster")
        if self.entities_per_doc > self.core_vocab_per_cluster:
            raise ValueError("entities_per_doc exceeds the core vocabulary")
        if self.shared_per_doc > self.shared_vocab:
            raise ValueError("shared_per_doc exceeds the shared vocabulary")
        for lo, hi in self.time_ranges:
            if hi <= lo:
                raise ValueError("each time range needs lo < hi")
        flat = [edge for pair in self.time_ranges for edge in pair]
        if flat != sorted(flat):
            raise ValueError("time ranges must be disjoint and ascending")


def _doc_days(spec, cluster):
    lo, hi = spec.time_ranges[cluster]
    return [int(round(v)) for v in np.linspace(lo, hi, spec.docs_per_cluster)]


def _topic_vector(spec, cluster):
    if spec.clusters == 1:
        return [1.0]
    off = 0.15 / (spec.clusters - 1)
    return [0.85 if c == cluster else off for c in range(spec.clusters)]


def planted_boundaries(spec):
    """Scaled boundary positions at the midpoints between cluster ranges."""
    day_lo = spec.time_ranges[0][0]
    day_hi = spec.time_ranges[-1][1]
    span = day_hi - day_lo
    raw = [
        (spec.time_ranges[c][1] + spec.time_ranges[c + 1][0]) / 2.0
        for c in range(spec.clusters - 1)
    ]
    return [(b - day_lo) * spec.date_max / span for b in raw]


def generate_synthetic_corpus(spec, corpus_path, truth_path):
    """Write a clustered JSONL corpus and its ground-truth sidecar.

    Each cluster draws from its own core vocabulary plus a small shared
    pool, with exact inline topic vectors, so cross-cluster documents
    are far apart in Soergel distance while same-cluster documents stay
    close. Output bytes are identical for identical specs.
    """
    rng = np.random.default_rng(spec.rng_seed)
    shared_names = [f"Common{k:02d}" for k in range(spec.shared_vocab)]
    records = []
    for c in range(spec.clusters):
        core_names = [f"Topic{c}Item{k:02d}" for k in range(spec.core_vocab_per_cluster)]
        days = _doc_days(spec, c)
        topics = _topic_vector(spec, c)
        for i in range(spec.docs_per_cluster):
            picked = rng.choice(
                spec.core_vocab_per_cluster, size=spec.entities_per_doc, replace=False
            )
            entities = [
                {
                    "name": core_names[int(k)],
                    "type": "other",
                    "count": int(rng.integers(1, 4)),
                }
                for k in sorted(int(k) for k in picked)
            ]
            background = rng.choice(
                spec.shared_vocab, size=spec.shared_per_doc, replace=False
            )
            entities += [
                {"name": shared_names[int(k)], "type": "other", "count": 1}
                for k in sorted(int(k) for k in background)
            ]
            doc_id = f"c{c}d{i:02d}"
            records.append(
                {
                    "id": doc_id,
                    "date": (
                        spec.base_date + datetime.timedelta(days=days[i])
                    ).isoformat(),
                    "title": f"Synthetic report {doc_id}",
                    "entities": entities,
                    "topics": topics,
                }
            )
    with open(corpus_path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, sort_keys=True) + "\n")
    truth = {
        "planted_boundaries_scaled": planted_boundaries(spec),
        "clusters": spec.clusters,
        "docs_per_cluster": spec.docs_per_cluster,
        "time_ranges": [list(pair) for pair in spec.time_ranges],
        "date_base": spec.base_date.isoformat(),
        "date_max": spec.date_max,
        "seed_id": records[-1]["id"],
        "rng_seed": spec.rng_seed,
    }
    with open(truth_path, "w", encoding="utf-8") as handle:
        handle.write(json.dumps(truth, sort_keys=True, indent=2) + "\n")
    return truth
