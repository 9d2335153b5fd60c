"""Synthetic corpus generator shape, determinism, and separation checks."""

import datetime
import json

import numpy as np
import pytest

from storytrace.corpus import parse_corpus
from storytrace.objective import soergel
from storytrace.synth import SyntheticSpec, generate_synthetic_corpus, planted_boundaries


def test_default_spec_shape(tmp_path):
    spec = SyntheticSpec()
    truth = generate_synthetic_corpus(
        spec, tmp_path / "corpus.jsonl", tmp_path / "truth.json"
    )
    lines = (tmp_path / "corpus.jsonl").read_text().splitlines()
    assert len(lines) == 60
    assert truth["planted_boundaries_scaled"] == [32.5, 67.5]
    assert truth["seed_id"] == "c2d19"
    stored = json.loads((tmp_path / "truth.json").read_text())
    assert stored == truth


def test_generated_corpus_parses_with_inline_topics(tmp_path):
    generate_synthetic_corpus(
        SyntheticSpec(), tmp_path / "c.jsonl", tmp_path / "t.json"
    )
    corpus = parse_corpus(tmp_path / "c.jsonl")
    assert len(corpus.documents) == 60
    topics = corpus.inline_topics()
    assert topics is not None
    assert np.allclose(np.sum(topics, axis=1), 1.0)
    assert topics[0][0] == 0.85
    first = corpus.raw_documents[0]
    assert first.date == datetime.date(2021, 1, 1)
    last = max(corpus.raw_documents, key=lambda d: (d.date, d.id))
    assert last.id == "c2d19"
    assert last.date == datetime.date(2021, 1, 1) + datetime.timedelta(days=100)


def test_same_seed_identical_bytes(tmp_path):
    spec = SyntheticSpec(rng_seed=11)
    generate_synthetic_corpus(spec, tmp_path / "a.jsonl", tmp_path / "a.json")
    generate_synthetic_corpus(spec, tmp_path / "b.jsonl", tmp_path / "b.json")
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_different_seed_different_bytes(tmp_path):
    generate_synthetic_corpus(
        SyntheticSpec(rng_seed=1), tmp_path / "a.jsonl", tmp_path / "a.json"
    )
    generate_synthetic_corpus(
        SyntheticSpec(rng_seed=2), tmp_path / "b.jsonl", tmp_path / "b.json"
    )
    assert (tmp_path / "a.jsonl").read_bytes() != (tmp_path / "b.jsonl").read_bytes()


def test_cross_cluster_distance_exceeds_within(tmp_path):
    generate_synthetic_corpus(
        SyntheticSpec(), tmp_path / "c.jsonl", tmp_path / "t.json"
    )
    corpus = parse_corpus(tmp_path / "c.jsonl")
    within, cross = [], []
    docs = corpus.documents
    for i in range(len(docs)):
        for j in range(i + 1, len(docs)):
            d = soergel(docs[i].weights, docs[j].weights)
            same = docs[i].doc_id[:2] == docs[j].doc_id[:2]
            (within if same else cross).append(d)
    assert np.mean(cross) > np.mean(within)
    # margins the planted-boundary and chain experiments rely on
    assert min(cross) > 0.9
    assert np.mean(within) < 0.75


def test_planted_boundaries_scaling():
    spec = SyntheticSpec(
        clusters=2,
        time_ranges=((0, 10), (30, 40)),
        date_max=80.0,
        docs_per_cluster=3,
    )
    assert planted_boundaries(spec) == [40.0]


def test_spec_validation():
    with pytest.raises(ValueError, match="time range"):
        SyntheticSpec(clusters=2)
    with pytest.raises(ValueError, match="ascending"):
        SyntheticSpec(time_ranges=((0, 30), (20, 65), (70, 100)))
    with pytest.raises(ValueError, match="core vocabulary"):
        SyntheticSpec(entities_per_doc=13)
    with pytest.raises(ValueError, match="lo < hi"):
        SyntheticSpec(time_ranges=((0, 30), (65, 35), (70, 100)))
