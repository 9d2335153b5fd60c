"""Shared fixtures: one synthetic corpus generated per test session."""

import json

import pytest

from storytrace.synth import SyntheticSpec, generate_synthetic_corpus


@pytest.fixture(scope="session")
def synth_dir(tmp_path_factory):
    """Default 3-cluster corpus with its ground-truth sidecar."""
    base = tmp_path_factory.mktemp("synth")
    corpus_path = base / "corpus.jsonl"
    truth_path = base / "truth.json"
    generate_synthetic_corpus(SyntheticSpec(), corpus_path, truth_path)
    return base


@pytest.fixture(scope="session")
def synth_truth(synth_dir):
    return json.loads((synth_dir / "truth.json").read_text())
