"""End-to-end coverage of the command line pipeline."""

import json

import pytest

from storytrace import cli
from storytrace.optimizer import Story
from storytrace.topics import load_topics_sidecar


def corpus_path(synth_dir):
    return str(synth_dir / "corpus.jsonl")


@pytest.fixture(scope="module")
def fitted(synth_dir, tmp_path_factory):
    """Candidates plus a fitted story shared by the read-only CLI tests."""
    out = tmp_path_factory.mktemp("fitted")
    cand = str(out / "candidates.json")
    assert cli.main([
        "candidates", corpus_path(synth_dir),
        "--seed-ids", "c2d19", "--alpha", "2.5", "--out", cand,
    ]) == 0
    assert cli.main([
        "fit", corpus_path(synth_dir), "--candidates", cand,
        "--segments", "3", "--restarts", "2", "--seed", "0",
        "--max-iterations", "80", "--out-dir", str(out),
    ]) == 0
    return out


# -- grid parsing and config merging ------------------------------------------


def test_parse_grid_inclusive_endpoints():
    assert cli.parse_grid("0.1:0.9:0.2") == [0.1, 0.3, 0.5, 0.7, 0.9]
    assert cli.parse_grid("1:3:1") == [1.0, 2.0, 3.0]
    assert cli.parse_grid("5:5:1") == [5.0]


def test_parse_grid_rejects_malformed():
    for bad in ("nonsense", "1:2", "2:1:1", "0:1:0", "a:b:c"):
        with pytest.raises(cli.ConfigError):
            cli.parse_grid(bad)


def test_merge_config_fills_defaults():
    merged = cli._merge_config(
        {"corpus_path": "c", "output_dir": "o", "seed_ids": ["s"]}
    )
    assert merged["segmentation"]["num_segments"] == 5
    assert merged["optimizer"]["restarts"] == 1
    assert merged["candidates"]["alpha"] == 1.0
    assert merged["prediction"]["top"] == 20


def test_merge_config_rejects_unknown_keys():
    base = {"corpus_path": "c", "output_dir": "o", "seed_ids": ["s"]}
    with pytest.raises(cli.ConfigError, match="unknown keys"):
        cli._merge_config({**base, "bogus": 1})
    with pytest.raises(cli.ConfigError, match="optimizer"):
        cli._merge_config({**base, "optimizer": {"restartz": 3}})
    with pytest.raises(cli.ConfigError, match="missing required"):
        cli._merge_config({"corpus_path": "c"})


# -- ingest and topics ---------------------------------------------------------


def test_ingest_reports_shape(synth_dir, capsys):
    assert cli.main(["ingest", corpus_path(synth_dir)]) == 0
    out = capsys.readouterr().out
    assert "documents=60" in out
    assert "entities=42" in out


def test_ingest_writes_normalized_copy(synth_dir, tmp_path):
    out = tmp_path / "normalized.jsonl"
    assert cli.main(["ingest", corpus_path(synth_dir), "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 60


def test_ingest_missing_file_is_config_error(capsys):
    assert cli.main(["ingest", "/nowhere/corpus.jsonl"]) == 2
    assert "config error" in capsys.readouterr().err


def test_ingest_malformed_corpus_is_stage_failure(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "a"}\n')
    assert cli.main(["ingest", str(bad)]) == 3
    assert "stage failure" in capsys.readouterr().err


def test_topics_sidecar_roundtrip(synth_dir, tmp_path):
    out = tmp_path / "topics.jsonl"
    assert cli.main(["topics", corpus_path(synth_dir), "--out", str(out)]) == 0
    from storytrace.corpus import parse_corpus

    corpus = parse_corpus(corpus_path(synth_dir))
    loaded = load_topics_sidecar(out, corpus)
    assert len(loaded) == 60
    # inline topics win over LDA, so the sidecar holds the exact vectors
    assert list(loaded[0]) == [0.85, 0.075, 0.075]


# -- candidates ----------------------------------------------------------------


def test_candidates_artifact_shape(synth_dir, tmp_path):
    out = tmp_path / "candidates.json"
    assert cli.main([
        "candidates", corpus_path(synth_dir),
        "--seed-ids", "c2d19", "--alpha", "0.5", "--out", str(out),
    ]) == 0
    payload = json.loads(out.read_text())
    assert payload["seed_ids"] == ["c2d19"]
    assert len(payload["candidates"]) == 20
    seeds = [c for c in payload["candidates"] if c["is_seed"]]
    assert [s["id"] for s in seeds] == ["c2d19"]
    times = [c["scaled_time"] for c in payload["candidates"]]
    assert times == sorted(times)


def test_candidates_conflicting_window_flags(synth_dir, tmp_path, capsys):
    assert cli.main([
        "candidates", corpus_path(synth_dir), "--seed-ids", "c2d19",
        "--t-min", "2021-01-01", "--lookback-days", "10",
        "--out", str(tmp_path / "x.json"),
    ]) == 2
    assert "not both" in capsys.readouterr().err


def test_candidates_empty_window_is_stage_failure(synth_dir, tmp_path, capsys):
    assert cli.main([
        "candidates", corpus_path(synth_dir), "--seed-ids", "c2d19",
        "--alpha", "2.5", "--t-min", "2021-04-10",
        "--out", str(tmp_path / "x.json"),
    ]) == 3
    assert "widen the temporal window" in capsys.readouterr().err


def test_candidates_unknown_seed_is_config_error(synth_dir, tmp_path):
    assert cli.main([
        "candidates", corpus_path(synth_dir), "--seed-ids", "ghost",
        "--out", str(tmp_path / "x.json"),
    ]) == 2


# -- fit -----------------------------------------------------------------------


def test_fit_recovers_planted_boundaries(fitted, synth_truth):
    story = json.loads((fitted / "story.json").read_text())
    interior = story["turning_points"][1:-1]
    planted = synth_truth["planted_boundaries_scaled"]
    assert len(interior) == 2
    assert abs(interior[0] - planted[0]) <= 5
    assert abs(interior[1] - planted[1]) <= 5
    assert [len(s["docs"]) for s in story["segments"]] == [20, 20, 20]
    assert (fitted / "story.png").stat().st_size > 0
    assert (fitted / "story.json.partial").exists() is False


def test_fit_result_holds_all_restarts(fitted):
    payload = json.loads((fitted / "fit_result.json").read_text())
    assert payload["variant"] == "F5"
    assert len(payload["restart_values"]) == 2
    assert len(payload["restart_turning_points"]) == 2
    assert payload["objective_value"] == min(payload["restart_values"])
    assert len(payload["weights"]) == 60


def test_fit_story_roundtrips(fitted):
    story = Story.from_json_dict(json.loads((fitted / "story.json").read_text()))
    assert story.seed_ids == ["c2d19"]
    assert story.to_json_dict() == json.loads((fitted / "story.json").read_text())


def test_fit_rejects_bad_segments(synth_dir, fitted, tmp_path):
    assert cli.main([
        "fit", corpus_path(synth_dir),
        "--candidates", str(fitted / "candidates.json"),
        "--segments", "0", "--out-dir", str(tmp_path),
    ]) == 2


def test_fit_top_k_truncates(synth_dir, fitted, tmp_path):
    assert cli.main([
        "fit", corpus_path(synth_dir),
        "--candidates", str(fitted / "candidates.json"),
        "--segments", "3", "--restarts", "1", "--max-iterations", "40",
        "--top-k", "2", "--out-dir", str(tmp_path),
    ]) == 0
    story = json.loads((tmp_path / "story.json").read_text())
    assert all(len(s["docs"]) <= 2 for s in story["segments"])


def test_fit_dump_terms_factors_multiply(synth_dir, fitted, tmp_path):
    assert cli.main([
        "fit", corpus_path(synth_dir),
        "--candidates", str(fitted / "candidates.json"),
        "--segments", "3", "--restarts", "2", "--max-iterations", "80",
        "--dump-terms", "--out-dir", str(tmp_path),
    ]) == 0
    terms = json.loads((tmp_path / "terms_dump.json").read_text())
    fit_result = json.loads((tmp_path / "fit_result.json").read_text())
    assert len(terms["segments"]) == 3
    for row in terms["segments"]:
        assert row["lower"] < row["upper"]
        assert isinstance(row["incoherence_degenerate"], bool)
    product = (
        terms["incoherence_similarity_sum"]
        * terms["overlap"]
        * terms["uniformity"]
    )
    assert product == pytest.approx(terms["objective_value"], rel=1e-9, abs=1e-12)
    assert terms["objective_value"] == fit_result["objective_value"]


# -- evaluate ------------------------------------------------------------------


def test_evaluate_dispersion_csv(synth_dir, tmp_path):
    chains = tmp_path / "chains.jsonl"
    chains.write_text(
        json.dumps({"method": "diffusion", "doc_ids": ["c0d00", "c1d00", "c2d00"]})
        + "\n"
        + json.dumps({"method": "similarity", "doc_ids": ["c2d00", "c2d05", "c2d10"]})
        + "\n"
    )
    assert cli.main([
        "evaluate", "dispersion", "--corpus", corpus_path(synth_dir),
        "--chains", str(chains), "--theta-grid", "0.2:0.8:0.2",
        "--out-dir", str(tmp_path),
    ]) == 0
    lines = (tmp_path / "dispersion.csv").read_text().splitlines()
    assert lines[0] == "theta,mean_psi,method"
    assert len(lines) == 1 + 4 * 2
    assert (tmp_path / "dispersion.png").stat().st_size > 0
    # cross-cluster diffusion chain holds 1.0 on every theta row
    diffusion = [l for l in lines[1:] if l.endswith("diffusion")]
    assert all(l.split(",")[1] == "1.0" for l in diffusion)


def test_evaluate_dispersion_short_chain_fails(synth_dir, tmp_path, capsys):
    chains = tmp_path / "chains.jsonl"
    chains.write_text(json.dumps({"method": "tiny", "doc_ids": ["c0d00", "c0d01"]}) + "\n")
    assert cli.main([
        "evaluate", "dispersion", "--corpus", corpus_path(synth_dir),
        "--chains", str(chains), "--out-dir", str(tmp_path),
    ]) == 3
    assert "3 documents" in capsys.readouterr().err


def test_evaluate_significance_monotone(fitted, tmp_path):
    assert cli.main([
        "evaluate", "significance", "--story", str(fitted / "story.json"),
        "--beta-grid", "2:10:2", "--samples", "3000", "--seed", "1",
        "--out-dir", str(tmp_path),
    ]) == 0
    lines = (tmp_path / "significance.csv").read_text().splitlines()
    assert lines[0] == "beta,p_tp"
    values = [float(line.split(",")[1]) for line in lines[1:]]
    assert values == sorted(values)


def test_evaluate_repeatability_counts(fitted, tmp_path):
    assert cli.main([
        "evaluate", "repeatability", "--fit-result", str(fitted / "fit_result.json"),
        "--zeta-grid", "1:41:20", "--min-matches", "2",
        "--out-dir", str(tmp_path),
    ]) == 0
    lines = (tmp_path / "repeatability.csv").read_text().splitlines()
    assert lines[0] == "zeta,min_matches,buckets"
    counts = [int(line.split(",")[2]) for line in lines[1:]]
    assert counts == sorted(counts, reverse=True)


def test_evaluate_repeatability_malformed_input(tmp_path, capsys):
    bad = tmp_path / "fit_result.json"
    bad.write_text("{}")
    assert cli.main([
        "evaluate", "repeatability", "--fit-result", str(bad),
        "--out-dir", str(tmp_path),
    ]) == 2
    assert "malformed" in capsys.readouterr().err


# -- predict -------------------------------------------------------------------


def test_predict_artifacts(synth_dir, fitted, tmp_path):
    assert cli.main([
        "predict", "--corpus", corpus_path(synth_dir),
        "--story", str(fitted / "story.json"),
        "--gap-days", "20", "--top", "5", "--out-dir", str(tmp_path),
    ]) == 0
    prediction = json.loads((tmp_path / "prediction.json").read_text())
    assert prediction["gap_days"] == 20.0
    assert prediction["no_overlap"] is False
    weights = [e["predicted_weight"] for e in prediction["entities"]]
    assert len(weights) <= 5
    assert weights == sorted(weights, reverse=True)
    assert all(0.0 <= w <= 1.0 for w in weights)
    terms = json.loads((tmp_path / "terms.json").read_text())
    assert all(len(m["coefficients"]) == 3 for m in terms.values())
    assert (tmp_path / "prediction.png").stat().st_size > 0


def test_predict_rejects_bad_gap(synth_dir, fitted, tmp_path):
    assert cli.main([
        "predict", "--corpus", corpus_path(synth_dir),
        "--story", str(fitted / "story.json"),
        "--gap-days", "0", "--out-dir", str(tmp_path),
    ]) == 2


# -- synth ---------------------------------------------------------------------


def test_synth_subcommand(tmp_path):
    assert cli.main([
        "synth", "--out-dir", str(tmp_path), "--rng-seed", "3",
    ]) == 0
    assert len((tmp_path / "corpus.jsonl").read_text().splitlines()) == 60
    truth = json.loads((tmp_path / "truth.json").read_text())
    assert truth["seed_id"] == "c2d19"


def test_synth_rejects_bad_time_ranges(tmp_path):
    assert cli.main([
        "synth", "--out-dir", str(tmp_path), "--time-ranges", "0-30,20-65,70-100",
    ]) == 2


# -- run -----------------------------------------------------------------------


def run_config(synth_dir, out_dir):
    return {
        "corpus_path": corpus_path(synth_dir),
        "output_dir": str(out_dir),
        "seed_ids": ["c2d19"],
        "candidates": {"alpha": 2.5},
        "segmentation": {"num_segments": 3},
        "optimizer": {"restarts": 2, "max_iterations": 60},
        "evaluation": {
            "theta_grid": "0.2:0.8:0.3",
            "beta_grid": "2:6:2",
            "zeta_grid": "1:41:20",
            "significance_samples": 200,
        },
        "prediction": {"gap_days": 20.0, "top": 5},
    }


EXPECTED_ARTIFACTS = {
    "candidates.json", "story.json", "fit_result.json", "chains.jsonl",
    "dispersion.csv", "significance.csv", "repeatability.csv",
    "terms.json", "prediction.json", "manifest.json",
    "story.png", "dispersion.png", "significance.png", "repeatability.png",
    "prediction.png",
}


def test_run_pipeline_produces_all_artifacts(synth_dir, tmp_path):
    out = tmp_path / "out"
    config = tmp_path / "config.json"
    config.write_text(json.dumps(run_config(synth_dir, out)))
    assert cli.main(["run", "--config", str(config)]) == 0
    present = {p.name for p in out.iterdir()}
    assert EXPECTED_ARTIFACTS <= present
    assert not [p for p in present if p.endswith(".partial")]
    manifest = json.loads((out / "manifest.json").read_text())
    assert sorted(EXPECTED_ARTIFACTS - {"manifest.json"}) == manifest["artifacts"]
    assert manifest["config"]["seed_ids"] == ["c2d19"]
    assert len(manifest["config_hash"]) == 64
    chains = [json.loads(l) for l in (out / "chains.jsonl").read_text().splitlines()]
    assert {c["method"] for c in chains} == {"diffusion", "similarity", "kmeans"}


def test_run_reruns_byte_identical(synth_dir, tmp_path):
    out = tmp_path / "out"
    config = tmp_path / "config.json"
    config.write_text(json.dumps(run_config(synth_dir, out)))
    assert cli.main(["run", "--config", str(config)]) == 0
    first = (out / "story.json").read_bytes()
    first_manifest = (out / "manifest.json").read_bytes()
    assert cli.main(["run", "--config", str(config)]) == 0
    assert (out / "story.json").read_bytes() == first
    assert (out / "manifest.json").read_bytes() == first_manifest


def test_run_missing_corpus_no_artifacts(tmp_path, capsys):
    out = tmp_path / "out"
    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "corpus_path": str(tmp_path / "missing.jsonl"),
        "output_dir": str(out),
        "seed_ids": ["x"],
    }))
    assert cli.main(["run", "--config", str(config)]) == 2
    assert not out.exists()


def test_run_invalid_json_config(tmp_path):
    config = tmp_path / "config.json"
    config.write_text("{not json")
    assert cli.main(["run", "--config", str(config)]) == 2


def test_version_flag_exits_cleanly():
    assert cli.main(["--version"]) == 0
