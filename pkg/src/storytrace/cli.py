"""Command line front end for the story reconstruction pipeline."""

import argparse
import datetime
import hashlib
import json
import os
import sys

import numpy as np

from . import __version__, plotting
from .candidates import (
    CandidateError,
    CandidateFilterConfig,
    CandidateSet,
    filter_candidates,
)
from .corpus import CorpusError, parse_corpus, serialize_corpus
from .evaluation import (
    Chain,
    EvaluationError,
    RepeatabilityConfig,
    SignificanceConfig,
    dispersion_coefficient,
    kmeans_chain_baseline,
    repeatability_buckets,
    significance_p_value,
    similarity_chain_baseline,
    story_chain,
)
from .objective import (
    SegmentationConfig,
    _normalized_weights,
    incoherence_soft,
    overlap_penalty,
    segments_from_boundaries,
    similarity_soft,
    solution_boundaries,
    uniformity_penalty,
)
from .optimizer import (
    OptimizationError,
    OptimizerConfig,
    Story,
    extract_story,
    fit_story,
)
from .prediction import (
    build_pair_table,
    fit_term_models,
    predict_future_weights,
    split_story_documents,
    top_predicted,
)
from .synth import SyntheticSpec, generate_synthetic_corpus
from .topics import resolve_topics

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_STAGE = 3

STAGE_ERRORS = (CorpusError, CandidateError, OptimizationError, EvaluationError)


class ConfigError(Exception):
    """Bad flags, malformed config files, or missing inputs."""


# -- artifact plumbing --------------------------------------------------------


def write_text_artifact(path, text):
    """Write atomically: stage to a .partial file, then move into place."""
    partial = f"{path}.partial"
    with open(partial, "w", encoding="utf-8") as handle:
        handle.write(text)
    os.replace(partial, path)
    return path


def write_json_artifact(path, payload):
    return write_text_artifact(
        path, json.dumps(payload, sort_keys=True, indent=2) + "\n"
    )


def _require_file(path, label):
    if not path or not os.path.isfile(path):
        raise ConfigError(f"{label} file not found: {path}")
    return path


def parse_grid(text, label="grid"):
    """Parse 'start:stop:step' into an inclusive list of rounded floats."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ConfigError(f"{label} must look like start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"{label} has non-numeric parts: {text!r}") from None
    if step <= 0 or stop < start:
        raise ConfigError(f"{label} needs step > 0 and stop >= start, got {text!r}")
    values = []
    k = 0
    while True:
        value = round(start + k * step, 10)
        if value > stop + 1e-9:
            break
        values.append(value)
        k += 1
    return values


def _parse_date(text, label):
    try:
        return datetime.date.fromisoformat(text)
    except ValueError:
        raise ConfigError(f"{label} must be an ISO date, got {text!r}") from None


def _config_hash(config):
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


# -- shared stage helpers -----------------------------------------------------


def _load_corpus(path):
    return parse_corpus(_require_file(path, "corpus"))


def _resolve_topics(corpus, sidecar, lda_k, lda_iterations, lda_seed):
    if sidecar is not None:
        _require_file(sidecar, "topics sidecar")
    return resolve_topics(
        corpus,
        sidecar_path=sidecar,
        lda_k=lda_k,
        lda_iterations=lda_iterations,
        lda_seed=lda_seed,
    )


def _candidate_stage(corpus, seed_ids, alpha, t_min, lookback_days, date_max, topics):
    """Resolve the temporal window and run the candidate filter."""
    if t_min is not None and lookback_days is not None:
        raise ConfigError("give either t_min or lookback_days, not both")
    if not seed_ids:
        raise ConfigError("at least one seed id is required")
    if t_min is None:
        try:
            seed_dates = [corpus.document(sid).timestamp for sid in seed_ids]
        except CorpusError as exc:
            raise ConfigError(str(exc)) from None
        if lookback_days is not None:
            t_min = max(seed_dates) - datetime.timedelta(days=int(lookback_days))
        else:
            earliest = min(doc.timestamp for doc in corpus.documents)
            t_min = earliest - datetime.timedelta(days=1)
    try:
        config = CandidateFilterConfig(alpha=alpha, t_min=t_min, date_max=date_max)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return filter_candidates(corpus, topics, seed_ids, config), config


def _candidates_payload(candidates, config, corpus):
    seed_positions = set(candidates.seed_indices)
    return {
        "config": {
            "alpha": config.alpha,
            "t_min": config.t_min.isoformat(),
            "date_max": config.date_max,
        },
        "seed_ids": list(candidates.seed_ids),
        "candidates": [
            {
                "id": doc.doc_id,
                "date": doc.timestamp.isoformat(),
                "scaled_time": float(candidates.scaled_times[k]),
                "is_seed": k in seed_positions,
            }
            for k, doc in enumerate(candidates.documents)
        ],
    }


def _load_candidates(path, corpus):
    with open(_require_file(path, "candidates"), encoding="utf-8") as handle:
        try:
            payload = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"candidates file is not valid JSON: {exc}") from None
    rows = payload.get("candidates")
    if not rows:
        raise ConfigError("candidates file lists no candidates")
    docs = [corpus.document(row["id"]) for row in rows]
    times = np.array([float(row["scaled_time"]) for row in rows])
    seed_indices = [k for k, row in enumerate(rows) if row.get("is_seed")]
    candidate_set = CandidateSet(
        documents=docs, scaled_times=times, seed_indices=seed_indices
    )
    date_max = float(payload.get("config", {}).get("date_max", 100.0))
    return candidate_set, date_max


def _load_story(path):
    with open(_require_file(path, "story"), encoding="utf-8") as handle:
        try:
            return Story.from_json_dict(json.load(handle))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ConfigError(f"story file is malformed: {exc}") from None


def _fit_stage(candidates, date_max, args_like):
    """Run the optimizer and extract the story; returns result and story."""
    try:
        segmentation = SegmentationConfig(
            num_segments=args_like["segments"],
            gamma_variance=args_like["sigma_hat2"],
            overlap_sigma=args_like["overlap_sigma"],
            date_max=date_max,
        )
        optimizer = OptimizerConfig(
            max_iterations=args_like["max_iterations"],
            gradient_step=args_like["gradient_step"],
            convergence_tolerance=args_like["tolerance"],
            restarts=args_like["restarts"],
            rng_seed=args_like["seed"],
            memory_pairs=args_like["memory_pairs"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    top_k = args_like["top_k"]
    if top_k is None:
        top_k = len(candidates.documents)
    else:
        top_k = int(top_k)
        if top_k < 1:
            raise ConfigError(f"top_k must be >= 1, got {top_k}")
    result = fit_story(candidates, segmentation, optimizer)
    story = extract_story(result, candidates, top_k=top_k)
    return result, story


def _fit_result_payload(result):
    return {
        "variant": result.variant,
        "objective_value": result.objective_value,
        "turning_points": [float(t) for t in result.best_solution.interior_turning_points],
        "weights": [float(w) for w in result.best_solution.weights],
        "iterations_used": list(result.iterations_used),
        "restart_values": [value for _, value in result.all_restart_solutions],
        "restart_turning_points": [
            [float(t) for t in solution.interior_turning_points]
            for solution, _ in result.all_restart_solutions
        ],
    }


def _terms_payload(candidates, result):
    """Each factor of the fitted objective at the best solution."""
    config = result.config
    solution = result.best_solution
    boundaries = solution_boundaries(
        solution.interior_turning_points, config.date_max
    )
    segments = segments_from_boundaries(boundaries)
    if result.variant == "F4":
        weights = None
    else:
        weights = _normalized_weights(np.asarray(solution.weights, dtype=float))
    rows = []
    core = 0.0
    all_degenerate = True
    for seg in segments:
        inc = incoherence_soft(candidates, seg, weights, config.gamma_variance)
        sim = similarity_soft(candidates, seg, weights, config.gamma_variance)
        if not (inc.degenerate or sim.degenerate):
            all_degenerate = False
        core += inc.value * sim.value
        rows.append(
            {
                "lower": float(seg.lower),
                "upper": float(seg.upper),
                "incoherence": inc.value,
                "incoherence_degenerate": inc.degenerate,
                "similarity": sim.value,
                "similarity_degenerate": sim.degenerate,
            }
        )
    if all_degenerate:
        core = 1.0
    overlap = overlap_penalty(
        np.asarray(solution.interior_turning_points, dtype=float),
        config.overlap_sigma,
    )
    payload = {
        "variant": result.variant,
        "segments": rows,
        "incoherence_similarity_sum": core,
        "all_degenerate": all_degenerate,
        "overlap": overlap,
        "objective_value": result.objective_value,
    }
    if result.variant == "F5":
        payload["uniformity"] = uniformity_penalty(
            weights, candidates, segments, config.gamma_variance
        )
    return payload


def _chain_stage(corpus, candidates, story, length, kmeans_k, rng_seed):
    """Diffusion chain from the story plus the two baselines."""
    seed_id = story.seed_ids[0]
    chains = [("diffusion", story_chain(story))]
    chains.append(
        ("similarity", similarity_chain_baseline(corpus, seed_id, length=length))
    )
    chains.append(
        ("kmeans", kmeans_chain_baseline(corpus, seed_id, k=kmeans_k, rng_seed=rng_seed))
    )
    return chains


def _dispersion_rows(corpus, chains_by_method, theta_grid):
    rows = []
    for method in sorted(chains_by_method):
        chains = [c for c in chains_by_method[method] if len(c) >= 3]
        if not chains:
            raise EvaluationError(
                f"no chain of method {method!r} has the 3 documents dispersion needs"
            )
        for theta in theta_grid:
            mean_psi = float(
                np.mean(
                    [dispersion_coefficient(chain, corpus, theta) for chain in chains]
                )
            )
            rows.append((theta, mean_psi, method))
    return rows


def _significance_rows(turning_points, date_max, beta_grid, samples, rng_seed):
    rows = []
    for beta in beta_grid:
        config = SignificanceConfig(num_samples=samples, tolerance=beta)
        rows.append(
            (
                beta,
                significance_p_value(
                    turning_points, date_max, config, rng_seed=rng_seed
                ),
            )
        )
    return rows


def _repeatability_rows(vectors, zeta_grid, min_matches):
    rows = []
    for zeta in zeta_grid:
        config = RepeatabilityConfig(
            distance_threshold=zeta, min_matches=min_matches
        )
        rows.append((zeta, min_matches, repeatability_buckets(vectors, config)))
    return rows


def _prediction_stage(corpus, story, gap_days, top):
    train_docs, _ = split_story_documents(story, corpus)
    table = build_pair_table(train_docs)
    if not table:
        raise EvaluationError(
            "training segments yield no time-ordered document pairs"
        )
    models = fit_term_models(table)
    seed_doc = corpus.document(story.seed_ids[0])
    prediction = predict_future_weights(seed_doc, gap_days, models)
    named = top_predicted(prediction, corpus.vocabulary, limit=top)
    terms_payload = {
        corpus.vocabulary.names[entity]: {
            "coefficients": list(model.coefficients),
            "training_rows": model.training_rows,
            "past_entities": sorted(
                corpus.vocabulary.names[e] for e in model.past_entities
            ),
        }
        for entity, model in models.items()
    }
    prediction_payload = {
        "gap_days": gap_days,
        "seed_id": story.seed_ids[0],
        "no_overlap": prediction.no_overlap,
        "entities": [
            {"name": name, "predicted_weight": weight} for name, weight in named
        ],
    }
    return terms_payload, prediction_payload, named


def _csv_text(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


# -- subcommand handlers ------------------------------------------------------


def cmd_ingest(args):
    corpus = _load_corpus(args.corpus)
    dates = [doc.timestamp for doc in corpus.documents]
    print(
        f"documents={len(corpus.documents)} entities={len(corpus.vocabulary)} "
        f"dates={min(dates).isoformat()}..{max(dates).isoformat()}"
    )
    if args.out:
        serialize_corpus(corpus, args.out)
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_topics(args):
    corpus = _load_corpus(args.corpus)
    topics = _resolve_topics(
        corpus, args.topics_file, args.lda_k, args.lda_iters, args.lda_seed
    )
    lines = []
    for doc, vector in zip(corpus.documents, topics):
        lines.append(
            json.dumps(
                {"id": doc.doc_id, "topics": [float(x) for x in vector]},
                sort_keys=True,
            )
        )
    write_text_artifact(args.out, "\n".join(lines) + "\n")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_candidates(args):
    corpus = _load_corpus(args.corpus)
    seed_ids = [s for s in args.seed_ids.split(",") if s]
    if args.alpha == float("inf"):
        topics = None
    else:
        topics = _resolve_topics(
            corpus, args.topics_file, args.lda_k, args.lda_iters, args.lda_seed
        )
    t_min = _parse_date(args.t_min, "--t-min") if args.t_min else None
    candidates, config = _candidate_stage(
        corpus, seed_ids, args.alpha, t_min, args.lookback_days, args.date_max, topics
    )
    write_json_artifact(args.out, _candidates_payload(candidates, config, corpus))
    print(f"candidates={len(candidates)} seeds={len(candidates.seed_indices)}")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_fit(args):
    corpus = _load_corpus(args.corpus)
    candidates, date_max = _load_candidates(args.candidates, corpus)
    result, story = _fit_stage(
        candidates,
        date_max,
        {
            "segments": args.segments,
            "sigma_hat2": args.sigma_hat2,
            "overlap_sigma": args.overlap_sigma,
            "max_iterations": args.max_iterations,
            "gradient_step": args.gradient_step,
            "tolerance": args.tolerance,
            "restarts": args.restarts,
            "seed": args.seed,
            "memory_pairs": args.memory_pairs,
            "top_k": args.top_k,
        },
    )
    out_dir = args.out_dir
    os.makedirs(out_dir, exist_ok=True)
    write_json_artifact(os.path.join(out_dir, "story.json"), story.to_json_dict())
    write_json_artifact(
        os.path.join(out_dir, "fit_result.json"), _fit_result_payload(result)
    )
    plotting.save_story_figure(story, candidates, os.path.join(out_dir, "story.png"))
    written = ["story.json", "fit_result.json", "story.png"]
    if args.dump_terms:
        write_json_artifact(
            os.path.join(out_dir, "terms_dump.json"),
            _terms_payload(candidates, result),
        )
        written.append("terms_dump.json")
    interior = ", ".join(f"{t:.2f}" for t in result.best_solution.interior_turning_points)
    print(f"objective={result.objective_value!r} turning_points=[{interior}]")
    print("wrote " + " ".join(f"{out_dir}/{name}" for name in written))
    return EXIT_OK


def cmd_evaluate_dispersion(args):
    corpus = _load_corpus(args.corpus)
    chains_by_method = {}
    with open(_require_file(args.chains, "chains"), encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                method = record["method"]
                chain = Chain(tuple(record["doc_ids"]))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ConfigError(f"chains line {lineno}: {exc}") from None
            chains_by_method.setdefault(method, []).append(chain)
    if not chains_by_method:
        raise ConfigError("chains file holds no chains")
    theta_grid = parse_grid(args.theta_grid, "--theta-grid")
    rows = _dispersion_rows(corpus, chains_by_method, theta_grid)
    os.makedirs(args.out_dir, exist_ok=True)
    csv_path = os.path.join(args.out_dir, "dispersion.csv")
    write_text_artifact(csv_path, _csv_text(("theta", "mean_psi", "method"), rows))
    png_path = os.path.join(args.out_dir, "dispersion.png")
    plotting.save_dispersion_figure(rows, png_path)
    print(f"wrote {csv_path} {png_path}")
    return EXIT_OK


def cmd_evaluate_significance(args):
    story = _load_story(args.story)
    turning_points = story.turning_points[1:-1]
    beta_grid = parse_grid(args.beta_grid, "--beta-grid")
    if args.samples < 1:
        raise ConfigError("--samples must be >= 1")
    rows = _significance_rows(
        turning_points, args.date_max, beta_grid, args.samples, args.seed
    )
    os.makedirs(args.out_dir, exist_ok=True)
    csv_path = os.path.join(args.out_dir, "significance.csv")
    write_text_artifact(csv_path, _csv_text(("beta", "p_tp"), rows))
    png_path = os.path.join(args.out_dir, "significance.png")
    plotting.save_significance_figure(rows, png_path)
    print(f"wrote {csv_path} {png_path}")
    return EXIT_OK


def cmd_evaluate_repeatability(args):
    with open(_require_file(args.fit_result, "fit result"), encoding="utf-8") as handle:
        try:
            payload = json.load(handle)
            vectors = payload["restart_turning_points"]
        except (json.JSONDecodeError, KeyError) as exc:
            raise ConfigError(f"fit result file is malformed: {exc}") from None
    zeta_grid = parse_grid(args.zeta_grid, "--zeta-grid")
    if args.min_matches < 1:
        raise ConfigError("--min-matches must be >= 1")
    rows = _repeatability_rows(vectors, zeta_grid, args.min_matches)
    os.makedirs(args.out_dir, exist_ok=True)
    csv_path = os.path.join(args.out_dir, "repeatability.csv")
    write_text_artifact(
        csv_path, _csv_text(("zeta", "min_matches", "buckets"), rows)
    )
    png_path = os.path.join(args.out_dir, "repeatability.png")
    plotting.save_repeatability_figure(rows, png_path)
    print(f"wrote {csv_path} {png_path}")
    return EXIT_OK


def cmd_predict(args):
    corpus = _load_corpus(args.corpus)
    story = _load_story(args.story)
    if args.gap_days <= 0:
        raise ConfigError("--gap-days must be positive")
    if args.top < 1:
        raise ConfigError("--top must be >= 1")
    terms_payload, prediction_payload, named = _prediction_stage(
        corpus, story, args.gap_days, args.top
    )
    os.makedirs(args.out_dir, exist_ok=True)
    write_json_artifact(os.path.join(args.out_dir, "terms.json"), terms_payload)
    write_json_artifact(
        os.path.join(args.out_dir, "prediction.json"), prediction_payload
    )
    written = [
        os.path.join(args.out_dir, "terms.json"),
        os.path.join(args.out_dir, "prediction.json"),
    ]
    if named:
        png_path = os.path.join(args.out_dir, "prediction.png")
        plotting.save_prediction_figure(named, png_path)
        written.append(png_path)
    print(f"predicted_entities={len(named)} no_overlap={prediction_payload['no_overlap']}")
    print("wrote " + " ".join(written))
    return EXIT_OK


def _parse_time_ranges(text):
    ranges = []
    for piece in text.split(","):
        lo, _, hi = piece.partition("-")
        try:
            ranges.append((int(lo), int(hi)))
        except ValueError:
            raise ConfigError(
                f"--time-ranges must look like 0-30,35-65,70-100, got {text!r}"
            ) from None
    return tuple(ranges)


def cmd_synth(args):
    try:
        spec = SyntheticSpec(
            clusters=args.clusters,
            docs_per_cluster=args.docs_per_cluster,
            time_ranges=_parse_time_ranges(args.time_ranges),
            date_max=args.date_max,
            rng_seed=args.rng_seed,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    os.makedirs(args.out_dir, exist_ok=True)
    corpus_path = os.path.join(args.out_dir, "corpus.jsonl")
    truth_path = os.path.join(args.out_dir, "truth.json")
    truth = generate_synthetic_corpus(spec, corpus_path, truth_path)
    print(f"wrote {corpus_path} and {truth_path} (seed doc {truth['seed_id']})")
    return EXIT_OK


# -- run: the full pipeline ---------------------------------------------------

RUN_DEFAULTS = {
    "topics": {"sidecar": None, "lda_k": 10, "lda_iterations": 100, "lda_seed": 0},
    "candidates": {
        "alpha": 1.0,
        "t_min": None,
        "lookback_days": None,
        "date_max": 100.0,
    },
    "segmentation": {
        "num_segments": 5,
        "gamma_variance": 4.0,
        "overlap_sigma": 5.0,
    },
    "optimizer": {
        "max_iterations": 200,
        "gradient_step": 1e-4,
        "convergence_tolerance": 1e-6,
        "restarts": 1,
        "rng_seed": 0,
        "memory_pairs": 10,
    },
    "evaluation": {
        "theta_grid": "0.1:0.9:0.1",
        "beta_grid": "1:20:1",
        "zeta_grid": "1:100:5",
        "min_matches": 1,
        "significance_samples": 1000,
        "significance_seed": 0,
        "chain_length": None,
        "kmeans_k": None,
        "chain_rng_seed": 0,
    },
    "prediction": {"gap_days": 30.0, "top": 20},
    "top_k": None,
}


def _merge_config(raw):
    """Overlay the user config on the defaults, rejecting unknown keys."""
    for key in ("corpus_path", "output_dir", "seed_ids"):
        if key not in raw:
            raise ConfigError(f"config is missing required key {key!r}")
    known_top = set(RUN_DEFAULTS) | {"corpus_path", "output_dir", "seed_ids"}
    unknown = set(raw) - known_top
    if unknown:
        raise ConfigError(f"config has unknown keys: {', '.join(sorted(unknown))}")
    merged = {
        "corpus_path": raw["corpus_path"],
        "output_dir": raw["output_dir"],
        "seed_ids": list(raw["seed_ids"]),
        "top_k": raw.get("top_k", RUN_DEFAULTS["top_k"]),
    }
    for section, defaults in RUN_DEFAULTS.items():
        if section == "top_k":
            continue
        given = raw.get(section, {})
        if not isinstance(given, dict):
            raise ConfigError(f"config section {section!r} must be an object")
        unknown = set(given) - set(defaults)
        if unknown:
            raise ConfigError(
                f"config section {section!r} has unknown keys: "
                f"{', '.join(sorted(unknown))}"
            )
        merged[section] = {**defaults, **given}
    if not merged["seed_ids"]:
        raise ConfigError("config needs at least one seed id")
    return merged


def cmd_run(args):
    with open(_require_file(args.config, "config"), encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
    config = _merge_config(raw)
    _require_file(config["corpus_path"], "corpus")
    if config["topics"]["sidecar"] is not None:
        _require_file(config["topics"]["sidecar"], "topics sidecar")

    corpus = parse_corpus(config["corpus_path"])
    alpha = float(config["candidates"]["alpha"])
    if alpha == float("inf"):
        topics = None
    else:
        topics = _resolve_topics(
            corpus,
            config["topics"]["sidecar"],
            config["topics"]["lda_k"],
            config["topics"]["lda_iterations"],
            config["topics"]["lda_seed"],
        )
    t_min = (
        _parse_date(config["candidates"]["t_min"], "candidates.t_min")
        if config["candidates"]["t_min"]
        else None
    )
    candidates, filter_config = _candidate_stage(
        corpus,
        config["seed_ids"],
        alpha,
        t_min,
        config["candidates"]["lookback_days"],
        float(config["candidates"]["date_max"]),
        topics,
    )

    out_dir = config["output_dir"]
    os.makedirs(out_dir, exist_ok=True)
    artifacts = []

    def emit_json(name, payload):
        write_json_artifact(os.path.join(out_dir, name), payload)
        artifacts.append(name)

    def emit_text(name, text):
        write_text_artifact(os.path.join(out_dir, name), text)
        artifacts.append(name)

    emit_json("candidates.json", _candidates_payload(candidates, filter_config, corpus))

    seg = config["segmentation"]
    opt = config["optimizer"]
    result, story = _fit_stage(
        candidates,
        filter_config.date_max,
        {
            "segments": int(seg["num_segments"]),
            "sigma_hat2": float(seg["gamma_variance"]),
            "overlap_sigma": float(seg["overlap_sigma"]),
            "max_iterations": int(opt["max_iterations"]),
            "gradient_step": float(opt["gradient_step"]),
            "tolerance": float(opt["convergence_tolerance"]),
            "restarts": int(opt["restarts"]),
            "seed": int(opt["rng_seed"]),
            "memory_pairs": int(opt["memory_pairs"]),
            "top_k": config["top_k"],
        },
    )
    emit_json("story.json", story.to_json_dict())
    emit_json("fit_result.json", _fit_result_payload(result))
    plotting.save_story_figure(story, candidates, os.path.join(out_dir, "story.png"))
    artifacts.append("story.png")

    ev = config["evaluation"]
    num_segments = int(seg["num_segments"])
    chain_length = ev["chain_length"] or num_segments
    kmeans_k = ev["kmeans_k"] or max(2, num_segments)
    chains = _chain_stage(
        corpus,
        candidates,
        story,
        int(chain_length),
        int(kmeans_k),
        int(ev["chain_rng_seed"]),
    )
    emit_text(
        "chains.jsonl",
        "\n".join(
            json.dumps(
                {
                    "method": method,
                    "doc_ids": list(chain.doc_ids),
                    "truncated": chain.truncated,
                },
                sort_keys=True,
            )
            for method, chain in chains
        )
        + "\n",
    )

    chains_by_method = {}
    for method, chain in chains:
        chains_by_method.setdefault(method, []).append(chain)
    dispersion_rows = _dispersion_rows(
        corpus, chains_by_method, parse_grid(ev["theta_grid"], "evaluation.theta_grid")
    )
    emit_text("dispersion.csv", _csv_text(("theta", "mean_psi", "method"), dispersion_rows))
    plotting.save_dispersion_figure(
        dispersion_rows, os.path.join(out_dir, "dispersion.png")
    )
    artifacts.append("dispersion.png")

    significance_rows = _significance_rows(
        story.turning_points[1:-1],
        filter_config.date_max,
        parse_grid(ev["beta_grid"], "evaluation.beta_grid"),
        int(ev["significance_samples"]),
        int(ev["significance_seed"]),
    )
    emit_text("significance.csv", _csv_text(("beta", "p_tp"), significance_rows))
    plotting.save_significance_figure(
        significance_rows, os.path.join(out_dir, "significance.png")
    )
    artifacts.append("significance.png")

    repeatability_rows = _repeatability_rows(
        [
            [float(t) for t in solution.interior_turning_points]
            for solution, _ in result.all_restart_solutions
        ],
        parse_grid(ev["zeta_grid"], "evaluation.zeta_grid"),
        int(ev["min_matches"]),
    )
    emit_text(
        "repeatability.csv",
        _csv_text(("zeta", "min_matches", "buckets"), repeatability_rows),
    )
    plotting.save_repeatability_figure(
        repeatability_rows, os.path.join(out_dir, "repeatability.png")
    )
    artifacts.append("repeatability.png")

    pred = config["prediction"]
    terms_payload, prediction_payload, named = _prediction_stage(
        corpus, story, float(pred["gap_days"]), int(pred["top"])
    )
    emit_json("terms.json", terms_payload)
    emit_json("prediction.json", prediction_payload)
    if named:
        plotting.save_prediction_figure(
            named, os.path.join(out_dir, "prediction.png")
        )
        artifacts.append("prediction.png")

    emit_json(
        "manifest.json",
        {
            "version": __version__,
            "config_hash": _config_hash(config),
            "config": config,
            "artifacts": sorted(artifacts),
        },
    )
    print(f"pipeline complete: {len(artifacts)} artifacts in {out_dir}")
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def _add_topic_flags(parser):
    parser.add_argument("--topics-file", default=None,
                        help="JSONL sidecar with per-document topic vectors")
    parser.add_argument("--lda-k", type=int, default=10,
                        help="topic count for the fallback LDA (default 10)")
    parser.add_argument("--lda-iters", type=int, default=100,
                        help="Gibbs sweeps for the fallback LDA (default 100)")
    parser.add_argument("--lda-seed", type=int, default=0,
                        help="rng seed for the fallback LDA (default 0)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="storytrace",
        description="Reconstruct how a news story evolved around a seed document.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a corpus and report its shape")
    p.add_argument("corpus", help="JSONL corpus file")
    p.add_argument("--out", default=None, help="write the normalized corpus here")
    p.set_defaults(handler=cmd_ingest)

    p = sub.add_parser("topics", help="resolve topic vectors for every document")
    p.add_argument("corpus")
    _add_topic_flags(p)
    p.add_argument("--out", required=True, help="topics sidecar to write")
    p.set_defaults(handler=cmd_topics)

    p = sub.add_parser("candidates", help="filter candidate documents for a story")
    p.add_argument("corpus")
    p.add_argument("--seed-ids", required=True,
                   help="comma-separated seed document ids")
    p.add_argument("--alpha", type=float, default=1.0,
                   help="KL divergence bound (inf disables topical filtering)")
    p.add_argument("--t-min", default=None,
                   help="exclusive earliest date (ISO), overrides --lookback-days")
    p.add_argument("--lookback-days", type=int, default=None,
                   help="window size counted back from the newest seed")
    p.add_argument("--date-max", type=float, default=100.0,
                   help="upper end of the scaled timeline (default 100)")
    _add_topic_flags(p)
    p.add_argument("--out", required=True, help="candidates JSON to write")
    p.set_defaults(handler=cmd_candidates)

    p = sub.add_parser("fit", help="fit turning points and weights, extract the story")
    p.add_argument("corpus")
    p.add_argument("--candidates", required=True, help="candidates JSON from 'candidates'")
    p.add_argument("--segments", type=int, default=5, help="segment count (default 5)")
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="optimizer rng seed")
    p.add_argument("--sigma-hat2", type=float, default=4.0,
                   help="membership tail variance (default 4.0)")
    p.add_argument("--overlap-sigma", type=float, default=5.0,
                   help="overlap penalty width (default 5.0)")
    p.add_argument("--top-k", type=int, default=None,
                   help="ranked docs kept per segment (default: all)")
    p.add_argument("--max-iterations", type=int, default=200)
    p.add_argument("--gradient-step", type=float, default=1e-4)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--memory-pairs", type=int, default=10)
    p.add_argument("--dump-terms", action="store_true",
                   help="also write terms_dump.json with each objective factor")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(handler=cmd_fit)

    p = sub.add_parser("evaluate", help="score chains, significance, or repeatability")
    esub = p.add_subparsers(dest="evaluation", required=True)

    e = esub.add_parser("dispersion", help="mean dispersion over a theta sweep")
    e.add_argument("--corpus", required=True)
    e.add_argument("--chains", required=True, help="JSONL of {method, doc_ids}")
    e.add_argument("--theta-grid", default="0.1:0.9:0.1")
    e.add_argument("--out-dir", required=True)
    e.set_defaults(handler=cmd_evaluate_dispersion)

    e = esub.add_parser("significance", help="turning-point p-values over a beta sweep")
    e.add_argument("--story", required=True, help="story JSON from 'fit'")
    e.add_argument("--date-max", type=float, default=100.0)
    e.add_argument("--beta-grid", default="1:20:1")
    e.add_argument("--samples", type=int, default=1000)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out-dir", required=True)
    e.set_defaults(handler=cmd_evaluate_significance)

    e = esub.add_parser("repeatability", help="bucket counts over a zeta sweep")
    e.add_argument("--fit-result", required=True, help="fit_result JSON from 'fit'")
    e.add_argument("--zeta-grid", default="1:100:5")
    e.add_argument("--min-matches", type=int, default=1)
    e.add_argument("--out-dir", required=True)
    e.set_defaults(handler=cmd_evaluate_repeatability)

    p = sub.add_parser("predict", help="forecast future entity weights from the story")
    p.add_argument("--corpus", required=True)
    p.add_argument("--story", required=True)
    p.add_argument("--gap-days", type=float, required=True)
    p.add_argument("--top", type=int, default=20)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(handler=cmd_predict)

    p = sub.add_parser("synth", help="generate a clustered synthetic corpus")
    p.add_argument("--clusters", type=int, default=3)
    p.add_argument("--docs-per-cluster", type=int, default=20)
    p.add_argument("--time-ranges", default="0-30,35-65,70-100")
    p.add_argument("--date-max", type=float, default=100.0)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser("run", help="execute the whole pipeline from a config file")
    p.add_argument("--config", required=True, help="pipeline config JSON")
    p.set_defaults(handler=cmd_run)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return EXIT_CONFIG if code not in (0, None) else EXIT_OK
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except STAGE_ERRORS as exc:
        print(f"stage failure: {exc}", file=sys.stderr)
        return EXIT_STAGE
    except (ValueError, OSError) as exc:
        print(f"stage failure: {exc}", file=sys.stderr)
        return EXIT_STAGE


if __name__ == "__main__":
    sys.exit(main())
