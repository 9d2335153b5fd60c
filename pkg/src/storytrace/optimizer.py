"""Bound-constrained minimization of the story objective, with restarts.

The smooth objective is minimized by a limited-memory quasi-Newton
method under box constraints (turning points in [0, date_max], weights
in [0, 1]). Gradients are central finite differences with the probe
points clamped into the box, so the method never evaluates outside the
feasible region. Several restarts from jittered initial points are run
and the best solution kept; all restart solutions are retained because
run-to-run variation is itself analyzed downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .candidates import CandidateSet
from .objective import (
    SegmentationConfig,
    Solution,
    StoryObjective,
    membership_probabilities,
    segments_from_boundaries,
    solution_boundaries,
)


class OptimizationError(RuntimeError):
    """The minimization could not produce a usable solution."""


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs of the quasi-Newton loop and the restart schedule."""

    max_iterations: int = 200
    gradient_step: float = 1e-4
    convergence_tolerance: float = 1e-6
    restarts: int = 1
    rng_seed: int = 0
    memory_pairs: int = 10

    def __post_init__(self):
        if not self.gradient_step > 0:
            raise ValueError(f"gradient_step must be > 0, got {self.gradient_step}")
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")


@dataclass
class StoryResult:
    """Everything the restart schedule produced."""

    best_solution: Solution
    objective_value: float
    all_restart_solutions: list[tuple[Solution, float]]
    iterations_used: list[int]
    config: SegmentationConfig
    variant: str = "F5"


@dataclass
class RankedDoc:
    doc_id: str
    weight: float
    membership: float


@dataclass
class StorySegment:
    lower: float
    upper: float
    docs: list[RankedDoc] = field(default_factory=list)


@dataclass
class Story:
    """The user-facing output: ranked documents per segment."""

    turning_points: list[float]
    segments: list[StorySegment]
    seed_ids: list[str]

    def to_json_dict(self) -> dict:
        return {
            "turning_points": list(self.turning_points),
            "segments": [
                {
                    "bounds": [seg.lower, seg.upper],
                    "docs": [
                        {
                            "id": doc.doc_id,
                            "weight": doc.weight,
                            "membership": doc.membership,
                        }
                        for doc in seg.docs
                    ],
                }
                for seg in self.segments
            ],
            "seed_ids": list(self.seed_ids),
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "Story":
        segments = [
            StorySegment(
                lower=float(seg["bounds"][0]),
                upper=float(seg["bounds"][1]),
                docs=[
                    RankedDoc(doc["id"], float(doc["weight"]), float(doc["membership"]))
                    for doc in seg["docs"]
                ],
            )
            for seg in payload["segments"]
        ]
        return cls(
            turning_points=[float(t) for t in payload["turning_points"]],
            segments=segments,
            seed_ids=list(payload["seed_ids"]),
        )


def clamped_central_gradient(fun, x, lower, upper, step) -> np.ndarray:
    """Central-difference gradient with probes clamped into the box.

    Each coordinate is probed at min(x+h, upper) and max(x-h, lower)
    and the difference divided by the actual spread between the two
    probes. A coordinate whose box has collapsed gets gradient 0.
    """
    x = np.asarray(x, dtype=float)
    grad = np.zeros_like(x)
    for k in range(x.size):
        hi = min(x[k] + step, upper[k])
        lo = max(x[k] - step, lower[k])
        spread = hi - lo
        if spread <= 0.0:
            continue
        xp = x.copy()
        xp[k] = hi
        xm = x.copy()
        xm[k] = lo
        grad[k] = (fun(xp) - fun(xm)) / spread
    return grad


def batched_clamped_gradient(value_batch, x, lower, upper, step) -> np.ndarray:
    """Same clamped central differences, all probes in one batched call."""
    x = np.asarray(x, dtype=float)
    d = x.size
    hi = np.minimum(x + step, upper)
    lo = np.maximum(x - step, lower)
    probes = np.repeat(x[None, :], 2 * d, axis=0)
    idx = np.arange(d)
    probes[2 * idx, idx] = hi
    probes[2 * idx + 1, idx] = lo
    values = np.asarray(value_batch(probes), dtype=float)
    spread = hi - lo
    safe = np.where(spread > 0.0, spread, 1.0)
    grad = np.where(spread > 0.0, (values[0::2] - values[1::2]) / safe, 0.0)
    return grad


def minimize(objective, bounds, init, config: OptimizerConfig, gradient=None):
    """Minimize a box-constrained objective from one starting point.

    Parameters
    ----------
    objective : callable
        Maps a solution vector to a float; must be finite at ``init``.
    bounds : sequence of (low, high)
        Per-coordinate box.
    init : array_like
        Starting vector (clipped into the box).
    config : OptimizerConfig
    gradient : callable, optional
        Gradient oracle; defaults to clamped central differences of
        ``objective`` with step ``config.gradient_step``.

    Returns
    -------
    (ndarray, float, int)
        Feasible minimizer, its value (never above the value at init),
        and the number of iterations used.
    """
    lower = np.array([b[0] for b in bounds], dtype=float)
    upper = np.array([b[1] for b in bounds], dtype=float)
    x0 = np.clip(np.asarray(init, dtype=float), lower, upper)
    f0 = float(objective(x0))
    if not np.isfinite(f0):
        raise OptimizationError(
            f"objective is not finite at the initial point (value {f0})"
        )

    non_finite: list[float] = []

    def checked(x):
        value = float(objective(x))
        if not np.isfinite(value):
            non_finite.append(value)
            return np.inf
        return value

    if gradient is None:
        def gradient(x):
            return clamped_central_gradient(
                checked, x, lower, upper, config.gradient_step
            )

    result = scipy.optimize.minimize(
        checked,
        x0,
        jac=gradient,
        method="L-BFGS-B",
        bounds=list(zip(lower, upper)),
        options={
            "maxiter": config.max_iterations,
            "ftol": 1e-18,
            "gtol": config.convergence_tolerance,
            "maxcor": config.memory_pairs,
        },
    )
    if non_finite:
        raise OptimizationError(
            "objective returned a non-finite value during minimization"
        )
    x = np.clip(result.x, lower, upper)
    value = float(result.fun)
    if not np.array_equal(x, result.x):
        value = float(objective(x))
    if value > f0:
        return x0, f0, int(result.nit)
    return x, value, int(result.nit)


def initialize_solution(
    candidates: CandidateSet,
    config: SegmentationConfig,
    rng: np.random.Generator,
    restart_index: int,
) -> Solution:
    """Build the starting solution for one restart.

    Restart 0 is deterministic: interior turning points equally spaced
    across (0, date_max) and every weight 0.5. Later restarts jitter
    the equal spacing by uniform noise of amplitude date_max / (4 |S|)
    and draw weights uniformly from [0.25, 0.75].
    """
    n_interior = config.num_segments - 1
    n_docs = len(candidates.documents)
    spacing = config.date_max / config.num_segments
    points = np.arange(1, n_interior + 1) * spacing
    if restart_index == 0:
        weights = np.full(n_docs, 0.5)
        return Solution(points, weights)
    amplitude = config.date_max / (4.0 * config.num_segments)
    points = points + rng.uniform(-amplitude, amplitude, size=n_interior)
    points = np.sort(np.clip(points, 0.0, config.date_max))
    weights = rng.uniform(0.25, 0.75, size=n_docs)
    return Solution(points, weights)


def fit_story(
    candidates: CandidateSet,
    segmentation: SegmentationConfig,
    optimizer: OptimizerConfig,
    variant: str = "F5",
) -> StoryResult:
    """Minimize the story objective with restarts and keep everything.

    Each restart runs an independent bounded quasi-Newton descent from
    its own initialization; the restart with the lowest final value
    wins (ties to the earliest restart). Restarts whose objective turns
    non-finite are dropped; if every restart drops, an error is raised.
    """
    if len(candidates.documents) == 0:
        raise OptimizationError("candidate set is empty")
    objective = StoryObjective(candidates, segmentation, variant)
    bounds = objective.bounds()
    lower = np.array([b[0] for b in bounds])
    upper = np.array([b[1] for b in bounds])

    def gradient(x):
        return batched_clamped_gradient(
            objective.value_batch, x, lower, upper, optimizer.gradient_step
        )

    solutions: list[tuple[Solution, float]] = []
    iterations: list[int] = []
    failures: list[str] = []
    for restart in range(optimizer.restarts):
        rng = np.random.default_rng([optimizer.rng_seed, restart])
        start = initialize_solution(candidates, segmentation, rng, restart)
        x0 = objective.pack(start)
        try:
            x, value, used = minimize(
                objective.value, bounds, x0, optimizer, gradient=gradient
            )
        except OptimizationError as exc:
            failures.append(f"restart {restart}: {exc}")
            continue
        solutions.append((objective.unpack(x), value))
        iterations.append(used)
    if not solutions:
        raise OptimizationError(
            "all restarts aborted: " + "; ".join(failures)
        )
    best_index = min(range(len(solutions)), key=lambda i: solutions[i][1])
    best, value = solutions[best_index]
    return StoryResult(
        best_solution=best,
        objective_value=value,
        all_restart_solutions=solutions,
        iterations_used=iterations,
        config=segmentation,
        variant=variant,
    )


def extract_story(
    result: StoryResult, candidates: CandidateSet, top_k: int
) -> Story:
    """Rank documents into segments from the best fitted solution.

    Each document goes to its most probable segment and is ranked there
    by weight times membership probability (ties broken by id); every
    segment keeps its top_k documents.
    """
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    config = result.config
    solution = result.best_solution
    boundaries = solution_boundaries(
        solution.interior_turning_points, config.date_max
    )
    segments = segments_from_boundaries(boundaries)
    story_segments = [StorySegment(seg.lower, seg.upper) for seg in segments]
    for i, doc in enumerate(candidates.documents):
        probs = membership_probabilities(
            float(candidates.scaled_times[i]), segments, config.gamma_variance
        )
        seg_idx = int(np.argmax(probs))
        story_segments[seg_idx].docs.append(
            RankedDoc(
                doc_id=doc.doc_id,
                weight=float(solution.weights[i]),
                membership=float(probs[seg_idx]),
            )
        )
    for seg in story_segments:
        seg.docs.sort(key=lambda d: (-d.weight * d.membership, d.doc_id))
        del seg.docs[top_k:]
    return Story(
        turning_points=[float(b) for b in boundaries],
        segments=story_segments,
        seed_ids=candidates.seed_ids,
    )
