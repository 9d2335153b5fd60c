"""Objective terms and variants for story segmentation.

The decision variables are a vector T of interior turning points on
the scaled timeline (the outermost turning points are pinned to 0 and
date_max) and a per-document relevance weight vector W in [0, 1]^n.
Segments are the intervals between consecutive turning points.

Five objective variants are provided. F1 through F3 assign documents
hard to segments (by membership-probability argmax) and combine the
discrete terms; F4 and F5 are smooth: every pair contribution is
weighted by Gaussian-tailed segment memberships, and F5 additionally
weighs pairs by document relevance and multiplies in the overlap and
uniformity penalty factors. All functions here are pure.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .candidates import CandidateSet

DEGENERACY_FLOOR = 1e-12

VARIANTS = ("F1", "F2", "F3", "F4", "F5")


@dataclass(frozen=True)
class SegmentationConfig:
    """Hyperparameters of the segmentation model.

    num_segments is |S| (so there are num_segments - 1 interior turning
    points); gamma_variance is the variance of the membership tails;
    overlap_sigma the Gaussian width of the turning-point overlap
    penalty; date_max the upper end of the scaled timeline.
    """

    num_segments: int
    gamma_variance: float = 4.0
    overlap_sigma: float = 5.0
    date_max: float = 100.0

    def __post_init__(self):
        if self.num_segments < 1:
            raise ValueError(f"num_segments must be >= 1, got {self.num_segments}")
        if not self.gamma_variance > 0:
            raise ValueError(f"gamma_variance must be > 0, got {self.gamma_variance}")
        if not self.overlap_sigma > 0:
            raise ValueError(f"overlap_sigma must be > 0, got {self.overlap_sigma}")
        if not self.date_max > 0:
            raise ValueError(f"date_max must be > 0, got {self.date_max}")


@dataclass(frozen=True)
class SegmentBounds:
    """The closed time interval [lower, upper] of one segment."""

    lower: float
    upper: float

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(
                f"segment bounds out of order: {self.lower} > {self.upper}"
            )


@dataclass
class Solution:
    """One point of the search space: interior turning points and weights."""

    interior_turning_points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.interior_turning_points = np.asarray(
            self.interior_turning_points, dtype=float
        )
        self.weights = np.asarray(self.weights, dtype=float)


class SoftTermResult(NamedTuple):
    """Value of a soft term plus a degeneracy flag.

    ``degenerate`` is True when the normalizing mass fell below the
    numerical floor (for example, all weights zero), in which case the
    value is defined as 0.
    """

    value: float
    degenerate: bool


# -- distances ---------------------------------------------------------------


def soergel(a: dict, b: dict) -> float:
    """Soergel distance between two sparse non-negative vectors.

    sum of |a_e - b_e| over the union support, divided by the sum of
    max(a_e, b_e). A metric with range [0, 1] on non-negative vectors;
    two empty vectors are at distance 0.
    """
    if not a and not b:
        return 0.0
    num = 0.0
    den = 0.0
    # sorted union keeps the summation order independent of argument
    # order, so symmetry holds bit-exactly
    for key in sorted(a.keys() | b.keys()):
        av = a.get(key, 0.0)
        bv = b.get(key, 0.0)
        num += abs(av - bv)
        den += av if av >= bv else bv
    if den == 0.0:
        return 0.0
    return num / den


def soergel_matrix(weights: np.ndarray) -> np.ndarray:
    """Pairwise Soergel distances between the rows of a dense matrix.

    Uses the identity sum(max(a,b)) = (sum(a) + sum(b) + L1(a,b)) / 2,
    valid for non-negative rows, so the whole matrix reduces to one L1
    pairwise-distance computation. Pairs with zero denominator (two
    all-zero rows) are at distance 0.
    """
    weights = np.asarray(weights, dtype=float)
    n = weights.shape[0]
    if n == 0:
        return np.zeros((0, 0))
    if n == 1:
        return np.zeros((1, 1))
    l1 = squareform(pdist(weights, metric="cityblock"))
    sums = weights.sum(axis=1)
    den = sums[:, None] + sums[None, :] + l1
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(den > 0.0, 2.0 * l1 / np.where(den > 0.0, den, 1.0), 0.0)
    np.fill_diagonal(out, 0.0)
    return out


def dense_weight_matrix(candidates: CandidateSet, n_entities: int | None = None) -> np.ndarray:
    """Stack the candidates' sparse tf-idf vectors into a dense matrix."""
    if n_entities is None:
        n_entities = 0
        for doc in candidates.documents:
            if doc.weights:
                n_entities = max(n_entities, max(doc.weights) + 1)
    out = np.zeros((len(candidates.documents), n_entities))
    for i, doc in enumerate(candidates.documents):
        for idx, w in doc.weights.items():
            out[i, idx] = w
    return out


def date_delta(t_i: float, t_j: float) -> float:
    """Absolute gap between two scaled times."""
    return abs(t_i - t_j)


# -- membership --------------------------------------------------------------


def gamma_membership(t: float, bounds: SegmentBounds, gamma_variance: float) -> float:
    """Smooth membership score of time t in a segment.

    Constant at the Gaussian peak density 1/sqrt(2 pi gamma_variance)
    across the whole segment, with Gaussian tails centered exactly at
    the segment bounds outside it, so the function is continuous
    everywhere and tends to 0 far away.
    """
    peak = 1.0 / math.sqrt(2.0 * math.pi * gamma_variance)
    return peak * rescaled_membership(t, bounds, gamma_variance)


def rescaled_membership(t: float, bounds: SegmentBounds, gamma_variance: float) -> float:
    """Membership rescaled so the plateau is exactly 1.

    This is the form used inside the soft pair weights, where factors
    like (1 - membership) require the score to stay within [0, 1].
    """
    if t < bounds.lower:
        d = t - bounds.lower
    elif t > bounds.upper:
        d = t - bounds.upper
    else:
        return 1.0
    return math.exp(-(d * d) / (2.0 * gamma_variance))


def membership_matrix(
    times: np.ndarray, boundaries: np.ndarray, gamma_variance: float
) -> np.ndarray:
    """Rescaled memberships of every time in every segment.

    Parameters
    ----------
    times : ndarray, shape (n,)
    boundaries : ndarray, shape (S+1,)
        Non-decreasing full turning-point vector (both ends included).
    gamma_variance : float

    Returns
    -------
    ndarray, shape (S, n)
        Row s holds the rescaled membership of each time in segment s.
    """
    times = np.asarray(times, dtype=float)
    boundaries = np.asarray(boundaries, dtype=float)
    lo = boundaries[:-1, None]
    hi = boundaries[1:, None]
    t = times[None, :]
    d = np.where(t < lo, t - lo, np.where(t > hi, t - hi, 0.0))
    return np.exp(-(d * d) / (2.0 * gamma_variance))


def membership_probabilities(
    t: float, all_segments: list[SegmentBounds], gamma_variance: float
) -> np.ndarray:
    """Normalize the membership scores of t across segments to a simplex.

    When every score underflows to zero (t astronomically far from all
    segments), the uniform distribution is returned with a warning.
    """
    if not all_segments:
        raise ValueError("need at least one segment")
    scores = np.array(
        [rescaled_membership(t, seg, gamma_variance) for seg in all_segments]
    )
    total = scores.sum()
    if total <= 0.0:
        warnings.warn(
            f"membership scores for t={t} underflowed in every segment; "
            "returning the uniform distribution"
        )
        return np.full(len(all_segments), 1.0 / len(all_segments))
    return scores / total


def solution_boundaries(interior_points, date_max: float) -> np.ndarray:
    """Full sorted turning-point vector with the fixed endpoints added."""
    interior = np.sort(np.asarray(interior_points, dtype=float))
    return np.concatenate(([0.0], interior, [date_max]))


def segments_from_boundaries(boundaries: np.ndarray) -> list[SegmentBounds]:
    return [
        SegmentBounds(float(lo), float(hi))
        for lo, hi in zip(boundaries[:-1], boundaries[1:])
    ]


def hard_assignments(
    times, all_segments: list[SegmentBounds], gamma_variance: float
) -> np.ndarray:
    """Assign each time to the segment with the highest membership.

    Ties go to the earlier segment (argmax takes the first maximum).
    """
    out = np.empty(len(times), dtype=int)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for i, t in enumerate(times):
            probs = membership_probabilities(float(t), all_segments, gamma_variance)
            out[i] = int(np.argmax(probs))
    return out


# -- discrete terms ----------------------------------------------------------


def incoherence_v1(segment_docs: list[dict]) -> float:
    """Mean pairwise Soergel distance within a segment (0 if fewer than 2 docs)."""
    n = len(segment_docs)
    if n < 2:
        return 0.0
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            total += soergel(segment_docs[i], segment_docs[j])
    return total / (n * (n - 1) / 2)


def incoherence_v2(segment_docs: list[dict], times) -> float:
    """Mean of Soergel distance times date gap over within-segment pairs."""
    n = len(segment_docs)
    if n < 2:
        return 0.0
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            total += soergel(segment_docs[i], segment_docs[j]) * date_delta(
                times[i], times[j]
            )
    return total / (n * (n - 1) / 2)


def unconnectedness(segment_docs: list[dict], other_docs: list[dict]) -> float:
    """Mean Soergel distance between a segment and everything outside it."""
    if not segment_docs or not other_docs:
        return 0.0
    total = 0.0
    for a in segment_docs:
        for b in other_docs:
            total += soergel(a, b)
    return total / (len(segment_docs) * len(other_docs))


def similarity_v1(segment_docs: list[dict], other_docs: list[dict]) -> float:
    """Mean of exp(-Soergel) between a segment and everything outside it.

    Returns 0 when either side is empty (an empty segment contributes
    nothing to the objective composition).
    """
    if not segment_docs or not other_docs:
        return 0.0
    total = 0.0
    for a in segment_docs:
        for b in other_docs:
            total += math.exp(-soergel(a, b))
    return total / (len(segment_docs) * len(other_docs))


# -- soft terms --------------------------------------------------------------


def _soft_inputs(candidates: CandidateSet, bounds: SegmentBounds, weights, gamma_variance):
    times = np.asarray(candidates.scaled_times, dtype=float)
    n = len(times)
    if weights is None:
        w = np.ones(n)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != (n,):
            raise ValueError(f"expected {n} weights, got shape {w.shape}")
    g = membership_matrix(times, np.array([bounds.lower, bounds.upper]), gamma_variance)[0]
    dense = dense_weight_matrix(candidates)
    smat = soergel_matrix(dense)
    return times, w, g, smat


def incoherence_soft(
    candidates: CandidateSet,
    bounds: SegmentBounds,
    weights=None,
    gamma_variance: float = 4.0,
) -> SoftTermResult:
    """Membership- and relevance-weighted incoherence of one segment.

    Every ordered document pair (i, j), i != j, contributes
    soergel(i, j) * |t_i - t_j| with weight w_i w_j m_i m_j, where m is
    the rescaled segment membership; the total is normalized by the
    total pair weight. Unit weights recover the purely soft variant.

    Returns
    -------
    SoftTermResult
        Value 0 with ``degenerate=True`` when the total pair weight
        falls below 1e-12 (for instance, all weights zero).
    """
    times, w, g, smat = _soft_inputs(candidates, bounds, weights, gamma_variance)
    u = w * g
    pair = np.outer(u, u)
    np.fill_diagonal(pair, 0.0)
    den = float(pair.sum())
    if den < DEGENERACY_FLOOR:
        return SoftTermResult(0.0, True)
    delta = np.abs(times[:, None] - times[None, :])
    num = float((pair * smat * delta).sum())
    return SoftTermResult(num / den, False)


def similarity_soft(
    candidates: CandidateSet,
    bounds: SegmentBounds,
    weights=None,
    gamma_variance: float = 4.0,
) -> SoftTermResult:
    """Membership- and relevance-weighted similarity of a segment to the rest.

    Pairs one side's membership with the other side's complement:
    ordered pair (i, j), i != j, contributes exp(-soergel(i, j)) with
    weight w_i w_j m_i (1 - m_j). Normalization and degeneracy handling
    mirror incoherence_soft.
    """
    times, w, g, smat = _soft_inputs(candidates, bounds, weights, gamma_variance)
    inside = w * g
    outside = w * (1.0 - g)
    pair = np.outer(inside, outside)
    np.fill_diagonal(pair, 0.0)
    den = float(pair.sum())
    if den < DEGENERACY_FLOOR:
        return SoftTermResult(0.0, True)
    num = float((pair * np.exp(-smat)).sum())
    return SoftTermResult(num / den, False)


# -- penalties ---------------------------------------------------------------


def overlap_penalty(interior_points, overlap_sigma: float) -> float:
    """Penalty factor >= 1 that grows when interior turning points collide.

    1 plus the sum over unordered pairs of interior turning points of
    a unit-height Gaussian in their gap. Empty and singleton inputs
    give exactly 1.
    """
    pts = np.asarray(interior_points, dtype=float)
    m = pts.size
    if m < 2:
        return 1.0
    diff = pts[:, None] - pts[None, :]
    kernel = np.exp(-(diff * diff) / (2.0 * overlap_sigma**2))
    iu = np.triu_indices(m, k=1)
    return 1.0 + float(kernel[iu].sum())


def uniformity_from_memberships(weights, memberships: np.ndarray) -> float:
    """Uniformity penalty from an explicit membership matrix.

    Parameters
    ----------
    weights : array_like, shape (n,)
    memberships : ndarray, shape (S, n)
        Rescaled membership scores per segment.

    Returns
    -------
    float
        1 plus one term per segment. Each effective vector
        v = (weights * memberships[s]) normalized to sum 1 contributes
        1 - (||v||_2 sqrt(n) - 1)/(sqrt(n) - 1): 0 when one-hot, 1 when
        uniform. A segment with no effective mass contributes its
        maximum 1; with a single candidate the term is 0.
    """
    w = np.asarray(weights, dtype=float)
    memberships = np.asarray(memberships, dtype=float)
    n = w.size
    total = 1.0
    for row in memberships:
        v = w * row
        mass = float(v.sum())
        if mass < DEGENERACY_FLOOR:
            total += 1.0
            continue
        if n == 1:
            continue
        norm = float(np.linalg.norm(v)) / mass
        sqrt_n = math.sqrt(n)
        total += 1.0 - (norm * sqrt_n - 1.0) / (sqrt_n - 1.0)
    return total


def uniformity_penalty(
    weights,
    candidates: CandidateSet,
    all_segments: list[SegmentBounds],
    gamma_variance: float = 4.0,
) -> float:
    """Penalty factor in [1, 1 + |S|] against uninformative weight vectors.

    See uniformity_from_memberships; the membership matrix is built
    from the candidate times and the segment bounds.
    """
    boundaries = [all_segments[0].lower] + [seg.upper for seg in all_segments]
    memberships = membership_matrix(
        np.asarray(candidates.scaled_times, dtype=float),
        np.asarray(boundaries, dtype=float),
        gamma_variance,
    )
    return uniformity_from_memberships(weights, memberships)


# -- objective variants ------------------------------------------------------


def _normalized_weights(weights: np.ndarray) -> np.ndarray:
    """Rescale a weight vector so its largest entry is 1.

    The soft terms and the uniformity penalty are invariant under
    uniform rescaling of the weights, so this changes nothing
    mathematically; it only keeps the internal mass sums away from the
    degeneracy floor when the optimizer shrinks all weights at once.
    An all-zero vector is returned unchanged.
    """
    peak = float(np.max(weights)) if weights.size else 0.0
    if peak > 0.0:
        return weights / peak
    return weights


def evaluate_objective(
    variant: str,
    candidates: CandidateSet,
    config: SegmentationConfig,
    solution: Solution,
) -> float:
    """Evaluate one objective variant at a solution.

    F1: sum over hard segments of mean pairwise Soergel distance.
    F2: sum of (date-weighted incoherence - unconnectedness), hard.
    F3: sum of date-weighted incoherence times cross-segment
        similarity, hard.
    F4: soft incoherence times soft similarity per segment, summed,
        times the overlap penalty (unit weights).
    F5: as F4 but relevance-weighted, times overlap and uniformity.

    Hard variants assign each document to its most probable segment
    (ties to the earlier one) and ignore the weight vector. The soft
    variants evaluate at max-normalized weights (a no-op by scale
    invariance), and when every segment is degenerate the
    incoherence-similarity sum is taken as 1 so that the penalties
    score the empty story; all-zero weights therefore cost
    overlap * uniformity at its maximum rather than winning outright.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown objective variant {variant!r}")
    n = len(candidates.documents)
    interior = np.asarray(solution.interior_turning_points, dtype=float)
    if interior.size != config.num_segments - 1:
        raise ValueError(
            f"expected {config.num_segments - 1} interior turning points, "
            f"got {interior.size}"
        )
    weights = np.asarray(solution.weights, dtype=float)
    if weights.size != n:
        raise ValueError(f"expected {n} weights, got {weights.size}")
    boundaries = solution_boundaries(interior, config.date_max)
    segments = segments_from_boundaries(boundaries)
    times = np.asarray(candidates.scaled_times, dtype=float)

    if variant in ("F1", "F2", "F3"):
        assign = hard_assignments(times, segments, config.gamma_variance)
        sparse = [doc.weights for doc in candidates.documents]
        total = 0.0
        for s in range(config.num_segments):
            inside = [sparse[i] for i in range(n) if assign[i] == s]
            inside_times = [times[i] for i in range(n) if assign[i] == s]
            outside = [sparse[i] for i in range(n) if assign[i] != s]
            if variant == "F1":
                total += incoherence_v1(inside)
            elif variant == "F2":
                total += incoherence_v2(inside, inside_times) - unconnectedness(
                    inside, outside
                )
            else:
                total += incoherence_v2(inside, inside_times) * similarity_v1(
                    inside, outside
                )
        return total

    soft_weights = None if variant == "F4" else _normalized_weights(weights)
    core = 0.0
    all_degenerate = True
    for seg in segments:
        inc = incoherence_soft(candidates, seg, soft_weights, config.gamma_variance)
        sim = similarity_soft(candidates, seg, soft_weights, config.gamma_variance)
        if not (inc.degenerate or sim.degenerate):
            all_degenerate = False
        core += inc.value * sim.value
    if all_degenerate:
        # with no effective mass anywhere there is no incoherence or
        # similarity signal left; the sum acts as the multiplicative
        # identity so the penalties alone score the solution, which
        # keeps empty stories strictly worse than structured ones
        core = 1.0
    value = core * overlap_penalty(interior, config.overlap_sigma)
    if variant == "F5":
        value *= uniformity_penalty(
            soft_weights, candidates, segments, config.gamma_variance
        )
    return value


class StoryObjective:
    """Batched evaluator of the smooth objective over one candidate set.

    Precomputes the pairwise Soergel matrix, its exponential kernel,
    and the date-gap matrix once, then evaluates the objective (and
    whole batches of solutions, for finite-difference gradients) with
    dense linear algebra. A solution vector packs the interior turning
    points first, then the weights.
    """

    def __init__(
        self,
        candidates: CandidateSet,
        config: SegmentationConfig,
        variant: str = "F5",
    ):
        if variant not in ("F4", "F5"):
            raise ValueError(
                f"only the smooth variants F4 and F5 can be optimized, got {variant!r}"
            )
        self.candidates = candidates
        self.config = config
        self.variant = variant
        self.times = np.asarray(candidates.scaled_times, dtype=float)
        self.n = self.times.size
        self.n_interior = config.num_segments - 1
        self.dim = self.n_interior + self.n
        dense = dense_weight_matrix(candidates)
        self.soergel = soergel_matrix(dense)
        delta = np.abs(self.times[:, None] - self.times[None, :])
        self.kernel_inc = self.soergel * delta
        self.kernel_sim = np.exp(-self.soergel)

    # -- solution packing ----------------------------------------------------

    def pack(self, solution: Solution) -> np.ndarray:
        return np.concatenate(
            [
                np.asarray(solution.interior_turning_points, dtype=float),
                np.asarray(solution.weights, dtype=float),
            ]
        )

    def unpack(self, x: np.ndarray) -> Solution:
        x = np.asarray(x, dtype=float)
        return Solution(
            interior_turning_points=np.sort(x[: self.n_interior]),
            weights=x[self.n_interior :].copy(),
        )

    def bounds(self) -> list[tuple[float, float]]:
        """Box constraints: points in [0, date_max], weights in [0, 1]."""
        return [(0.0, self.config.date_max)] * self.n_interior + [
            (0.0, 1.0)
        ] * self.n

    def value(self, x: np.ndarray) -> float:
        return float(self.value_batch(np.asarray(x, dtype=float)[None, :])[0])

    def value_batch(self, xs: np.ndarray) -> np.ndarray:
        """Objective values for a batch of packed solution vectors."""
        xs = np.asarray(xs, dtype=float)
        if xs.ndim != 2 or xs.shape[1] != self.dim:
            raise ValueError(
                f"expected batch of shape (B, {self.dim}), got {xs.shape}"
            )
        batch = xs.shape[0]
        n = self.n
        n_seg = self.config.num_segments
        points = np.sort(xs[:, : self.n_interior], axis=1)
        w = xs[:, self.n_interior :]

        zeros = np.zeros((batch, 1))
        tops = np.full((batch, 1), self.config.date_max)
        boundaries = np.concatenate([zeros, points, tops], axis=1)
        lo = boundaries[:, :-1, None]
        hi = boundaries[:, 1:, None]
        t = self.times[None, None, :]
        d = np.where(t < lo, t - lo, np.where(t > hi, t - hi, 0.0))
        memberships = np.exp(-(d * d) / (2.0 * self.config.gamma_variance))

        if self.variant == "F4":
            soft_w = np.ones_like(w)
        else:
            peak = w.max(axis=1, keepdims=True)
            safe = np.where(peak > 0.0, peak, 1.0)
            soft_w = np.where(peak > 0.0, w / safe, w)
        u = soft_w[:, None, :] * memberships
        y = soft_w[:, None, :] * (1.0 - memberships)

        flat_u = u.reshape(batch * n_seg, n)
        inc_num = ((flat_u @ self.kernel_inc) * flat_u).sum(axis=1).reshape(batch, n_seg)
        sum_u = u.sum(axis=2)
        inc_den = sum_u**2 - (u * u).sum(axis=2)

        flat_y = y.reshape(batch * n_seg, n)
        cross = ((flat_u @ self.kernel_sim) * flat_y).sum(axis=1).reshape(batch, n_seg)
        uy = (u * y).sum(axis=2)
        sim_num = cross - uy
        sim_den = sum_u * y.sum(axis=2) - uy

        inc_deg = inc_den < DEGENERACY_FLOOR
        sim_deg = sim_den < DEGENERACY_FLOOR
        inc = np.where(inc_deg, 0.0, inc_num / np.where(inc_deg, 1.0, inc_den))
        sim = np.where(sim_deg, 0.0, sim_num / np.where(sim_deg, 1.0, sim_den))
        core = (inc * sim).sum(axis=1)
        # fully degenerate rows fall back to the penalties alone (the
        # sum acts as the multiplicative identity), matching
        # evaluate_objective
        core = np.where((inc_deg | sim_deg).all(axis=1), 1.0, core)

        if self.n_interior >= 2:
            diff = points[:, :, None] - points[:, None, :]
            kern = np.exp(-(diff * diff) / (2.0 * self.config.overlap_sigma**2))
            iu = np.triu_indices(self.n_interior, k=1)
            overlap = 1.0 + kern[:, iu[0], iu[1]].sum(axis=1)
        else:
            overlap = np.ones(batch)

        if self.variant == "F4":
            return core * overlap

        uw = soft_w[:, None, :] * memberships
        mass = uw.sum(axis=2)
        norm = np.sqrt((uw * uw).sum(axis=2))
        if n == 1:
            terms = np.where(mass < DEGENERACY_FLOOR, 1.0, 0.0)
        else:
            sqrt_n = math.sqrt(n)
            ratio = norm / np.where(mass < DEGENERACY_FLOOR, 1.0, mass)
            terms = np.where(
                mass < DEGENERACY_FLOOR,
                1.0,
                1.0 - (ratio * sqrt_n - 1.0) / (sqrt_n - 1.0),
            )
        uniformity = 1.0 + terms.sum(axis=1)
        return core * overlap * uniformity
