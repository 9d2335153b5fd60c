"""Headless PNG renderings of stories and evaluation sweeps."""

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def _finish(fig, path):
    """Render to a .partial file and move it into place."""
    partial = f"{path}.partial"
    fig.savefig(partial, dpi=110, format="png")
    plt.close(fig)
    os.replace(partial, path)
    return path


def save_story_figure(story, candidates, path):
    """Timeline scatter of weights with turning points as vertical lines."""
    weight_by_id = {
        doc.doc_id: doc.weight for segment in story.segments for doc in segment.docs
    }
    fig, ax = plt.subplots(figsize=(8, 4))
    times = candidates.scaled_times
    weights = [weight_by_id.get(d.doc_id, 0.0) for d in candidates.documents]
    ax.scatter(times, weights, s=18, color="#30618c", label="documents")
    for k, point in enumerate(story.turning_points[1:-1]):
        ax.axvline(point, color="#b3452e", linestyle="--", linewidth=1.2,
                   label="turning point" if k == 0 else None)
    for idx in range(len(candidates.documents)):
        if candidates.documents[idx].doc_id in set(story.seed_ids):
            ax.scatter([times[idx]], [weights[idx]], s=60, marker="*",
                       color="#c99700", zorder=3, label="seed")
    ax.set_xlabel("scaled time")
    ax.set_ylabel("fitted weight")
    ax.set_title("Story segmentation")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return _finish(fig, path)


def save_dispersion_figure(rows, path):
    """One mean-dispersion curve per chain construction method."""
    by_method = {}
    for theta, mean_psi, method in rows:
        by_method.setdefault(method, []).append((theta, mean_psi))
    fig, ax = plt.subplots(figsize=(7, 4))
    for method, pairs in sorted(by_method.items()):
        pairs.sort()
        ax.plot([p[0] for p in pairs], [p[1] for p in pairs],
                marker="o", markersize=3, label=method)
    ax.set_xlabel("distance threshold")
    ax.set_ylabel("mean dispersion coefficient")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title("Dispersion by chain method")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return _finish(fig, path)


def save_significance_figure(rows, path):
    """p-value sweep over the matching tolerance."""
    rows = sorted(rows)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot([r[0] for r in rows], [r[1] for r in rows], marker="o", markersize=3,
            color="#30618c")
    ax.set_xlabel("tolerance")
    ax.set_ylabel("p-value")
    ax.set_title("Turning-point significance")
    fig.tight_layout()
    return _finish(fig, path)


def save_repeatability_figure(rows, path):
    """Bucket counts against the per-coordinate distance threshold."""
    rows = sorted(rows)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot([r[0] for r in rows], [r[2] for r in rows], marker="o", markersize=3,
            color="#30618c")
    ax.set_xlabel("distance threshold")
    ax.set_ylabel("buckets")
    ax.set_title("Restart repeatability")
    fig.tight_layout()
    return _finish(fig, path)


def save_prediction_figure(named_weights, path):
    """Horizontal bars of the top predicted entity weights."""
    fig, ax = plt.subplots(figsize=(7, max(2.5, 0.3 * len(named_weights) + 1)))
    names = [name for name, _ in named_weights][::-1]
    values = [weight for _, weight in named_weights][::-1]
    ax.barh(range(len(names)), values, color="#30618c")
    ax.set_yticks(range(len(names)), names, fontsize=8)
    ax.set_xlabel("predicted weight")
    ax.set_title("Predicted future entities")
    fig.tight_layout()
    return _finish(fig, path)
