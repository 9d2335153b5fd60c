"""Pairwise co-occurrence regression for forecasting future entity weights."""

import dataclasses
import typing
import warnings

import numpy as np


class PairRow(typing.NamedTuple):
    """One training example linking a past entity to a future one."""

    past_entity: int
    future_entity: int
    past_weight: float
    future_weight: float
    date_gap: float


@dataclasses.dataclass(frozen=True)
class TermModel:
    """Affine model of one future entity's weight.

    Parameters
    ----------
    future_entity : int
        Vocabulary index of the predicted entity.
    coefficients : tuple of float
        (intercept, weight_coefficient, gap_coefficient).
    training_rows : int
        Number of pair rows behind the fit, at least 2.
    past_entities : frozenset of int
        Every past entity that appeared in this entity's training rows;
        prediction averages over the seed entities found in this set.
    """

    future_entity: int
    coefficients: tuple
    training_rows: int
    past_entities: frozenset

    def evaluate(self, past_weight, date_gap):
        a, b, c = self.coefficients
        return a + b * past_weight + c * date_gap


@dataclasses.dataclass(frozen=True)
class Prediction:
    """Predicted weights per entity index; empty when nothing overlapped."""

    weights: dict
    no_overlap: bool = False


def split_story_documents(story, corpus):
    """Train docs from all but the last segment, test docs from the last."""
    if len(story.segments) < 2:
        raise ValueError("need at least 2 segments to split train and test")
    train, test = [], []
    for k, segment in enumerate(story.segments):
        bucket = test if k == len(story.segments) - 1 else train
        bucket.extend(corpus.document(doc.doc_id) for doc in segment.docs)
    return train, test


def build_pair_table(training_docs):
    """Cross every entity of an earlier doc with every entity of a later one.

    Parameters
    ----------
    training_docs : list of WeightedDocument
        Order does not matter; pairs are formed from strict date order.

    Returns
    -------
    list of PairRow
        One row per (earlier doc, later doc, past entity, future entity)
        combination, carrying both tf-idf weights and the raw day gap.
        Documents sharing a date produce no mutual rows.
    """
    docs = sorted(training_docs, key=lambda d: (d.timestamp, d.doc_id))
    rows = []
    for i, past in enumerate(docs):
        for future in docs[i + 1 :]:
            gap = float((future.timestamp - past.timestamp).days)
            if gap <= 0:
                continue
            for e_p, w_p in past.weights.items():
                for e_f, w_f in future.weights.items():
                    rows.append(PairRow(e_p, e_f, w_p, w_f, gap))
    return rows


def fit_term_models(table):
    """Least-squares fit of every future entity's weight on (past weight, gap).

    Parameters
    ----------
    table : list of PairRow
        Non-empty training table from build_pair_table.

    Returns
    -------
    dict
        future_entity -> TermModel. Entities with fewer than 2 rows are
        skipped (reported via a warning); rank-deficient designs take the
        minimum-norm solution.
    """
    if not table:
        raise ValueError("training table is empty")
    grouped = {}
    for row in table:
        grouped.setdefault(row.future_entity, []).append(row)
    models = {}
    skipped = []
    for entity, rows in grouped.items():
        if len(rows) < 2:
            skipped.append(entity)
            continue
        design = np.array([[1.0, r.past_weight, r.date_gap] for r in rows])
        target = np.array([r.future_weight for r in rows])
        coeffs, _, _, _ = np.linalg.lstsq(design, target, rcond=None)
        models[entity] = TermModel(
            future_entity=entity,
            coefficients=(float(coeffs[0]), float(coeffs[1]), float(coeffs[2])),
            training_rows=len(rows),
            past_entities=frozenset(r.past_entity for r in rows),
        )
    if skipped:
        warnings.warn(
            f"skipped {len(skipped)} future entities with fewer than 2 training rows"
        )
    return models


def predict_future_weights(seed_doc, date_gap, models):
    """Average each term model over the seed entities it was trained on.

    Parameters
    ----------
    seed_doc : WeightedDocument
        Supplies the past weights to feed the models.
    date_gap : float
        Days ahead to predict, strictly positive.
    models : dict
        future_entity -> TermModel from fit_term_models.

    Returns
    -------
    Prediction
        Per-entity predictions clamped to [0, 1]; entities whose training
        rows share no entity with the seed are omitted, and a seed sharing
        nothing with the table yields an empty map with ``no_overlap`` set.
    """
    if date_gap <= 0:
        raise ValueError("date_gap must be positive")
    seed_entities = set(seed_doc.weights)
    predicted = {}
    for entity, model in models.items():
        overlap = seed_entities & model.past_entities
        if not overlap:
            continue
        value = float(
            np.mean(
                [model.evaluate(seed_doc.weights[e], date_gap) for e in sorted(overlap)]
            )
        )
        predicted[entity] = min(1.0, max(0.0, value))
    return Prediction(weights=predicted, no_overlap=not predicted)


def top_predicted(prediction, vocabulary, limit=20):
    """Highest-weight predictions as (entity name, weight) pairs."""
    ranked = sorted(
        prediction.weights.items(),
        key=lambda item: (-item[1], vocabulary.names[item[0]]),
    )
    return [(vocabulary.names[idx], weight) for idx, weight in ranked[:limit]]
