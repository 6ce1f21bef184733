"""Prediction generation, noise injection, and synthetic stream generation.

Predictions are per-vertex forecasts of the final ancestor-edge count (and
optionally the descendant-edge count).  The training procedure is plain
prefix counting: build the graph of a historical window and read off the
exact counts of that graph.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from statistics import pstdev
from typing import Sequence

from .graph import (
    Digraph,
    EdgeEvent,
    ancestor_edge_counts,
    descendant_edge_counts,
)


@dataclass
class PredictionSet:
    """Per-vertex predicted ancestor-edge counts, optionally descendant too.

    Values are nonnegative integers; provenance is a free-form tag used in
    experiment output ("trained(0.05)", "zero", "noisy(2.0, seed=7)", ...).
    """

    alpha: list[int]
    delta: list[int] | None = None
    provenance: str = ""

    def __post_init__(self):
        if any(a < 0 for a in self.alpha):
            raise ValueError("predictions must be nonnegative")
        if self.delta is not None:
            if len(self.delta) != len(self.alpha):
                raise ValueError("alpha and delta must have equal length")
            if any(d < 0 for d in self.delta):
                raise ValueError("predictions must be nonnegative")

    def __len__(self) -> int:
        return len(self.alpha)


def zero_predictions(n: int) -> PredictionSet:
    return PredictionSet([0] * n, [0] * n, provenance="zero")


def train_predictions(training_events: Sequence[EdgeEvent], n: int) -> PredictionSet:
    """Count ancestor/descendant edges of the graph formed by a training window.

    Duplicate events are skipped; self-loops must already have been removed
    (the ingest pipeline guarantees both for DAG-ified data).  Raises
    ValueError if the training edges contain a cycle.
    """
    g = Digraph(n)
    for ev in training_events:
        if not g.has_edge(ev.source, ev.target):
            g.add_edge(ev.source, ev.target)
    frac = f"{len(training_events)} events"
    return PredictionSet(
        ancestor_edge_counts(g),
        descendant_edge_counts(g),
        provenance=f"trained({frac})",
    )


def add_noise(preds: PredictionSet, c: float, seed: int, g_final: Digraph) -> PredictionSet:
    """Perturb ancestor predictions with seeded Gaussian noise.

    The noise scale is c times the population standard deviation of the
    prediction error measured against g_final.  Outputs are rounded and
    clamped at zero so they remain valid predictions.  c = 0, or an error
    spread of zero, returns the predictions unchanged.  Descendant
    predictions pass through untouched.
    """
    if c < 0:
        raise ValueError("noise multiplier must be nonnegative")
    alpha_true = ancestor_edge_counts(g_final)
    spread = pstdev(p - a for p, a in zip(preds.alpha, alpha_true))
    provenance = f"noisy({c}, seed={seed})"
    if c == 0 or spread == 0:
        return PredictionSet(list(preds.alpha), _copy(preds.delta), provenance)
    rng = random.Random(seed)
    sigma = c * spread
    noisy = [max(0, round(a + rng.gauss(0.0, sigma))) for a in preds.alpha]
    return PredictionSet(noisy, _copy(preds.delta), provenance)


def _copy(values: list[int] | None) -> list[int] | None:
    return None if values is None else list(values)


def synthetic_dag_stream(n: int, p: float, seed: int) -> list[EdgeEvent]:
    """Random DAG edge stream: each forward pair (u, v), u < v, kept with
    probability p, then the surviving edges arrive in a random order.

    Acyclic by construction; timestamps are the shuffled sequence indices.
    """
    if not 0 <= p <= 1:
        raise ValueError("edge probability must be in [0, 1]")
    rng = random.Random(seed)
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]
    rng.shuffle(edges)
    return [EdgeEvent(u, v, t) for t, (u, v) in enumerate(edges)]
