"""Incremental topological ordering and cycle detection with predictions."""

from .graph import (
    CostCounters,
    Digraph,
    EdgeEvent,
    InsertAfterTermination,
    InsertOutcome,
    InvariantViolation,
    ancestor_edge_counts,
    creates_cycle,
    descendant_edge_counts,
    is_topological,
    prediction_error,
)
from .baselines import FdfsOrder, dfs1
from .ideal import IdealOrder, IdealStats, InnerSolver
from .ingest import Dataset, ParseError, dagify, parse_snap, split, split_events
from .ldfs import LdfsOrder
from .predictions import (
    PredictionSet,
    add_noise,
    synthetic_dag_stream,
    train_predictions,
    zero_predictions,
)

__all__ = [
    "CostCounters",
    "Dataset",
    "Digraph",
    "EdgeEvent",
    "FdfsOrder",
    "IdealOrder",
    "IdealStats",
    "InnerSolver",
    "InsertAfterTermination",
    "InsertOutcome",
    "InvariantViolation",
    "LdfsOrder",
    "ParseError",
    "PredictionSet",
    "add_noise",
    "ancestor_edge_counts",
    "creates_cycle",
    "dagify",
    "descendant_edge_counts",
    "dfs1",
    "is_topological",
    "parse_snap",
    "prediction_error",
    "split",
    "split_events",
    "synthetic_dag_stream",
    "train_predictions",
    "zero_predictions",
]

__version__ = "0.1.0"
