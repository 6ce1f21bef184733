"""Ingestion of SNAP-style temporal edge lists.

Pipeline: parse the raw file (densifying vertex ids in order of first
appearance), orient edges along a random vertex permutation so the result
is acyclic, sort by timestamp, and slice off train/test windows.  Duplicate
edges are retained here; they are skipped downstream at consumption time.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .graph import EdgeEvent


class ParseError(ValueError):
    """Malformed input line; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass
class Dataset:
    """A DAG-ified temporal edge stream with dense vertex ids."""

    name: str
    n: int
    events: list[EdgeEvent]
    vertex_relabeling: dict[int, int] = field(default_factory=dict)


def parse_snap(path: str) -> tuple[list[EdgeEvent], dict[int, int]]:
    """Read whitespace-separated "SRC DST TIMESTAMP" lines.

    Lines starting with '#' and blank lines are ignored.  Vertex ids are
    densified in order of first appearance; the returned map takes original
    ids to dense ones.  Self-loops and duplicates are kept at this stage.
    """
    relabeling: dict[int, int] = {}
    events: list[EdgeEvent] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            fields = stripped.split()
            if len(fields) != 3:
                raise ParseError(lineno, f"expected 3 fields, got {len(fields)}")
            try:
                src, dst, ts = (int(tok) for tok in fields)
            except ValueError:
                raise ParseError(lineno, f"non-integer field in {stripped!r}") from None
            u = relabeling.setdefault(src, len(relabeling))
            v = relabeling.setdefault(dst, len(relabeling))
            events.append(EdgeEvent(u, v, ts))
    return events, relabeling


def dagify(
    events: Sequence[EdgeEvent],
    n: int,
    seed: int,
    name: str = "",
    vertex_relabeling: dict[int, int] | None = None,
) -> Dataset:
    """Orient the stream along a seeded random vertex permutation.

    An event (u, v, t) survives iff u precedes v in the permutation, which
    drops self-loops and exactly one of every symmetric pair, and makes the
    surviving edge set acyclic for every seed (the permutation itself is a
    topological order witness).  Survivors are sorted by timestamp, stably,
    so equal timestamps keep file order.
    """
    rng = random.Random(seed)
    position = list(range(n))
    rng.shuffle(position)
    kept = [ev for ev in events if position[ev.source] < position[ev.target]]
    kept.sort(key=lambda ev: ev.timestamp)
    return Dataset(name, n, kept, dict(vertex_relabeling or {}))


def split_events(
    events: Sequence[EdgeEvent], train_frac: float, test_frac: float
) -> tuple[list[EdgeEvent], list[EdgeEvent]]:
    """Slice a timestamp-sorted stream into train and test windows.

    The test window is the last ceil(test_frac * N) events; the training
    window is the ceil(train_frac * N)-sized contiguous block immediately
    before it.  Fractions are validated but windows are clamped to the
    stream, so train_frac + test_frac = 1 uses the whole stream.
    """
    if not 0 <= train_frac <= 1 or not 0 <= test_frac <= 1:
        raise ValueError("fractions must be in [0, 1]")
    if train_frac + test_frac > 1 + 1e-9:
        raise ValueError("train_frac + test_frac must not exceed 1")
    total = len(events)
    test_n = math.ceil(test_frac * total)
    train_n = math.ceil(train_frac * total)
    test_start = total - test_n
    train_start = max(0, test_start - train_n)
    return list(events[train_start:test_start]), list(events[test_start:])


def split(
    dataset: Dataset, train_frac: float, test_frac: float
) -> tuple[list[EdgeEvent], list[EdgeEvent]]:
    return split_events(dataset.events, train_frac, test_frac)
