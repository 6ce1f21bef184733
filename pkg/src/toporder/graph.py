"""Shared graph representation and brute-force ground-truth oracles.

The incremental ordering structures in this package all sit on top of a
plain adjacency-list digraph with a fixed vertex count.  This module also
provides the slow-but-obviously-correct reference computations (ancestor
and descendant edge counts, prediction error, from-scratch cycle checks)
that the test suite uses to validate the incremental structures.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence


class EdgeEvent(NamedTuple):
    """A timestamped directed edge from an input stream."""

    source: int
    target: int
    timestamp: int


class InsertOutcome(enum.Enum):
    OK = "ok"
    CYCLE_DETECTED = "cycle"
    DUPLICATE = "duplicate"


class InsertAfterTermination(RuntimeError):
    """Raised when inserting into a structure that already reported a cycle."""


class InvariantViolation(AssertionError):
    """Raised by the debug invariant checkers on the ordering structures."""


@dataclass
class CostCounters:
    """Work counters shared by all algorithms.

    vertices_processed and edges_processed count search work only: a vertex
    is counted when a search or relabel step reads or writes its state, an
    edge when an adjacency-list entry is examined.  Constant per-insert
    bookkeeping (duplicate checks, the level comparison of the two
    endpoints) is not counted, so a structure that never searches reports
    zero cost.  The same convention is applied to every algorithm so that
    ratios are comparable.
    """

    vertices_processed: int = 0
    edges_processed: int = 0
    level_updates: int = 0
    relabels: int = 0

    def total(self) -> int:
        return self.vertices_processed + self.edges_processed


class Digraph:
    """Directed graph on a fixed set of vertices 0..n-1.

    Keeps mutually consistent out- and in-adjacency lists plus an edge set
    for O(1) duplicate detection.  Self-loops and duplicate edges are
    rejected; all structures in this package treat them as special cases
    before touching the graph.
    """

    __slots__ = ("n", "out_adj", "in_adj", "edge_set", "edge_list")

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("vertex count must be at least 1")
        self.n = n
        self.out_adj: list[list[int]] = [[] for _ in range(n)]
        self.in_adj: list[list[int]] = [[] for _ in range(n)]
        self.edge_set: set[tuple[int, int]] = set()
        self.edge_list: list[tuple[int, int]] = []

    @property
    def m(self) -> int:
        return len(self.edge_list)

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range [0, {self.n})")

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edge_set

    def add_edge(self, u: int, v: int) -> None:
        self.check_vertex(u)
        self.check_vertex(v)
        if u == v:
            raise ValueError("self-loops are not representable")
        if (u, v) in self.edge_set:
            raise ValueError(f"duplicate edge ({u}, {v})")
        self.edge_set.add((u, v))
        self.edge_list.append((u, v))
        self.out_adj[u].append(v)
        self.in_adj[v].append(u)

    def add_edges(self, edges: Iterable[tuple[int, int]]) -> None:
        for u, v in edges:
            self.add_edge(u, v)

    def reversed_copy(self) -> "Digraph":
        g = Digraph(self.n)
        for u, v in self.edge_list:
            g.add_edge(v, u)
        return g

    def is_acyclic(self) -> bool:
        indeg = [len(parents) for parents in self.in_adj]
        queue = deque(v for v in range(self.n) if indeg[v] == 0)
        seen = 0
        while queue:
            v = queue.popleft()
            seen += 1
            for w in self.out_adj[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
        return seen == self.n


def _reachable(adj: list[list[int]], start: int) -> list[int]:
    """Vertices reachable from start (inclusive) following adj."""
    seen = bytearray(len(adj))
    seen[start] = 1
    stack = [start]
    out = [start]
    while stack:
        x = stack.pop()
        for w in adj[x]:
            if not seen[w]:
                seen[w] = 1
                out.append(w)
                stack.append(w)
    return out


def ancestor_edge_counts(g: Digraph) -> list[int]:
    """Exact per-vertex count of edges whose target reaches the vertex.

    A vertex is an ancestor of itself, so an edge ending at v counts toward
    v.  Computed by per-vertex reverse reachability, independent of any
    incremental structure.  Raises ValueError if g has a cycle.
    """
    if not g.is_acyclic():
        raise ValueError("graph not acyclic")
    indeg = [len(parents) for parents in g.in_adj]
    return [sum(indeg[b] for b in _reachable(g.in_adj, v)) for v in range(g.n)]


def descendant_edge_counts(g: Digraph) -> list[int]:
    """Exact per-vertex count of edges whose source is reached by the vertex."""
    if not g.is_acyclic():
        raise ValueError("graph not acyclic")
    outdeg = [len(children) for children in g.out_adj]
    return [sum(outdeg[a] for a in _reachable(g.out_adj, v)) for v in range(g.n)]


def prediction_error(preds, g_final: Digraph) -> int:
    """Max per-vertex prediction error against the final graph, clamped to >= 1.

    The per-vertex error is |alpha_pred - alpha|; when the prediction set
    also carries descendant-edge predictions the two absolute errors are
    summed.  The clamp floor keeps downstream bounds meaningful when the
    predictions are exact.
    """
    alpha = ancestor_edge_counts(g_final)
    errors = [abs(p - a) for p, a in zip(preds.alpha, alpha)]
    if preds.delta is not None:
        delta = descendant_edge_counts(g_final)
        errors = [e + abs(p - d) for e, p, d in zip(errors, preds.delta, delta)]
    return max(1, max(errors, default=0))


def is_topological(labels: Sequence[int], g: Digraph, strict: bool = True) -> bool:
    """True iff every edge (u, v) satisfies labels[u] < labels[v] (or <=)."""
    if strict:
        return all(labels[u] < labels[v] for u, v in g.edge_list)
    return all(labels[u] <= labels[v] for u, v in g.edge_list)


def creates_cycle(g: Digraph, u: int, v: int) -> bool:
    """True iff adding edge (u, v) to the acyclic graph g would close a cycle.

    Equivalent to a from-scratch reachability check of u from v; does not
    mutate g.  A self-loop always creates a cycle; a duplicate of an
    existing edge never creates a new one.
    """
    g.check_vertex(u)
    g.check_vertex(v)
    if u == v:
        return True
    seen = bytearray(g.n)
    seen[v] = 1
    stack = [v]
    out_adj = g.out_adj
    while stack:
        x = stack.pop()
        for w in out_adj[x]:
            if w == u:
                return True
            if not seen[w]:
                seen[w] = 1
                stack.append(w)
    return False
