"""Prediction-free baselines.

DFS I is the level-DFS structure with all-zero predictions.  DFS II keeps a
strict permutation of the vertices (one vertex per level) and repairs it
with a partial forward DFS plus a window shift whenever an edge lands
against the current order.
"""
from __future__ import annotations

import random

from .graph import (
    CostCounters,
    Digraph,
    InsertAfterTermination,
    InsertOutcome,
    InvariantViolation,
)
from .ldfs import LdfsOrder


def dfs1(n: int, capacity: int, costs: CostCounters | None = None) -> LdfsOrder:
    """The zero-prediction baseline; byte-for-byte the warm-started structure
    with every level seeded at zero."""
    return LdfsOrder(n, [0] * n, capacity, costs=costs)


class FdfsOrder:
    """Incremental topological order maintaining a total vertex permutation.

    The initial permutation is a seeded uniform shuffle.  On insert (u, v)
    with v positioned before u, a partial DFS from v gathers everything
    reachable from v below u's position; reaching u itself proves a cycle,
    otherwise the gathered block is moved to sit immediately after u,
    preserving relative order.
    """

    def __init__(self, n: int, seed: int = 0, costs: CostCounters | None = None):
        if n < 1:
            raise ValueError("need at least one vertex")
        self.n = n
        rng = random.Random(seed)
        self.order = list(range(n))
        rng.shuffle(self.order)
        self.position = [0] * n
        for idx, v in enumerate(self.order):
            self.position[v] = idx
        self.graph = Digraph(n)
        self.costs = costs if costs is not None else CostCounters()
        self.terminated = False
        self._mark = [0] * n
        self._stamp = 0

    def label(self, v: int) -> int:
        return self.position[v]

    def labels(self) -> list[int]:
        return list(self.position)

    def insert(self, u: int, v: int) -> InsertOutcome:
        if self.terminated:
            raise InsertAfterTermination("structure already reported a cycle")
        self.graph.check_vertex(u)
        self.graph.check_vertex(v)
        if self.graph.has_edge(u, v):
            return InsertOutcome.DUPLICATE
        if u == v:
            self.terminated = True
            return InsertOutcome.CYCLE_DETECTED

        self.graph.add_edge(u, v)
        position = self.position
        pos_u = position[u]
        if position[v] > pos_u:
            return InsertOutcome.OK

        # Partial DFS from v over vertices positioned before u; an edge
        # reaching u closes a cycle (any v->u path stays below u's position
        # because the permutation was topological before this insert).
        self._stamp += 1
        stamp = self._stamp
        mark = self._mark
        out_adj = self.graph.out_adj
        mark[v] = stamp
        stack = [v]
        verts = 1
        edges = 0
        while stack:
            x = stack.pop()
            for w in out_adj[x]:
                edges += 1
                if w == u:
                    self.costs.vertices_processed += verts
                    self.costs.edges_processed += edges
                    self.terminated = True
                    return InsertOutcome.CYCLE_DETECTED
                if position[w] < pos_u and mark[w] != stamp:
                    mark[w] = stamp
                    verts += 1
                    stack.append(w)

        lo = position[v]
        window = self.order[lo : pos_u + 1]
        kept = [x for x in window if mark[x] != stamp]  # ends with u
        moved = [x for x in window if mark[x] == stamp]
        level_changes = 0
        for offset, x in enumerate(kept + moved):
            idx = lo + offset
            if self.order[idx] != x:
                self.order[idx] = x
                position[x] = idx
                level_changes += 1
        costs = self.costs
        costs.vertices_processed += verts + len(window)
        costs.edges_processed += edges
        costs.level_updates += level_changes
        return InsertOutcome.OK

    def check_invariants(self) -> None:
        """Validate that the permutation is a bijection and topological."""
        if self.terminated:
            return
        if sorted(self.order) != list(range(self.n)):
            raise InvariantViolation("order is not a permutation")
        for idx, v in enumerate(self.order):
            if self.position[v] != idx:
                raise InvariantViolation("position map out of sync")
        for x, y in self.graph.edge_list:
            if self.position[x] >= self.position[y]:
                raise InvariantViolation(f"edge ({x}, {y}) against the order")
