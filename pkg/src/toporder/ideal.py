"""Two-dimensional prediction decomposition for incremental ordering.

Vertices carry an ancestor level and a descendant level, quantized by a
running error estimate that starts at 1 and doubles (with a full rebuild
and replay of the edge log) whenever a propagated level escapes the small
set of values the current estimate allows.  Vertices are bucketed into
subproblems keyed by their candidate level pairs; every edge is inserted
into each subproblem containing both endpoints, where a per-bucket inner
solver maintains a local strict order and performs cycle detection.
Labels compose the two levels with the inner label.  A safety valve drops
the whole decomposition in favor of a single flat solver when the estimate
outgrows the vertex count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol, Sequence

from .graph import (
    CostCounters,
    Digraph,
    InsertAfterTermination,
    InsertOutcome,
    InvariantViolation,
    is_topological,
)
from .ldfs import LdfsOrder


class InnerSolver(Protocol):
    """Incremental ordering solver used inside one subproblem.

    Labels must be nonnegative, bounded by the enclosing structure's label
    stride, and form a topological order of the edges inserted so far.
    """

    def insert(self, u: int, v: int) -> InsertOutcome: ...

    def label(self, v: int) -> int: ...


@dataclass(frozen=True)
class IdealStats:
    eta_hat: int
    doublings: int
    rebuilds: int
    fallback_engaged: bool
    subproblem_count: int
    max_subproblem_edges: int


class _LevelEscape(Exception):
    """A propagated level left its vertex's candidate set."""


class _Subproblem:
    __slots__ = ("key", "members", "index_of", "edges", "inner", "dense")

    def __init__(self, key: tuple[int, int]):
        self.key = key
        self.members: list[int] = []
        self.index_of: dict[int, int] = {}
        self.edges: list[tuple[int, int]] = []
        self.inner: LdfsOrder | None = None
        self.dense = False

    def add_member(self, v: int) -> None:
        self.index_of[v] = len(self.members)
        self.members.append(v)


class IdealOrder:
    """Incremental topological order driven by ancestor and descendant
    prediction levels with an adaptive error estimate.

    Takes both prediction vectors (clamped into [0, capacity]).  The
    estimate can be pre-set above 1 to reproduce a rebuilt state directly.
    """

    def __init__(
        self,
        n: int,
        alpha: Sequence[int],
        delta: Sequence[int],
        capacity: int,
        eta_hat: int = 1,
        costs: CostCounters | None = None,
    ):
        if n < 1:
            raise ValueError("need at least one vertex")
        if capacity < 1:
            raise ValueError("edge capacity must be at least 1")
        if len(alpha) != n or len(delta) != n:
            raise ValueError("predictions must have one entry per vertex")
        if any(p < 0 for p in alpha) or any(p < 0 for p in delta):
            raise ValueError("predictions must be nonnegative")
        if eta_hat < 1 or (eta_hat & (eta_hat - 1)) != 0:
            raise ValueError("error estimate must be a power of two")
        self.n = n
        self.capacity = capacity
        self.alpha = [min(int(p), capacity) for p in alpha]
        self.delta = [min(int(p), capacity) for p in delta]
        self.eta_hat = eta_hat
        self.costs = costs if costs is not None else CostCounters()
        self.event_log: list[tuple[int, int]] = []
        self.terminated = False
        self.fallback: LdfsOrder | None = None
        self.doublings = 0
        self.inner_rebuilds = 0
        # One flat inner solver can label at most this much; the stride
        # must clear it so composed labels order by level pair first.
        max_inner_label = capacity * (n * capacity + 2) + n * capacity + n
        self._label_stride = max_inner_label + 1
        self._max_doublings = int(math.log2(capacity)) + 2
        self.graph = Digraph(n)
        self.level_a: list[int] = []
        self.level_d: list[int] = []
        self.subproblems: dict[tuple[int, int], _Subproblem] = {}
        self._reset_decomposition()

    # ---- candidate levels --------------------------------------------------

    def _base_levels(self, v: int) -> tuple[int, int]:
        eta = self.eta_hat
        return -(-self.alpha[v] // eta), self.delta[v] // eta

    def possible_pairs(self, v: int) -> tuple[tuple[int, int], ...]:
        """The four candidate (ancestor, descendant) level pairs of v under
        the current estimate: one step of slack above each base level, the
        direction level updates move."""
        ca, cd = self._base_levels(v)
        return ((ca, cd), (ca, cd + 1), (ca + 1, cd), (ca + 1, cd + 1))

    def _level_allowed(self, v: int) -> bool:
        ca, cd = self._base_levels(v)
        return self.level_a[v] - ca in (0, 1) and self.level_d[v] - cd in (0, 1)

    # ---- decomposition lifecycle --------------------------------------------

    def _reset_decomposition(self) -> None:
        eta = self.eta_hat
        self.level_a = [-(-a // eta) for a in self.alpha]
        self.level_d = [d // eta for d in self.delta]
        self.graph = Digraph(self.n)
        self.subproblems = {}
        for v in range(self.n):
            for pair in self.possible_pairs(v):
                sub = self.subproblems.get(pair)
                if sub is None:
                    sub = self.subproblems[pair] = _Subproblem(pair)
                sub.add_member(v)
        for sub in self.subproblems.values():
            sub.inner = self._fresh_inner(sub)

    def _fresh_inner(self, sub: _Subproblem) -> LdfsOrder:
        # Seed each bucket with localized predictions: the global ancestor
        # prediction minus the bucket's ancestor offset.
        offset = sub.key[0] * self.eta_hat
        local = [max(0, self.alpha[v] - offset) for v in sub.members]
        return LdfsOrder(len(sub.members), local, self.capacity, costs=self.costs)

    # ---- insertion -----------------------------------------------------------

    def insert(self, u: int, v: int) -> InsertOutcome:
        if self.terminated:
            raise InsertAfterTermination("structure already reported a cycle")
        self.graph.check_vertex(u)
        self.graph.check_vertex(v)
        if self.fallback is not None:
            return self._fallback_insert(u, v)
        if self.graph.has_edge(u, v):
            return InsertOutcome.DUPLICATE
        if u == v:
            self.terminated = True
            return InsertOutcome.CYCLE_DETECTED

        self.event_log.append((u, v))
        try:
            outcome = self._apply(u, v)
        except _LevelEscape:
            outcome = self._double_and_rebuild()
        if outcome is InsertOutcome.CYCLE_DETECTED:
            self.terminated = True
            return outcome

        t = len(self.event_log)
        if self.eta_hat > self.n and t * self.eta_hat ** (1 / 3) > self.n * self.n:
            self._engage_fallback()
        return outcome

    def _apply(self, u: int, v: int) -> InsertOutcome:
        """Add the edge, propagate levels, validate them, route to buckets."""
        self.graph.add_edge(u, v)
        changed = self._propagate_levels(u, v)
        for w in changed:
            if not self._level_allowed(w):
                raise _LevelEscape
        shared = set(self.possible_pairs(u)).intersection(self.possible_pairs(v))
        for pair in sorted(shared):
            if self._route(self.subproblems[pair], u, v) is InsertOutcome.CYCLE_DETECTED:
                return InsertOutcome.CYCLE_DETECTED
        return InsertOutcome.OK

    def _propagate_levels(self, u: int, v: int) -> list[int]:
        level_a = self.level_a
        level_d = self.level_d
        out_adj = self.graph.out_adj
        in_adj = self.graph.in_adj
        changed: list[int] = []
        verts = edges = 0

        target = level_a[u]
        if target > level_a[v]:
            level_a[v] = target
            changed.append(v)
            verts += 1
            stack = [v]
            while stack:
                x = stack.pop()
                for w in out_adj[x]:
                    edges += 1
                    if level_a[w] < target:
                        level_a[w] = target
                        changed.append(w)
                        verts += 1
                        stack.append(w)

        target = level_d[v]
        if target > level_d[u]:
            level_d[u] = target
            changed.append(u)
            verts += 1
            stack = [u]
            while stack:
                x = stack.pop()
                for w in in_adj[x]:
                    edges += 1
                    if level_d[w] < target:
                        level_d[w] = target
                        changed.append(w)
                        verts += 1
                        stack.append(w)

        costs = self.costs
        costs.vertices_processed += verts
        costs.edges_processed += edges
        costs.level_updates += verts
        return changed

    def _route(self, sub: _Subproblem, u: int, v: int) -> InsertOutcome:
        n_prime = len(sub.members)
        m_prime = len(sub.edges)
        threshold = n_prime * self.eta_hat ** (2 / 3)
        if m_prime + 1 < threshold:
            pass  # sparse insert
        elif m_prime < threshold <= m_prime + 1:
            # Crossing into the dense regime: rebuild the bucket's solver
            # from scratch and replay its edges before this insert.
            self._rebuild_inner(sub)
            sub.dense = True
        else:
            sub.dense = True
        assert sub.inner is not None
        outcome = sub.inner.insert(sub.index_of[u], sub.index_of[v])
        if outcome is InsertOutcome.OK:
            sub.edges.append((u, v))
        self._absorb_inner_bound(sub)
        return outcome

    def _absorb_inner_bound(self, sub: _Subproblem) -> None:
        # An inner solver that widened its own tie-break space could outgrow
        # the label stride; grow the stride with it so composed labels keep
        # ordering by level pair first.
        assert sub.inner is not None
        bound = sub.inner.max_label_bound()
        if bound >= self._label_stride:
            self._label_stride = bound + 1

    def _rebuild_inner(self, sub: _Subproblem) -> None:
        self.inner_rebuilds += 1
        sub.inner = self._fresh_inner(sub)
        for x, y in sub.edges:
            outcome = sub.inner.insert(sub.index_of[x], sub.index_of[y])
            if outcome is not InsertOutcome.OK:
                raise InvariantViolation("bucket replay rejected a known-good edge")
        self._absorb_inner_bound(sub)

    def _double_and_rebuild(self) -> InsertOutcome:
        """Double the estimate and replay the whole log until it fits.

        Only the newest event may legitimately report a cycle during the
        replay; anything earlier would mean the structure previously
        accepted a cyclic graph.
        """
        while True:
            self.eta_hat *= 2
            self.doublings += 1
            if self.doublings > self._max_doublings:
                raise RuntimeError("error estimate doubled past its structural cap")
            self._reset_decomposition()
            last = len(self.event_log) - 1
            try:
                outcome = InsertOutcome.OK
                for i, (x, y) in enumerate(self.event_log):
                    outcome = self._apply(x, y)
                    if outcome is InsertOutcome.CYCLE_DETECTED:
                        if i != last:
                            raise InvariantViolation("replay found a cycle mid-log")
                        return outcome
                return outcome
            except _LevelEscape:
                continue

    # ---- fallback -------------------------------------------------------------

    def _engage_fallback(self) -> None:
        flat = LdfsOrder(self.n, [0] * self.n, self.capacity, costs=self.costs)
        for x, y in self.event_log:
            if flat.insert(x, y) is not InsertOutcome.OK:
                raise InvariantViolation("fallback replay rejected a known-good edge")
        self.fallback = flat
        self.subproblems = {}

    def _fallback_insert(self, u: int, v: int) -> InsertOutcome:
        assert self.fallback is not None
        outcome = self.fallback.insert(u, v)
        if outcome is InsertOutcome.OK:
            self.event_log.append((u, v))
            self.graph.add_edge(u, v)
        elif outcome is InsertOutcome.CYCLE_DETECTED:
            self.terminated = True
        return outcome

    # ---- queries ----------------------------------------------------------------

    def label(self, v: int) -> int:
        if self.fallback is not None:
            return self.fallback.label(v)
        sub = self.subproblems[(self.level_a[v], self.level_d[v])]
        assert sub.inner is not None
        inner = sub.inner.label(sub.index_of[v])
        return self._label_stride * (self.level_a[v] + self.capacity - self.level_d[v]) + inner

    def labels(self) -> list[int]:
        return [self.label(v) for v in range(self.n)]

    def stats(self) -> IdealStats:
        return IdealStats(
            eta_hat=self.eta_hat,
            doublings=self.doublings,
            rebuilds=self.inner_rebuilds,
            fallback_engaged=self.fallback is not None,
            subproblem_count=len(self.subproblems),
            max_subproblem_edges=max(
                (len(sub.edges) for sub in self.subproblems.values()), default=0
            ),
        )

    def subproblem_snapshot(self) -> list[tuple[tuple[int, int], list[int], list[tuple[int, int]]]]:
        """(key, members, edges) for every bucket; for inspection and tests."""
        return [
            (sub.key, list(sub.members), list(sub.edges))
            for sub in self.subproblems.values()
        ]

    # ---- debug --------------------------------------------------------------------

    def check_invariants(self) -> None:
        """Validate level orientation, candidate membership, and label order."""
        if self.terminated:
            return
        if self.fallback is not None:
            if not is_topological(self.fallback.labels(), self.graph, strict=True):
                raise InvariantViolation("fallback labels are not topological")
            return
        for u, v in self.graph.edge_list:
            if self.level_a[u] > self.level_a[v]:
                raise InvariantViolation(f"edge ({u}, {v}) violates ancestor levels")
            if self.level_d[u] < self.level_d[v]:
                raise InvariantViolation(f"edge ({u}, {v}) violates descendant levels")
        for v in range(self.n):
            if not self._level_allowed(v):
                raise InvariantViolation(f"vertex {v} outside its candidate levels")
            pair = (self.level_a[v], self.level_d[v])
            if pair not in self.subproblems or v not in self.subproblems[pair].index_of:
                raise InvariantViolation(f"vertex {v} missing from its level bucket")
        for sub in self.subproblems.values():
            for x, y in sub.edges:
                if x not in sub.index_of or y not in sub.index_of:
                    raise InvariantViolation("bucket holds an edge of non-members")
        if not is_topological(self.labels(), self.graph, strict=False):
            raise InvariantViolation("labels are not a weak topological order")
