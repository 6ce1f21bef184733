"""Prediction-seeded incremental topological ordering via level DFS.

Each vertex carries an integer level, initialized from its predicted
ancestor-edge count.  Edge inserts propagate levels forward so that every
edge goes from a lower-or-equal level to a higher one; a reverse DFS inside
a level detects cycles; a decreasing global counter hands out tie-break
indices that refine the levels into a strict topological labeling.
"""
from __future__ import annotations

from typing import Sequence

from .graph import (
    CostCounters,
    Digraph,
    InsertAfterTermination,
    InsertOutcome,
    InvariantViolation,
    is_topological,
)


class LdfsOrder:
    """Incremental topological order and cycle detector with warm-started levels.

    Parameters: n vertices, per-vertex ancestor-edge predictions (clamped
    into [0, capacity]), and an edge-capacity bound used to size the
    tie-break counter space.  An optional CostCounters instance can be
    shared with an enclosing structure.
    """

    def __init__(
        self,
        n: int,
        predictions: Sequence[int],
        capacity: int,
        costs: CostCounters | None = None,
    ):
        if n < 1:
            raise ValueError("need at least one vertex")
        if capacity < 1:
            raise ValueError("edge capacity must be at least 1")
        if len(predictions) != n:
            raise ValueError("predictions must have one entry per vertex")
        if any(p < 0 for p in predictions):
            raise ValueError("predictions must be nonnegative")
        self.n = n
        self.capacity = capacity
        self.graph = Digraph(n)
        self.level = [min(int(p), capacity) for p in predictions]
        self.initial_level = list(self.level)
        self.in_lists: list[list[int]] = [[] for _ in range(n)]
        # Tie-break space: assigned values live in [1, n*capacity]; the
        # sentinel n*capacity + 1 marks "never relabeled" and sorts above
        # every assigned value, and the label stride sits just above the
        # sentinel so levels always dominate.  The exhaustion valve widens
        # this space (see _reset_tiebreaks); until then it is exactly sized
        # by the declared capacity.
        self._counter_capacity = capacity
        self._sentinel = n * capacity + 1
        self.j = [self._sentinel] * n
        self.a = n * capacity
        self._label_stride = n * capacity + 2
        self.costs = costs if costs is not None else CostCounters()
        self.reverse_edges_traversed = 0
        self.tiebreak_resets = 0
        self.terminated = False
        # Per-insert visit stamps, one array per search phase.
        self._fwd_mark = [0] * n
        self._rev_mark = [0] * n
        self._stamp = 0

    # ---- queries ----------------------------------------------------------

    def label(self, v: int) -> int:
        return self.level[v] * self._label_stride + self.j[v]

    def labels(self) -> list[int]:
        stride = self._label_stride
        return [lv * stride + jv for lv, jv in zip(self.level, self.j)]

    def max_label_bound(self) -> int:
        """Upper bound on any label this structure can currently produce;
        grows only when the exhaustion valve widens the counter space."""
        return self.capacity * self._label_stride + self._sentinel

    def max_level_rise(self) -> int:
        return max(lv - l0 for lv, l0 in zip(self.level, self.initial_level))

    # ---- updates ----------------------------------------------------------

    def insert(self, u: int, v: int) -> InsertOutcome:
        """Insert edge (u, v); detect duplicates and cycles.

        After an OK outcome the labels are a strict topological order of
        the current graph.  Once a cycle is reported the structure freezes
        and further inserts raise InsertAfterTermination.
        """
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
        self._stamp += 1
        level = self.level
        lu = level[u]
        t_forward: list[int] = []
        if lu > level[v]:
            t_forward = self._raise_levels(v, lu)
        elif lu == level[v]:
            self.in_lists[v].append(u)

        t_backward: list[int] = []
        if level[v] == lu:
            found, t_backward = self._reverse_dfs(u, v)
            if found:
                self.terminated = True
                return InsertOutcome.CYCLE_DETECTED

        if t_forward or (lu == level[v] and self.j[u] >= self.j[v]):
            self._relabel(t_backward + t_forward)
        return InsertOutcome.OK

    def _raise_levels(self, start: int, new_level: int) -> list[int]:
        """Raise start to new_level, propagate forward, return the raised
        vertices in reverse postorder (a topological order of that set)."""
        level = self.level
        out_adj = self.graph.out_adj
        in_lists = self.in_lists
        mark = self._fwd_mark
        stamp = self._stamp
        verts = edges = 0

        def lift(w: int, discoverer: int | None) -> None:
            nonlocal verts, edges
            level[w] = new_level
            mark[w] = stamp
            parents = self.graph.in_adj[w]
            edges += len(parents)
            # Pre-existing parents all sat below the old level of w, so this
            # scan can only find parents raised earlier in this same pass;
            # those re-add themselves when their child scan reaches w, hence
            # the stamp filter keeps in-lists duplicate-free.
            rebuilt = [p for p in parents if level[p] == new_level and mark[p] != stamp]
            if discoverer is not None:
                rebuilt.append(discoverer)
            in_lists[w] = rebuilt
            verts += 1

        lift(start, None)
        postorder: list[int] = []
        stack = [(start, iter(out_adj[start]))]
        while stack:
            node, children = stack[-1]
            descend = -1
            for w in children:
                edges += 1
                lw = level[w]
                if lw < new_level:
                    lift(w, node)
                    descend = w
                    break
                if lw == new_level:
                    # node just rose to w's level and becomes a same-level
                    # parent of w, whether or not w was raised this pass.
                    in_lists[w].append(node)
            if descend >= 0:
                stack.append((descend, iter(out_adj[descend])))
            else:
                postorder.append(node)
                stack.pop()

        costs = self.costs
        costs.vertices_processed += verts
        costs.edges_processed += edges
        costs.level_updates += verts
        postorder.reverse()
        return postorder

    def _reverse_dfs(self, u: int, target: int) -> tuple[bool, list[int]]:
        """Walk same-level in-lists backward from u looking for target.

        Returns (found, visited-in-finish-time-order); the finish-time order
        is a topological order of the visited set because the traversed
        subgraph is acyclic whenever the target is absent.
        """
        in_lists = self.in_lists
        mark = self._rev_mark
        stamp = self._stamp
        verts = 1
        edges = 0
        mark[u] = stamp
        finish: list[int] = []
        stack = [(u, iter(in_lists[u]))]
        found = False
        while stack:
            node, parents = stack[-1]
            descend = -1
            for p in parents:
                edges += 1
                if p == target:
                    found = True
                    break
                if mark[p] != stamp:
                    mark[p] = stamp
                    verts += 1
                    descend = p
                    break
            if found:
                break
            if descend >= 0:
                stack.append((descend, iter(in_lists[descend])))
            else:
                finish.append(node)
                stack.pop()
        costs = self.costs
        costs.vertices_processed += verts
        costs.edges_processed += edges
        self.reverse_edges_traversed += edges
        return found, finish

    def _relabel(self, order: list[int]) -> None:
        """Assign fresh tie-break indices to `order` (a topological order),
        increasing along it and below every previously assigned value."""
        if self.a < len(order):
            self._reset_tiebreaks()
        j = self.j
        a = self.a
        for w in reversed(order):
            j[w] = a
            a -= 1
        self.a = a
        count = len(order)
        self.costs.relabels += count
        self.costs.vertices_processed += count

    def _reset_tiebreaks(self) -> None:
        """Exhaustion valve: widen the counter space, recompute every
        tie-break from a from-scratch topological sort (packed into the top
        of the new range, so the counter restarts below all of them), and
        carry on.  Not expected to trigger within the counter budget;
        diagnosed via tiebreak_resets."""
        self._counter_capacity = max(2, self._counter_capacity * 2)
        top = self.n * self._counter_capacity + 1
        self._sentinel = top
        self._label_stride = top + 1
        order = self._topo_sort()
        for rank, v in enumerate(order):
            self.j[v] = top - self.n + 1 + rank
        self.a = top - self.n
        self.tiebreak_resets += 1

    def _topo_sort(self) -> list[int]:
        indeg = [len(parents) for parents in self.graph.in_adj]
        ready = [v for v in range(self.n) if indeg[v] == 0]
        order: list[int] = []
        while ready:
            v = ready.pop()
            order.append(v)
            for w in self.graph.out_adj[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
        if len(order) != self.n:
            raise InvariantViolation("internal graph acquired a cycle")
        return order

    # ---- debug ------------------------------------------------------------

    def check_invariants(self) -> None:
        """Brute-force validation of the structure's documented invariants.

        Intended for tests; O(n * m).  Raises InvariantViolation with a
        description of the first violated property.
        """
        if self.terminated:
            return
        level = self.level
        for u, v in self.graph.edge_list:
            if level[u] > level[v]:
                raise InvariantViolation(f"edge ({u}, {v}) violates level order")
        for v in range(self.n):
            expected = [p for p in self.graph.in_adj[v] if level[p] == level[v]]
            got = self.in_lists[v]
            if sorted(got) != sorted(expected) or len(set(got)) != len(got):
                raise InvariantViolation(f"in-list of {v} is {got}, expected {expected}")
        if not 0 <= self.a <= self.n * self._counter_capacity:
            raise InvariantViolation(f"counter {self.a} out of range")
        top = self.n * self._counter_capacity + 1
        if any(not 1 <= jv <= top for jv in self.j):
            raise InvariantViolation("tie-break index out of range")
        # Level of v must equal the max prediction over its current ancestors.
        for v in range(self.n):
            best = self.initial_level[v]
            seen = bytearray(self.n)
            seen[v] = 1
            stack = [v]
            while stack:
                x = stack.pop()
                for p in self.graph.in_adj[x]:
                    if not seen[p]:
                        seen[p] = 1
                        if self.initial_level[p] > best:
                            best = self.initial_level[p]
                        stack.append(p)
            if level[v] != best:
                raise InvariantViolation(
                    f"level of {v} is {level[v]}, ancestor-max prediction is {best}"
                )
        if not is_topological(self.labels(), self.graph, strict=True):
            raise InvariantViolation("labels are not a strict topological order")
