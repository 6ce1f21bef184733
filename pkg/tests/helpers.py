"""Shared test machinery: scripted streams with oracle verdicts and
incremental label verification.

The label check after each accepted insert is equivalent to running
is_topological on the whole graph every time: starting from a verified
state, a violation can only appear on an edge whose endpoint label changed
or on the edge just inserted, so checking those edges (plus periodic and
final full passes) certifies every intermediate state.
"""
from __future__ import annotations

import random

from toporder import (
    Digraph,
    EdgeEvent,
    InsertOutcome,
    creates_cycle,
    is_topological,
)

OK = InsertOutcome.OK
CYCLE = InsertOutcome.CYCLE_DETECTED
DUP = InsertOutcome.DUPLICATE


def build_graph(n, edges):
    g = Digraph(n)
    g.add_edges(edges)
    return g


def make_script(events, n):
    """Pair each event with its oracle verdict; stop after the first cycle.

    Returns (script, final_graph) where final_graph excludes the
    cycle-creating edge.
    """
    g = Digraph(n)
    script = []
    for ev in events:
        u, v = ev.source, ev.target
        if g.has_edge(u, v):
            script.append((u, v, DUP))
            continue
        if creates_cycle(g, u, v):
            script.append((u, v, CYCLE))
            break
        script.append((u, v, OK))
        g.add_edge(u, v)
    return script, g


def salt_with_cycles(events, frac, seed):
    """Interleave reversed copies of already-seen edges; each such copy is
    guaranteed to close a cycle when it arrives."""
    rng = random.Random(seed)
    out = []
    inserted = []
    for ev in events:
        out.append(ev)
        inserted.append((ev.source, ev.target))
        if rng.random() < frac:
            u, v = rng.choice(inserted)
            out.append(EdgeEvent(v, u, ev.timestamp))
    return out


def run_scripted(structure, script, n, strict, full_verify_every=64, on_ok=None):
    """Feed a script into a structure, asserting verdict agreement and that
    labels stay a (strict or weak) topological order after every insert."""
    g = Digraph(n)
    prev = structure.labels()
    compare = int.__lt__ if strict else int.__le__
    for idx, (u, v, expected) in enumerate(script):
        outcome = structure.insert(u, v)
        assert outcome is expected, (
            f"verdict mismatch on edge {idx} ({u}->{v}): "
            f"got {outcome}, oracle says {expected}"
        )
        if outcome is CYCLE:
            break
        if outcome is DUP:
            assert structure.labels() == prev, "duplicate insert mutated labels"
            continue
        g.add_edge(u, v)
        labels = structure.labels()
        assert compare(labels[u], labels[v]), f"new edge ({u}, {v}) violates order"
        for w in range(n):
            if labels[w] == prev[w]:
                continue
            for x in g.out_adj[w]:
                assert compare(labels[w], labels[x]), f"edge ({w}, {x}) violates order"
            for p in g.in_adj[w]:
                assert compare(labels[p], labels[w]), f"edge ({p}, {w}) violates order"
        prev = labels
        if idx % full_verify_every == 0:
            assert is_topological(labels, g, strict)
        if on_ok is not None:
            on_ok(structure, g)
    if not structure.terminated:
        assert is_topological(structure.labels(), g, strict)
    return g


def perturbed_predictions(exact, spread, seed, floor=0):
    """Exact counts plus uniform integer noise in [-spread, spread]."""
    rng = random.Random(seed)
    return [max(floor, a + rng.randint(-spread, spread)) for a in exact]


def same_level_ancestor_edge_count(level, g, v):
    """Edges with both endpoints on v's level whose target is an ancestor
    of v.  Level order makes any path between same-level vertices stay on
    that level, so the backward closure over level-mates is complete."""
    mark = level[v]
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for p in g.in_adj[x]:
            if level[p] == mark and p not in seen:
                seen.add(p)
                stack.append(p)
    return sum(
        1 for b in seen for p in g.in_adj[b] if level[p] == mark
    )


def assert_bucket_bounds(structure, eta):
    """Every bucket member's in-bucket ancestor and descendant edge counts
    stay within twice the sum of the current estimate and the true error."""
    from toporder import ancestor_edge_counts, descendant_edge_counts

    bound = 2 * (structure.stats().eta_hat + eta)
    for _key, members, edges in structure.subproblem_snapshot():
        if not edges:
            continue
        local = {v: i for i, v in enumerate(members)}
        sub = Digraph(len(members))
        sub.add_edges((local[x], local[y]) for x, y in edges)
        for count in ancestor_edge_counts(sub):
            assert count <= bound, f"bucket ancestor count {count} > {bound}"
        for count in descendant_edge_counts(sub):
            assert count <= bound, f"bucket descendant count {count} > {bound}"


def underestimate_predictions(exact, spread, seed):
    """Exact counts reduced by uniform integer noise; never overestimates."""
    rng = random.Random(seed)
    return [max(0, a - rng.randint(0, spread)) for a in exact]
