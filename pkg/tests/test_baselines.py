"""Zero-prediction baseline and the permutation-maintenance structure."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toporder import (
    FdfsOrder,
    InsertAfterTermination,
    LdfsOrder,
    synthetic_dag_stream,
)

from helpers import CYCLE, DUP, OK, make_script, run_scripted


def _force_order(s: FdfsOrder, order):
    """Pin the internal permutation for deterministic examples."""
    s.order = list(order)
    for idx, v in enumerate(order):
        s.position[v] = idx


class TestDfs1:
    def test_is_zero_prediction_structure(self):
        s = LdfsOrder(3, [0, 0, 0], 5)
        from toporder import dfs1
        d = dfs1(3, 5)
        assert d.level == s.level == [0, 0, 0]
        assert d.j == s.j and d.a == s.a

    def test_identical_run_to_zero_prediction_ldfs(self):
        from toporder import dfs1
        events = synthetic_dag_stream(10, 0.4, seed=11)
        m = max(1, len(events))
        d = dfs1(10, m)
        z = LdfsOrder(10, [0] * 10, m)
        for ev in events:
            assert d.insert(ev.source, ev.target) is z.insert(ev.source, ev.target)
        assert d.costs == z.costs
        assert d.labels() == z.labels()


class TestFdfsConstruction:
    def test_single_vertex(self):
        assert FdfsOrder(1, seed=0).order == [0]

    def test_seed_determinism(self):
        assert FdfsOrder(50, seed=7).order == FdfsOrder(50, seed=7).order

    def test_distinct_seeds_differ(self):
        assert FdfsOrder(50, seed=1).order != FdfsOrder(50, seed=2).order


class TestFdfsInsert:
    def test_consistent_edge_keeps_order(self):
        s = FdfsOrder(3, seed=0)
        _force_order(s, [0, 1, 2])
        assert s.insert(0, 1) is OK
        assert s.order == [0, 1, 2]

    def test_against_edge_moves_block_after_target(self):
        s = FdfsOrder(3, seed=0)
        _force_order(s, [0, 1, 2])
        assert s.insert(2, 0) is OK
        assert s.order == [1, 2, 0]

    def test_cycle_found_during_partial_dfs(self):
        s = FdfsOrder(3, seed=0)
        _force_order(s, [0, 1, 2])
        assert s.insert(0, 1) is OK
        assert s.insert(1, 0) is CYCLE
        assert s.terminated

    def test_duplicate_detected(self):
        s = FdfsOrder(3, seed=0)
        s.insert(0, 1)
        assert s.insert(0, 1) is DUP

    def test_insert_after_termination_raises(self):
        s = FdfsOrder(2, seed=0)
        s.insert(0, 1)
        s.insert(1, 0)
        with pytest.raises(InsertAfterTermination):
            s.insert(0, 1)

    def test_window_move_preserves_relative_order(self):
        s = FdfsOrder(5, seed=0)
        _force_order(s, [0, 1, 2, 3, 4])
        s.insert(1, 2)
        # edge (4, 1): block {1, 2} moves right after 4
        assert s.insert(4, 1) is OK
        assert s.order == [0, 3, 4, 1, 2]
        s.check_invariants()


class TestFdfsAgainstOracles:
    @settings(max_examples=40, deadline=None)
    @given(
        n=st.integers(min_value=2, max_value=12),
        p=st.floats(min_value=0.1, max_value=0.9),
        seed=st.integers(min_value=0, max_value=10_000),
    )
    def test_verdicts_and_strict_order(self, n, p, seed):
        events = synthetic_dag_stream(n, p, seed)
        if not events:
            return
        script, _ = make_script(events, n)
        s = FdfsOrder(n, seed=seed)
        run_scripted(s, script, n, strict=True,
                     on_ok=lambda st_, _g: st_.check_invariants())
