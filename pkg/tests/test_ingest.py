"""SNAP parsing, DAG-ification, and train/test splitting."""
import os

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toporder import Digraph, EdgeEvent, ParseError, dagify, parse_snap, split_events

FIXTURE = os.path.join(os.path.dirname(__file__), "data", "sample_snap.txt")


class TestParseSnap:
    def test_fixture_roundtrip(self):
        events, relabeling = parse_snap(FIXTURE)
        assert len(events) == 6  # comments skipped, duplicates retained
        assert relabeling == {101: 0, 205: 1, 309: 2}
        assert events[0] == EdgeEvent(0, 1, 1082040961)
        assert events[4] == EdgeEvent(1, 1, 1082041100)  # self-loop kept here

    def test_malformed_field_count(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1 2 3\n4 5\n", encoding="utf-8")
        with pytest.raises(ParseError, match="line 2"):
            parse_snap(str(path))

    def test_non_integer_token(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("# header\n1 two 3\n", encoding="utf-8")
        with pytest.raises(ParseError, match="line 2"):
            parse_snap(str(path))

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("", encoding="utf-8")
        events, relabeling = parse_snap(str(path))
        assert events == [] and relabeling == {}


class TestDagify:
    def test_drops_self_loops(self):
        dataset = dagify([EdgeEvent(0, 0, 1)], 1, seed=0)
        assert dataset.events == []

    def test_exactly_one_of_symmetric_pair_survives(self):
        events = [EdgeEvent(0, 1, 1), EdgeEvent(1, 0, 2)]
        for seed in range(10):
            kept = dagify(events, 2, seed=seed).events
            assert len(kept) == 1

    def test_sorted_by_timestamp_stably(self):
        events = [EdgeEvent(0, 1, 5), EdgeEvent(0, 2, 1), EdgeEvent(1, 2, 5)]
        dataset = dagify(events, 3, seed=3)
        stamps = [e.timestamp for e in dataset.events]
        assert stamps == sorted(stamps)
        same_stamp = [e for e in dataset.events if e.timestamp == 5]
        if len(same_stamp) == 2:
            assert same_stamp[0].target == 1  # file order preserved

    @settings(max_examples=40, deadline=None)
    @given(
        seed=st.integers(min_value=0, max_value=10_000),
        raw=st.lists(
            st.tuples(st.integers(0, 7), st.integers(0, 7), st.integers(0, 100)),
            max_size=40,
        ),
    )
    def test_output_always_acyclic(self, seed, raw):
        events = [EdgeEvent(u, v, t) for u, v, t in raw]
        dataset = dagify(events, 8, seed=seed)
        g = Digraph(8)
        for ev in dataset.events:
            if not g.has_edge(ev.source, ev.target):
                g.add_edge(ev.source, ev.target)
        assert g.is_acyclic()

    def test_deterministic_per_seed(self):
        events = [EdgeEvent(i % 5, (i * 3) % 5, i) for i in range(20)]
        assert dagify(events, 5, seed=9).events == dagify(events, 5, seed=9).events


class TestSplit:
    def _events(self, count):
        return [EdgeEvent(0, 1, t) for t in range(count)]

    def test_five_fifty_window_arithmetic(self):
        events = self._events(100)
        train, test = split_events(events, 0.05, 0.5)
        assert train == events[45:50]
        assert test == events[50:]

    def test_zero_training_fraction(self):
        train, test = split_events(self._events(40), 0.0, 0.5)
        assert train == []
        assert len(test) == 20

    def test_half_half_uses_whole_stream(self):
        events = self._events(100)
        train, test = split_events(events, 0.5, 0.5)
        assert train == events[:50]
        assert test == events[50:]

    def test_fraction_validation(self):
        with pytest.raises(ValueError):
            split_events(self._events(10), 0.6, 0.6)
        with pytest.raises(ValueError):
            split_events(self._events(10), -0.1, 0.5)
