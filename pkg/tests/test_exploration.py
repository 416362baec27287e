import random

import pytest
from hypothesis import given, settings, strategies as st

from uesroute.cubic import matching_to_graph, random_cubic_mate
from uesroute.exploration import (
    Certificate,
    ExplorationSequence,
    load_sequence,
    next_dart,
    parse_sequence,
    prev_dart,
    dump_sequence,
    save_sequence,
    trace_walk,
    walk_visited,
)
from uesroute.graph import Dart, PortLabeledGraph, generate


def identity_k4():
    # port p at v leads to the p-th other vertex in increasing order
    edges = [(u, v - 1, v, u) for u in range(4) for v in range(u + 1, 4)]
    return PortLabeledGraph.from_edges(range(4), edges)


def test_k4_hand_trace():
    # Hand-traced: (0,0) enters 1 on port 0; t=1 leaves 1 on port 1 into 2 (port 1);
    # t=1 leaves 2 on port 2 into 3 (port 2); t=1 leaves 3 on port 0 into 0.
    trace = trace_walk(identity_k4(), Dart(0, 0), ExplorationSequence.of("111"))
    assert [s.vertex for s in trace] == [1, 2, 3, 0]
    assert [tuple(s.dart) for s in trace] == [(0, 0), (1, 1), (2, 2), (3, 0)]


def test_step_zero_returns_on_same_edge():
    g = identity_k4()
    assert next_dart(g, Dart(0, 0), 0) == Dart(1, 0)
    assert walk_visited(g, Dart(0, 0), [0, 0, 0]) == {0, 1}


def test_prev_dart_example():
    g = identity_k4()
    out = next_dart(g, Dart(0, 0), 1)
    assert prev_dart(g, out, 1) == Dart(1, 0)
    assert g.pair(prev_dart(g, out, 1)) == Dart(0, 0)


@settings(max_examples=200, deadline=None)
@given(n=st.sampled_from([2, 4, 6, 8, 12, 20]), seed=st.integers(0, 10**6), data=st.data())
def test_reversal_identity(n, seed, data):
    g = matching_to_graph(random_cubic_mate(n, random.Random(seed), connected=False))
    d = Dart(data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, 2)))
    t = data.draw(st.integers(0, 2))
    assert g.pair(prev_dart(g, next_dart(g, d, t), t)) == d


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 10**6), steps=st.lists(st.integers(0, 2), max_size=60))
def test_walk_can_be_undone(seed, steps):
    g = matching_to_graph(random_cubic_mate(8, random.Random(seed)))
    trace = trace_walk(g, Dart(0, 0), steps)
    d = trace[-1].dart
    for i in range(len(steps), 0, -1):
        d = g.pair(prev_dart(g, d, steps[i - 1]))
        assert d == trace[i - 1].dart


def test_trace_limit():
    g = generate("complete", 4)
    assert len(trace_walk(g, Dart(0, 0), [1, 2, 0], limit=1)) == 2
    with pytest.raises(ValueError):
        trace_walk(g, Dart(0, 0), [1], limit=2)


def test_sequence_indexing():
    seq = ExplorationSequence.of("0121", 4)
    assert len(seq) == 4
    assert seq.at(1) == 0 and seq.at(4) == 1
    with pytest.raises(IndexError):
        seq.at(0)
    with pytest.raises(ValueError):
        ExplorationSequence.of([3])


@pytest.mark.parametrize(
    "cert", [Certificate("exhaustive", 4), Certificate("sampled", 64, 200, 17), Certificate("unverified")]
)
def test_sequence_file_round_trip(cert, tmp_path):
    seq = ExplorationSequence.of("0120210", 4, cert)
    assert parse_sequence(dump_sequence(seq)) == seq
    save_sequence(seq, tmp_path / "s.txt")
    assert load_sequence(tmp_path / "s.txt") == seq
    assert (tmp_path / "s.txt").read_text().splitlines()[1] == "0120210"


@pytest.mark.parametrize("text", ["4 3 exhaustive 4\n01\n", "4 2 bogus\n01\n", "4 2 exhaustive 4\n03\n", "4\n"])
def test_bad_sequence_files(text):
    with pytest.raises(ValueError):
        parse_sequence(text)


def test_certificate_covers():
    assert Certificate("exhaustive", 4).covers(4)
    assert not Certificate("exhaustive", 4).covers(6)
    assert not Certificate("unverified").covers(1)
