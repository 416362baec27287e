import random

import pytest
from hypothesis import given, settings, strategies as st

from uesroute.graph import (
    Dart,
    PortLabeledGraph,
    bfs_component,
    disjoint_union,
    dump_graph,
    generate,
    parse_graph,
    validate,
)


def test_single_vertex_is_valid():
    g = PortLabeledGraph({0: []})
    rep = validate(g)
    assert rep.ok
    assert rep.degrees == {0: 0}


def test_one_edge_is_valid():
    g = PortLabeledGraph.from_edges([0, 1], [(0, 0, 1, 0)])
    assert validate(g).ok
    assert g.deg(0) == g.deg(1) == 1
    assert g.pair(Dart(0, 0)) == Dart(1, 0)


def test_broken_involution_is_listed():
    # (0,0) -> (1,0) but (1,0) -> (2,0)
    g = PortLabeledGraph({0: [Dart(1, 0)], 1: [Dart(2, 0)], 2: [Dart(1, 0)]})
    rep = validate(g)
    assert not rep.ok
    assert any("involution" in v for v in rep.violations)


def test_self_loop_darts_are_distinct():
    g = PortLabeledGraph.from_edges([0, 1], [(0, 0, 1, 0), (0, 1, 0, 2)])
    assert validate(g).ok
    assert g.deg(0) == 3
    assert g.pair(Dart(0, 1)) == Dart(0, 2)


def test_duplicate_port_rejected():
    with pytest.raises(ValueError):
        PortLabeledGraph.from_edges([0, 1, 2], [(0, 0, 1, 0), (0, 0, 2, 0)])


def test_complete_4_is_cubic():
    g = generate("complete", 4)
    assert all(g.deg(v) == 3 for v in g.vertices)
    assert g.num_edges() == 6


def test_path_2():
    g = generate("path", 2)
    assert [g.deg(v) for v in g.vertices] == [1, 1]


def test_generate_is_deterministic():
    assert generate("erdos_renyi", 20, 7, p=0.3) == generate("erdos_renyi", 20, 7, p=0.3)
    assert dump_graph(generate("unit_disk", 15, 3, radius=0.4)) == dump_graph(generate("unit_disk", 15, 3, radius=0.4))


@pytest.mark.parametrize("kw", [dict(family="path", n=0), dict(family="erdos_renyi", n=5, p=1.5), dict(family="nope", n=3)])
def test_generate_rejects_bad_params(kw):
    with pytest.raises(ValueError):
        generate(kw.pop("family"), kw.pop("n"), **kw)


@settings(max_examples=60, deadline=None)
@given(
    family=st.sampled_from(["path", "cycle", "complete", "erdos_renyi", "unit_disk", "star"]),
    n=st.integers(3, 25),
    seed=st.integers(0, 10**6),
)
def test_generated_graphs_validate(family, n, seed):
    g = generate(family, n, seed, p=0.2, radius=0.35)
    assert validate(g).ok
    assert len(g) == n


def test_bfs_examples():
    assert bfs_component(PortLabeledGraph({0: []}), 0) == {0}
    assert bfs_component(generate("complete", 4), 2) == {0, 1, 2, 3}
    two = disjoint_union(generate("cycle", 3), generate("cycle", 3, 1))
    assert bfs_component(two, 1) == {0, 1, 2}
    with pytest.raises(KeyError):
        bfs_component(two, 99)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(1, 30))
def test_file_round_trip(seed, n):
    g = generate("erdos_renyi", n, seed, p=0.15)
    text = dump_graph(g)
    assert parse_graph(text) == g
    assert dump_graph(parse_graph(text)) == text


def test_file_format_sorted_and_self_loops():
    g = PortLabeledGraph.from_edges([0, 1], [(1, 2, 0, 0), (1, 0, 1, 1)])
    text = dump_graph(g)
    assert text.splitlines() == ["2 2", "0 0 1 2", "1 0 1 1"]
    assert parse_graph(text) == g


def test_sparse_vertex_ids_round_trip():
    g = PortLabeledGraph.from_edges([3, 8], [(3, 0, 8, 0)], namespace_size=16)
    assert parse_graph(dump_graph(g)) == g
