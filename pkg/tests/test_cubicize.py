import pytest
from hypothesis import given, settings, strategies as st

from uesroute.cubicize import dump_mapping, lift_target, parse_mapping, reduce_to_cubic, write_cubicized
from uesroute.graph import PortLabeledGraph, bfs_component, components, generate, load_graph, validate


def _check(cub):
    g, gp = cub.original, cub.gprime
    assert validate(gp).ok
    assert all(gp.deg(v) == 3 for v in gp.vertices)
    for comp in components(g):
        v = min(comp)
        lifted = bfs_component(gp, cub.origin(v))
        assert {cub.owner[x] for x in lifted} == comp
        assert lifted == {x for u in comp for x in cub.gadget[u]}


def test_k4_has_12_gadget_vertices():
    cub = reduce_to_cubic(generate("complete", 4))
    assert len(cub.gprime) == 12
    assert all(len(cub.gadget[v]) == 3 for v in range(4))
    _check(cub)


def test_path2_has_2_gadget_vertices():
    cub = reduce_to_cubic(generate("path", 2))
    assert len(cub.gprime) == 2
    _check(cub)


def test_isolated_vertex_becomes_two_vertices():
    cub = reduce_to_cubic(PortLabeledGraph({0: []}))
    assert len(cub.gprime) == 2
    assert cub.owner == (0, 0)
    _check(cub)


def test_degree_two_gadget_is_parallel_pair():
    cub = reduce_to_cubic(generate("cycle", 3))
    a, b = cub.gadget[0]
    assert {cub.gprime.neighbor(a, p) for p in (1, 2)} == {b}


def test_original_port_k_lives_on_gadget_vertex_k():
    g = generate("star", 5, seed=3)
    cub = reduce_to_cubic(g)
    for v in g.vertices:
        for p in range(g.deg(v)):
            mate = g.pair((v, p))
            far = cub.gprime.neighbor(cub.gadget[v][p], 0)
            assert far == cub.gadget[mate.vertex][mate.port]


def test_self_loop_and_disconnected():
    g = PortLabeledGraph.from_edges([0, 1, 2], [(0, 0, 0, 1), (1, 0, 2, 0)])
    _check(reduce_to_cubic(g))


def test_lift_target():
    cub = reduce_to_cubic(generate("complete", 4))
    assert lift_target(cub, 2) == {6, 7, 8}
    with pytest.raises(KeyError):
        lift_target(cub, 9)


@settings(max_examples=60, deadline=None)
@given(
    family=st.sampled_from(["erdos_renyi", "unit_disk", "path", "star", "cycle"]),
    n=st.integers(3, 40),
    seed=st.integers(0, 10**6),
    shuffle=st.one_of(st.none(), st.integers(0, 10**6)),
)
def test_cubicization_invariants(family, n, seed, shuffle):
    g = generate(family, n, seed, p=0.1, radius=0.25)
    cub = reduce_to_cubic(g, shuffle_seed=shuffle)
    _check(cub)
    expected = sum(2 if g.deg(v) == 0 else max(g.deg(v), 1) for v in g.vertices)
    assert len(cub.gprime) == expected


def test_mapping_round_trip(tmp_path):
    cub = reduce_to_cubic(generate("erdos_renyi", 10, 2, p=0.3))
    assert parse_mapping(dump_mapping(cub)) == dict(enumerate(cub.owner))
    map_path = write_cubicized(cub, tmp_path / "g.txt")
    assert load_graph(tmp_path / "g.txt") == cub.gprime
    assert parse_mapping(map_path.read_text()) == dict(enumerate(cub.owner))
