import math

import pytest

from uesroute.cubicize import reduce_to_cubic
from uesroute.exploration import ExplorationSequence
from uesroute.graph import disjoint_union, generate
from uesroute.protocol import SimNetwork, Status, route
from uesroute.race import Winner, format_race, race, random_walk_route, random_walk_steps


def _walker(ttl, seed):
    return lambda net, s, t: random_walk_steps(net, s, t, ttl, seed)


@pytest.fixture(scope="module")
def k4net(family):
    cub = reduce_to_cubic(generate("complete", 4))
    return SimNetwork(cub, family.rated_at_least(12)[1])


def test_random_walk_self():
    net = SimNetwork(reduce_to_cubic(generate("path", 2)), ExplorationSequence.of("1"))
    assert random_walk_route(net, 0, 0, 10).hops == 0


def test_random_walk_disconnected_uses_full_ttl():
    g = disjoint_union(generate("cycle", 3), generate("cycle", 3))
    net = SimNetwork(reduce_to_cubic(g), ExplorationSequence.of("1"))
    res = random_walk_route(net, 0, 4, ttl=77, seed=3)
    assert res.status == Status.FAILURE and res.hops == 77


def test_random_walk_k4_success_rate(k4net):
    ttl = 10 * 4**2
    wins = sum(random_walk_route(k4net, 0, 3, ttl, seed).success for seed in range(1000))
    assert wins / 1000 >= 0.99


def test_adjacent_target_found_in_first_round(k4net):
    # first seed whose walk enters a gadget of 1 on hop one
    seed = next(s for s in range(100) if random_walk_route(k4net, 0, 1, 1, s).success)
    r = race(k4net, 0, 1, _walker(100, seed), quantum=2)
    assert r.winner == Winner.PROBABILISTIC and r.rounds == 1
    assert r.hops_total <= 2 * 2


def test_disconnected_target_guaranteed_failure(family):
    g = disjoint_union(generate("cycle", 3), generate("cycle", 3))
    cub = reduce_to_cubic(g)
    net = SimNetwork(cub, family.rated_at_least(6)[1])
    r = race(net, 0, 5, _walker(50, 1), quantum=3)
    assert r.winner == Winner.GUARANTEED_FAILURE and r.status == Status.FAILURE
    assert r.hops_guar == 2 * len(net.sequence)
    assert "guaranteed_failure" in format_race(r)


@pytest.mark.parametrize("seed", range(100))
def test_round_robin_bound(seed, k4net):
    quantum = 1 + seed % 5
    t = 1 + seed % 3
    ttl = 5 + seed
    solo_p = random_walk_route(k4net, 0, t, ttl, seed)
    solo_g = route(k4net, 0, t, record=False)
    hp = solo_p.hops if solo_p.success else math.inf
    r = race(k4net, 0, t, _walker(ttl, seed), quantum)
    assert r.status == solo_g.status
    assert r.hops_total <= 2 * min(hp, solo_g.hops) + 2 * quantum


def test_bad_quantum(k4net):
    with pytest.raises(ValueError):
        race(k4net, 0, 1, _walker(5, 0), quantum=0)
