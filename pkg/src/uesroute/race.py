"""Racing a probabilistic router against the guaranteed one.

Routers follow a hop-step interface: a generator that yields once per hop
and returns a :class:`~uesroute.protocol.RouteResult`.  :func:`race`
alternates ``quantum`` hops of each and stops at the first success, or when
the guaranteed router gives its (always correct) answer.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Generator

from .graph import Dart
from .protocol import RouteResult, SimNetwork, Status, route_steps

__all__ = ["Winner", "RaceResult", "random_walk_steps", "random_walk_route", "race", "format_race"]

HopRouter = Generator[int, None, RouteResult]


class Winner(Enum):
    PROBABILISTIC = "probabilistic"
    GUARANTEED = "guaranteed"
    GUARANTEED_FAILURE = "guaranteed_failure"


@dataclass(frozen=True)
class RaceResult:
    winner: Winner
    status: Status
    hops_prob: int
    hops_guar: int
    rounds: int

    @property
    def hops_total(self) -> int:
        return self.hops_prob + self.hops_guar


def random_walk_steps(net: SimNetwork, s: int, t: int, ttl: int, seed: int = 0) -> HopRouter:
    """Uniform random port at every hop until a gadget of ``t`` is entered or ``ttl`` runs out.

    There is no confirmation path back to ``s``: arrival is detected by
    the simulator.
    """
    if ttl < 0:
        raise ValueError("ttl must be nonnegative")
    rng = random.Random(seed)
    at = net.origin(s)
    owner = net.cub.owner
    if owner[at.vertex] == t:
        return RouteResult(Status.SUCCESS, 0)
    hops = 0
    while hops < ttl:
        at = net.deliver(Dart(at.vertex, rng.randrange(net.views[at.vertex].degree)))
        hops += 1
        yield hops
        if owner[at.vertex] == t:
            return RouteResult(Status.SUCCESS, hops)
    return RouteResult(Status.FAILURE, hops)


def random_walk_route(net: SimNetwork, s: int, t: int, ttl: int, seed: int = 0) -> RouteResult:
    gen = random_walk_steps(net, s, t, ttl, seed)
    while True:
        try:
            next(gen)
        except StopIteration as stop:
            return stop.value


def _advance(gen: HopRouter, quantum: int) -> RouteResult | None:
    for _ in range(quantum):
        try:
            next(gen)
        except StopIteration as stop:
            return stop.value
    return None


def race(
    net: SimNetwork,
    s: int,
    t: int,
    prob_router: Callable[[SimNetwork, int, int], HopRouter],
    quantum: int = 1,
) -> RaceResult:
    """Round-robin ``quantum`` hops of ``prob_router`` then of the guaranteed router."""
    if quantum < 1:
        raise ValueError("quantum must be at least one hop")
    prob = prob_router(net, s, t)
    guar = route_steps(net, s, t)
    hops_p = hops_g = 0
    prob_live = True
    rounds = 0
    while True:
        rounds += 1
        if prob_live:
            before = hops_p
            res = _advance(prob, quantum)
            if res is None:
                hops_p = before + quantum
            else:
                hops_p = res.hops
                prob_live = False
                if res.success:
                    return RaceResult(Winner.PROBABILISTIC, Status.SUCCESS, hops_p, hops_g, rounds)
        before = hops_g
        res = _advance(guar, quantum)
        if res is None:
            hops_g = before + quantum
            continue
        hops_g = res.hops
        winner = Winner.GUARANTEED if res.success else Winner.GUARANTEED_FAILURE
        return RaceResult(winner, res.status, hops_p, hops_g, rounds)


def format_race(r: RaceResult) -> str:
    return (
        f"race winner={r.winner.value} status={r.status.name.lower()} "
        f"hops_prob={r.hops_prob} hops_guar={r.hops_guar} hops_total={r.hops_total} rounds={r.rounds}\n"
    )
