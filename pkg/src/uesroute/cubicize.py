"""Degree reduction of an arbitrary port-labeled graph to a 3-regular multigraph.

Every original vertex ``v`` is replaced by a gadget of degree-3 vertices:

========  ===============================================================
deg(v)    gadget
========  ===============================================================
>= 2      cycle ``g_0 .. g_{d-1}``; ``g_k`` carries original port ``k``
          (for ``d == 2`` the "cycle" is a parallel pair of edges)
1         one vertex: external edge plus a self-loop
0         two vertices joined by an edge, each with a self-loop
========  ===============================================================

Canonical ports at a gadget vertex: 0 is the external dart (or the partner
edge for degree 0), 1 points forward along the cycle, 2 backward.  For the
loop gadgets ports 1 and 2 are the two halves of the self-loop.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .graph import Dart, PortLabeledGraph

__all__ = ["CubicizedGraph", "reduce_to_cubic", "lift_target", "dump_mapping", "parse_mapping"]


@dataclass(frozen=True)
class CubicizedGraph:
    original: PortLabeledGraph
    gprime: PortLabeledGraph
    owner: tuple[int, ...]
    gadget: dict[int, tuple[int, ...]]

    def gadget_of(self, v: int) -> tuple[int, ...]:
        try:
            return self.gadget[v]
        except KeyError:
            raise KeyError(f"unknown original vertex {v}") from None

    def origin(self, v: int) -> int:
        """First gadget vertex of ``v``: where messages from ``v`` are injected."""
        return self.gadget_of(v)[0]


def reduce_to_cubic(graph: PortLabeledGraph, shuffle_seed: int | None = None) -> CubicizedGraph:
    """Replace every vertex by its gadget.

    With ``shuffle_seed`` the canonical ports of every gadget vertex are
    permuted by a seeded shuffle (adversarial labelings).
    """
    gadget: dict[int, tuple[int, ...]] = {}
    owner: list[int] = []
    for v in graph.vertices:
        size = max(graph.deg(v), 1) if graph.deg(v) != 0 else 2
        ids = tuple(range(len(owner), len(owner) + size))
        owner.extend([v] * size)
        gadget[v] = ids

    ports: dict[int, list[Dart | None]] = {g: [None] * 3 for g in range(len(owner))}

    def link(a: Dart, b: Dart) -> None:
        ports[a.vertex][a.port] = b
        ports[b.vertex][b.port] = a

    for v in graph.vertices:
        d = graph.deg(v)
        ids = gadget[v]
        if d == 0:
            a, b = ids
            link(Dart(a, 0), Dart(b, 0))
            link(Dart(a, 1), Dart(a, 2))
            link(Dart(b, 1), Dart(b, 2))
        elif d == 1:
            link(Dart(ids[0], 1), Dart(ids[0], 2))
        else:
            for k in range(d):
                link(Dart(ids[k], 1), Dart(ids[(k + 1) % d], 2))
        for p in range(d):
            mate = graph.pair(Dart(v, p))
            ports[ids[p]][0] = Dart(gadget[mate.vertex][mate.port], 0)

    gprime = PortLabeledGraph(ports, len(owner))
    if shuffle_seed is not None:
        rng = random.Random(shuffle_seed)
        perms = {}
        for g in gprime.vertices:
            p = [0, 1, 2]
            rng.shuffle(p)
            perms[g] = p
        gprime = gprime.relabeled(perms)
    return CubicizedGraph(graph, gprime, tuple(owner), gadget)


def lift_target(cub: CubicizedGraph, t: int) -> set[int]:
    """Gadget vertices whose arrival counts as reaching original vertex ``t``."""
    return set(cub.gadget_of(t))


def dump_mapping(cub: CubicizedGraph) -> str:
    return "".join(f"{g} {o}\n" for g, o in enumerate(cub.owner))


def parse_mapping(text: str) -> dict[int, int]:
    out = {}
    for line in text.splitlines():
        if line.strip():
            g, o = line.split()
            out[int(g)] = int(o)
    return out


def write_cubicized(cub: CubicizedGraph, graph_path: str | Path) -> Path:
    """Write ``gprime`` to ``graph_path`` and the owner map next to it (``.map``)."""
    from .graph import dump_graph

    graph_path = Path(graph_path)
    graph_path.write_text(dump_graph(cub.gprime))
    map_path = graph_path.with_suffix(".map")
    map_path.write_text(dump_mapping(cub))
    return map_path
