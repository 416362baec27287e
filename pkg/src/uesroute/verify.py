"""Checking that a sequence explores every small connected cubic multigraph.

Exhaustive mode walks every isomorphism class from :func:`enumerate_cubic`,
every port labeling and every initial dart.  Sampled mode keeps the class
enumeration while it is cheap (``bound <= ENUM_LIMIT``) and only samples the
labelings; past that it samples whole instances: configuration-model cubic
multigraphs and cubicized sparse graphs (trees, paths, cycles), which are the
long thin shapes that take exploration walks longest to cover.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .cubic import enumerate_cubic, matching_to_graph, random_cubic_mate
from .exploration import Certificate, ExplorationSequence
from .cubicize import reduce_to_cubic
from .graph import Dart, PortLabeledGraph

__all__ = [
    "ENUM_LIMIT",
    "Counterexample",
    "Verdict",
    "is_universal",
    "covers_from",
    "sample_instances",
    "certify",
]

ENUM_LIMIT = 6


@dataclass(frozen=True)
class Counterexample:
    graph: PortLabeledGraph
    start: Dart
    visited: frozenset[int]

    def describe(self) -> str:
        missing = sorted(set(self.graph.vertices) - self.visited)
        edges = " ".join(f"{u}.{up}-{v}.{vp}" for u, up, v, vp in self.graph.edges())
        return (
            f"graph n={len(self.graph)} edges=[{edges}] start={tuple(self.start)} "
            f"visited={sorted(self.visited)} missing={missing}"
        )


@dataclass(frozen=True)
class Verdict:
    universal: bool
    bound: int
    mode: str
    instances: int
    exhaustive: bool
    counterexample: Counterexample | None = None

    def __bool__(self) -> bool:
        return self.universal


def covers_from(graph: PortLabeledGraph, start: Dart, steps: Sequence[int]) -> tuple[bool, set[int]]:
    """Walk ``steps`` from ``start``; report full coverage and the visited set."""
    tables = {v: graph.port_table(v) for v in graph.vertices}
    n = len(tables)
    here = tables[start[0]][start[1]]
    visited = {here.vertex}
    if len(visited) == n:
        return True, visited
    for t in steps:
        table = tables[here.vertex]
        here = table[(here.port + t) % len(table)]
        if here.vertex not in visited:
            visited.add(here.vertex)
            if len(visited) == n:
                return True, visited
    return False, visited


def _cubicized_sample(size: int, rng: random.Random) -> PortLabeledGraph:
    shape = rng.choice(("tree", "path", "cycle"))
    if shape == "cycle" and size >= 6:
        m = size // 2
        edges = [(i, (i + 1) % m) for i in range(m)]
    else:
        m = max(2, size // 2 + 1)
        if shape == "path":
            edges = [(i, i + 1) for i in range(m - 1)]
        else:
            edges = [(rng.randrange(i), i) for i in range(1, m)]
    order = list(range(m))
    rng.shuffle(order)
    edges = [(order[u], order[v]) for u, v in edges]
    base = PortLabeledGraph.from_adjacency(range(m), edges, rng=rng)
    return reduce_to_cubic(base, shuffle_seed=rng.randrange(2**32)).gprime


def sample_instances(bound: int, samples: int, seed: int, starts: int = 4) -> Iterator[tuple[PortLabeledGraph, Dart]]:
    """Seeded random (graph, start dart) pairs with at most ``bound`` vertices."""
    rng = random.Random(seed)
    for _ in range(samples):
        n = bound if rng.random() < 0.5 else rng.randrange(2, bound + 1, 2)
        if rng.random() < 0.5:
            g = matching_to_graph(random_cubic_mate(n, rng))
        else:
            g = _cubicized_sample(n, rng)
        darts = g.darts()
        for d in rng.sample(darts, min(starts, len(darts))):
            yield g, d


def _exhaustive_instances(bound: int, labeling_budget: int, samples: int, seed: int, exhaustive: bool):
    for cls in enumerate_cubic(bound, labeling_budget=labeling_budget, samples=samples, seed=seed, exhaustive=exhaustive):
        for g in cls.labelings():
            for d in g.darts():
                yield g, d, cls.exhaustive


def is_universal(
    seq: ExplorationSequence | Sequence[int],
    bound: int,
    mode: str = "exhaustive",
    *,
    samples: int = 64,
    seed: int = 0,
    labeling_budget: int = 50_000,
) -> Verdict:
    """Does ``seq`` cover every connected cubic multigraph with at most ``bound`` vertices?

    Returns on the first uncovered instance, in enumeration order.
    """
    if bound % 2:
        raise ValueError(f"bound must be even, got {bound}")
    if mode not in ("exhaustive", "sampled"):
        raise ValueError(f"mode must be 'exhaustive' or 'sampled', got {mode!r}")
    steps = seq.steps if isinstance(seq, ExplorationSequence) else tuple(seq)
    checked = 0
    all_exhaustive = mode == "exhaustive"
    if bound <= ENUM_LIMIT:
        stream = _exhaustive_instances(bound, labeling_budget, samples, seed, mode == "exhaustive")
    else:
        if mode == "exhaustive":
            raise ValueError(f"exhaustive verification is only available up to bound {ENUM_LIMIT}")
        stream = ((g, d, False) for g, d in sample_instances(bound, samples, seed))
    for g, d, full in stream:
        all_exhaustive = all_exhaustive and full
        checked += 1
        ok, visited = covers_from(g, d, steps)
        if not ok:
            return Verdict(False, bound, mode, checked, all_exhaustive, Counterexample(g, d, frozenset(visited)))
    return Verdict(True, bound, mode, checked, all_exhaustive)


def certify(seq: ExplorationSequence, bound: int, mode: str = "exhaustive", **kw) -> tuple[ExplorationSequence, Verdict]:
    """Verify ``seq`` and attach the matching certificate (or ``unverified``)."""
    verdict = is_universal(seq, bound, mode, **kw)
    if not verdict:
        cert = Certificate("unverified")
    elif verdict.exhaustive:
        cert = Certificate("exhaustive", bound)
    else:
        cert = Certificate("sampled", bound, kw.get("samples", 64), kw.get("seed", 0))
    return ExplorationSequence(tuple(seq.steps), bound, cert), verdict
