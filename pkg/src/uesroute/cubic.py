"""Connected cubic multigraphs: isomorphism classes, labelings and samples.

Two independent routes to "every labeled connected cubic multigraph":

* :func:`enumerate_cubic` builds adjacency matrices, keeps one representative
  per isomorphism class, and then permutes ports at every vertex.
* :func:`labeled_cubic_matchings` lists every perfect matching of the ``3n``
  darts of ``n`` vertices.  A matching *is* a labeled cubic multigraph.

The verifier uses the first, the sequence search the second.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterator

import networkx as nx

from .graph import Dart, PortLabeledGraph

__all__ = [
    "CubicClass",
    "cubic_classes",
    "enumerate_cubic",
    "labeled_cubic_matchings",
    "matching_to_graph",
    "graph_to_mate",
    "random_cubic_mate",
    "mate_is_connected",
    "canonical_rooted_form",
]


def _adjacency_matrices(n: int) -> Iterator[list[list[int]]]:
    """Symmetric nonneg matrices with loops counted twice and row degree 3."""
    mat = [[0] * n for _ in range(n)]
    rem = [3] * n

    def fill(i: int, j: int):
        if i == n:
            yield [row[:] for row in mat]
            return
        if j == n:
            if rem[i] == 0:
                yield from fill(i + 1, i + 1)
            return
        if j == i:
            for loops in range(rem[i] // 2, -1, -1):
                mat[i][i] = loops
                rem[i] -= 2 * loops
                yield from fill(i, j + 1)
                rem[i] += 2 * loops
            mat[i][i] = 0
            return
        for mult in range(min(rem[i], rem[j]), -1, -1):
            mat[i][j] = mat[j][i] = mult
            rem[i] -= mult
            rem[j] -= mult
            yield from fill(i, j + 1)
            rem[i] += mult
            rem[j] += mult
        mat[i][j] = mat[j][i] = 0

    yield from fill(0, 0)


def _matrix_to_multigraph(mat: list[list[int]]) -> nx.MultiGraph:
    g = nx.MultiGraph()
    n = len(mat)
    g.add_nodes_from(range(n))
    for i in range(n):
        for j in range(i, n):
            for _ in range(mat[i][j]):
                g.add_edge(i, j)
    return g


def _invariant(g: nx.MultiGraph) -> tuple:
    local = sorted(
        tuple(sorted(g.number_of_edges(v, u) for u in set(g[v]) if u != v)) + (g.number_of_edges(v, v),)
        for v in g
    )
    simple = nx.Graph(g)
    return tuple(local), nx.weisfeiler_lehman_graph_hash(simple, iterations=3)


def cubic_classes(n: int) -> list[PortLabeledGraph]:
    """One port-labeled representative per class of connected cubic multigraph on ``n`` vertices."""
    if n <= 0 or n % 2:
        return []
    buckets: dict[tuple, list[nx.MultiGraph]] = {}
    reps: list[nx.MultiGraph] = []
    for mat in _adjacency_matrices(n):
        g = _matrix_to_multigraph(mat)
        if not nx.is_connected(g):
            continue
        key = _invariant(g)
        seen = buckets.setdefault(key, [])
        if any(nx.is_isomorphic(g, h) for h in seen):
            continue
        seen.append(g)
        reps.append(g)
    out = []
    for g in reps:
        edges = sorted((min(u, v), max(u, v)) for u, v in g.edges())
        out.append(PortLabeledGraph.from_adjacency(range(n), edges, namespace_size=n))
    return out


_PORT_PERMS = list(itertools.permutations(range(3)))


@dataclass(frozen=True)
class CubicClass:
    """An isomorphism class with its labelings.

    ``exhaustive`` says whether :meth:`labelings` walks all ``6**n`` port
    permutations or ``samples`` seeded ones.
    """

    graph: PortLabeledGraph
    exhaustive: bool
    samples: int
    seed: int

    @property
    def n(self) -> int:
        return len(self.graph)

    @property
    def labeling_count(self) -> int:
        return 6 ** self.n if self.exhaustive else self.samples

    def labelings(self) -> Iterator[PortLabeledGraph]:
        verts = self.graph.vertices
        if self.exhaustive:
            for combo in itertools.product(_PORT_PERMS, repeat=len(verts)):
                yield self.graph.relabeled({v: list(p) for v, p in zip(verts, combo)})
        else:
            rng = random.Random(self.seed)
            for _ in range(self.samples):
                yield self.graph.relabeled({v: list(rng.choice(_PORT_PERMS)) for v in verts})


def enumerate_cubic(
    max_vertices: int,
    *,
    labeling_budget: int = 50_000,
    samples: int = 64,
    seed: int = 0,
    exhaustive: bool = True,
) -> Iterator[CubicClass]:
    """Every class of connected cubic multigraph with at most ``max_vertices`` vertices.

    A class is labeled exhaustively when ``exhaustive`` is set and its
    ``6**n`` labelings fit in ``labeling_budget``; otherwise ``samples``
    seeded labelings are drawn.  Odd orders contribute nothing.
    """
    if max_vertices < 0:
        raise ValueError("max_vertices must be nonnegative")
    for n in range(2, max_vertices + 1, 2):
        full = exhaustive and 6**n <= labeling_budget
        for idx, rep in enumerate(cubic_classes(n)):
            yield CubicClass(rep, full, samples, (seed * 1_000_003 + n * 1_009 + idx) & 0xFFFFFFFF)


# dart matchings -------------------------------------------------------------
# A "mate" array has length 3n; dart 3v+p is paired with mate[3v+p].

def labeled_cubic_matchings(n: int) -> Iterator[list[int]]:
    """Every perfect matching on the ``3n`` darts (connected or not)."""
    size = 3 * n
    mate = [-1] * size

    def rec(first: int):
        while first < size and mate[first] != -1:
            first += 1
        if first == size:
            yield mate[:]
            return
        for other in range(first + 1, size):
            if mate[other] == -1:
                mate[first], mate[other] = other, first
                yield from rec(first + 1)
                mate[first] = mate[other] = -1

    yield from rec(0)


def mate_is_connected(mate: list[int]) -> bool:
    n = len(mate) // 3
    if n == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for p in range(3):
            w = mate[3 * v + p] // 3
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def matching_to_graph(mate: list[int]) -> PortLabeledGraph:
    n = len(mate) // 3
    return PortLabeledGraph(
        {v: [Dart(*divmod(mate[3 * v + p], 3)) for p in range(3)] for v in range(n)}, n
    )


def graph_to_mate(graph: PortLabeledGraph) -> tuple[list[int], list[int]]:
    """Flatten a cubic graph to a mate array; also returns the vertex order used."""
    order = list(graph.vertices)
    index = {v: i for i, v in enumerate(order)}
    mate = [0] * (3 * len(order))
    for v in order:
        table = graph.port_table(v)
        if len(table) != 3:
            raise ValueError(f"vertex {v} has degree {len(table)}, expected 3")
        for p, d in enumerate(table):
            mate[3 * index[v] + p] = 3 * index[d.vertex] + d.port
    return mate, order


def canonical_rooted_form(mate: list[int], start: int) -> tuple[int, ...]:
    """Relabel vertices by first discovery from dart ``start`` following ports.

    Two (labeled cubic graph, start dart) pairs get the same form exactly when
    an isomorphism preserving ports maps one start dart to the other.  Only
    the component of the start is described.
    """
    order = {start // 3: 0}
    queue = [start // 3]
    head = 0
    while head < len(queue):
        v = queue[head]
        head += 1
        for p in range(3):
            w = mate[3 * v + p] // 3
            if w not in order:
                order[w] = len(order)
                queue.append(w)
    form = [0] * (3 * len(order))
    for v, i in order.items():
        for p in range(3):
            m = mate[3 * v + p]
            form[3 * i + p] = 3 * order[m // 3] + m % 3
    return (start % 3,) + tuple(form)


def random_cubic_mate(n: int, rng: random.Random, connected: bool = True) -> list[int]:
    """Configuration-model cubic multigraph on ``n`` vertices (``n`` even)."""
    if n <= 0 or n % 2:
        raise ValueError("cubic graphs need a positive even vertex count")
    darts = list(range(3 * n))
    while True:
        rng.shuffle(darts)
        mate = [0] * (3 * n)
        for a, b in zip(darts[::2], darts[1::2]):
            mate[a], mate[b] = b, a
        if not connected or mate_is_connected(mate):
            return mate


def count_matchings(n: int) -> int:
    """(3n - 1)!! perfect matchings on 3n darts."""
    return math.prod(range(3 * n - 1, 0, -2)) if n else 1
