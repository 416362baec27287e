"""Port-labeled undirected multigraphs stored as darts.

A dart is one oriented half of an edge, named by ``(vertex, port)``.  The
graph is the involution ``pair`` on darts: ``pair(d)`` is the opposite half
of the edge holding ``d``.  Self-loops are two distinct darts at the same
vertex paired with each other, so ``deg(v)`` is always the number of darts at
``v`` and the ports at ``v`` are a permutation of ``0..deg(v)-1``.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

import networkx as nx

__all__ = [
    "Dart",
    "PortLabeledGraph",
    "ValidationReport",
    "validate",
    "generate",
    "bfs_component",
    "components",
    "dump_graph",
    "load_graph",
    "FAMILIES",
]


class Dart(NamedTuple):
    vertex: int
    port: int


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]
    degrees: dict[int, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


class PortLabeledGraph:
    """Immutable port-labeled multigraph.

    ``ports[v][p]`` is the dart paired with ``Dart(v, p)``.  The constructor
    does not check the involution; call :func:`validate` for that.
    """

    __slots__ = ("_ports", "_vertices", "namespace_size", "_hash")

    def __init__(
        self,
        ports: dict[int, Iterable[Dart | tuple[int, int]]],
        namespace_size: int | None = None,
    ):
        self._ports: dict[int, tuple[Dart, ...]] = {
            v: tuple(Dart(*d) for d in ds) for v, ds in sorted(ports.items())
        }
        self._vertices = tuple(self._ports)
        if namespace_size is None:
            namespace_size = (max(self._vertices) + 1) if self._vertices else 1
        self.namespace_size = namespace_size
        self._hash = None

    # construction -----------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        vertices: Iterable[int],
        edges: Iterable[tuple[int, int, int, int]],
        namespace_size: int | None = None,
    ) -> "PortLabeledGraph":
        """Build from ``(u, u_port, v, v_port)`` tuples."""
        table: dict[int, dict[int, Dart]] = {v: {} for v in vertices}
        for u, up, v, vp in edges:
            for a, b in ((Dart(u, up), Dart(v, vp)), (Dart(v, vp), Dart(u, up))):
                if a.port in table.setdefault(a.vertex, {}):
                    raise ValueError(f"port {a.port} used twice at vertex {a.vertex}")
                table[a.vertex][a.port] = b
        ports = {}
        for v, slots in table.items():
            if sorted(slots) != list(range(len(slots))):
                raise ValueError(f"ports at vertex {v} are not 0..deg-1: {sorted(slots)}")
            ports[v] = [slots[p] for p in range(len(slots))]
        return cls(ports, namespace_size)

    @classmethod
    def from_adjacency(
        cls,
        vertices: Iterable[int],
        edges: Iterable[tuple[int, int]],
        rng: random.Random | None = None,
        namespace_size: int | None = None,
    ) -> "PortLabeledGraph":
        """Assign ports to an unlabeled edge list.

        Ports are handed out in edge order, then permuted at every vertex by
        ``rng`` when given.
        """
        vertices = list(vertices)
        next_port = {v: 0 for v in vertices}
        raw = []
        for u, v in edges:
            up = next_port[u]
            next_port[u] += 1
            vp = next_port[v]
            next_port[v] += 1
            raw.append((u, up, v, vp))
        if rng is not None:
            perm = {}
            for v in vertices:
                p = list(range(next_port[v]))
                rng.shuffle(p)
                perm[v] = p
            raw = [(u, perm[u][up], v, perm[v][vp]) for u, up, v, vp in raw]
        return cls.from_edges(vertices, raw, namespace_size)

    def relabeled(self, perms: dict[int, list[int]]) -> "PortLabeledGraph":
        """Return a copy where port ``p`` at ``v`` becomes ``perms[v][p]``."""

        def move(d: Dart) -> Dart:
            perm = perms.get(d.vertex)
            return Dart(d.vertex, perm[d.port]) if perm else d

        ports = {}
        for v, ds in self._ports.items():
            new = [None] * len(ds)
            for p, mate in enumerate(ds):
                new[move(Dart(v, p)).port] = move(mate)
            ports[v] = new
        return PortLabeledGraph(ports, self.namespace_size)

    # queries ------------------------------------------------------------

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    def __contains__(self, v: object) -> bool:
        return v in self._ports

    def __len__(self) -> int:
        return len(self._vertices)

    def deg(self, v: int) -> int:
        return len(self._ports[v])

    def pair(self, d: Dart | tuple[int, int]) -> Dart:
        return self._ports[d[0]][d[1]]

    def darts(self, v: int | None = None) -> list[Dart]:
        if v is not None:
            return [Dart(v, p) for p in range(len(self._ports[v]))]
        return [Dart(v, p) for v, ds in self._ports.items() for p in range(len(ds))]

    def port_table(self, v: int) -> tuple[Dart, ...]:
        return self._ports[v]

    def neighbor(self, v: int, port: int) -> int:
        return self._ports[v][port].vertex

    def edges(self) -> list[tuple[int, int, int, int]]:
        """Each undirected edge once as ``(u, up, v, vp)`` with ``(u, up) < (v, vp)``."""
        out = []
        for v, ds in self._ports.items():
            for p, mate in enumerate(ds):
                if (v, p) < tuple(mate):
                    out.append((v, p, mate.vertex, mate.port))
        out.sort()
        return out

    def num_edges(self) -> int:
        return sum(len(ds) for ds in self._ports.values()) // 2

    def to_networkx(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(self._vertices)
        g.add_edges_from((u, v) for u, _, v, _ in self.edges())
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PortLabeledGraph):
            return NotImplemented
        return self._ports == other._ports and self.namespace_size == other.namespace_size

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((tuple(self._ports.items()), self.namespace_size))
        return self._hash

    def __repr__(self) -> str:
        return f"PortLabeledGraph(n={len(self)}, m={self.num_edges()})"


def validate(graph: PortLabeledGraph) -> ValidationReport:
    """Check the involution, port-permutation and degree invariants.

    Every violation found is listed; nothing is raised.
    """
    problems = []
    degrees = {}
    for v in graph.vertices:
        table = graph.port_table(v)
        degrees[v] = len(table)
        for p, mate in enumerate(table):
            if not isinstance(mate, tuple) or len(mate) != 2:
                problems.append(f"dart ({v},{p}) paired with malformed {mate!r}")
                continue
            if mate.vertex not in graph:
                problems.append(f"dart ({v},{p}) paired with dart at unknown vertex {mate.vertex}")
                continue
            if not 0 <= mate.port < graph.deg(mate.vertex):
                problems.append(f"dart ({v},{p}) paired with out-of-range port {tuple(mate)}")
                continue
            if mate == (v, p):
                problems.append(f"dart ({v},{p}) is paired with itself")
                continue
            back = graph.pair(mate)
            if back != (v, p):
                problems.append(
                    f"involution broken: ({v},{p}) -> {tuple(mate)} -> {tuple(back)}"
                )
    for v in graph.vertices:
        if not 0 <= v < graph.namespace_size:
            problems.append(f"vertex {v} outside namespace [0,{graph.namespace_size})")
    return ValidationReport(tuple(problems), degrees)


# generators ---------------------------------------------------------------

FAMILIES = ("path", "cycle", "complete", "erdos_renyi", "unit_disk", "star")


def generate(family: str, n: int, seed: int = 0, *, p: float = 0.5, radius: float = 0.3) -> PortLabeledGraph:
    """Deterministic graph for ``(family, params, seed)`` with shuffled ports.

    ``star`` has ``n`` vertices in total (a hub and ``n - 1`` leaves).
    """
    if n <= 0:
        raise ValueError(f"size must be positive, got {n}")
    rng = random.Random(seed)
    if family == "path":
        g = nx.path_graph(n)
    elif family == "cycle":
        if n < 3:
            raise ValueError("a simple cycle needs at least 3 vertices")
        g = nx.cycle_graph(n)
    elif family == "complete":
        g = nx.complete_graph(n)
    elif family == "erdos_renyi":
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {p}")
        g = nx.gnp_random_graph(n, p, seed=rng.randrange(2**32))
    elif family == "unit_disk":
        if radius <= 0:
            raise ValueError(f"radius must be positive, got {radius}")
        g = nx.random_geometric_graph(n, radius, seed=rng.randrange(2**32))
    elif family == "star":
        g = nx.star_graph(n - 1)
    else:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    edges = sorted(tuple(sorted(e)) for e in g.edges())
    return PortLabeledGraph.from_adjacency(range(n), edges, rng=rng, namespace_size=n)


def disjoint_union(*graphs: PortLabeledGraph) -> PortLabeledGraph:
    """Union with vertex ids shifted so the pieces do not collide."""
    ports = {}
    shift = 0
    for g in graphs:
        for v in g.vertices:
            ports[v + shift] = [Dart(d.vertex + shift, d.port) for d in g.port_table(v)]
        shift += g.namespace_size
    return PortLabeledGraph(ports, max(shift, 1))


# connectivity -------------------------------------------------------------

def bfs_component(graph: PortLabeledGraph, s: int) -> set[int]:
    if s not in graph:
        raise KeyError(f"unknown vertex {s}")
    seen = {s}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        for mate in graph.port_table(v):
            if mate.vertex not in seen:
                seen.add(mate.vertex)
                queue.append(mate.vertex)
    return seen


def components(graph: PortLabeledGraph) -> list[set[int]]:
    out, seen = [], set()
    for v in graph.vertices:
        if v not in seen:
            comp = bfs_component(graph, v)
            seen |= comp
            out.append(comp)
    return out


# file format ----------------------------------------------------------------
# header "n m [namespace]" then one "u u_port v v_port" line per edge.

def dump_graph(graph: PortLabeledGraph) -> str:
    edges = graph.edges()
    head = f"{len(graph)} {len(edges)}"
    verts = graph.vertices
    if verts != tuple(range(len(verts))) or graph.namespace_size != len(verts):
        head += f" {graph.namespace_size}"
    lines = [head]
    if verts != tuple(range(len(verts))):
        lines.append("vertices " + " ".join(map(str, verts)))
    lines += [f"{u} {up} {v} {vp}" for u, up, v, vp in edges]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> PortLabeledGraph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not rows:
        raise ValueError("empty graph file")
    head = [int(x) for x in rows[0]]
    n, m = head[0], head[1]
    namespace = head[2] if len(head) > 2 else None
    body = rows[1:]
    if body and body[0][0] == "vertices":
        vertices = [int(x) for x in body[0][1:]]
        body = body[1:]
    else:
        vertices = list(range(n))
    if len(vertices) != n:
        raise ValueError(f"header says {n} vertices, found {len(vertices)}")
    if len(body) != m:
        raise ValueError(f"header says {m} edges, found {len(body)}")
    edges = [tuple(int(x) for x in row) for row in body]
    if any(len(e) != 4 for e in edges):
        raise ValueError("edge lines must have 4 fields: u u_port v v_port")
    return PortLabeledGraph.from_edges(vertices, edges, namespace)


def load_graph(path: str | Path) -> PortLabeledGraph:
    return parse_graph(Path(path).read_text())
