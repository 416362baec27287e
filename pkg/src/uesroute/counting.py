"""Component-size discovery with sequences of doubling rating.

``retrieve`` and ``retrieve_neighbor`` are real protocol messages: a probe
walks ``i`` steps of the sequence from the source, picks up an identifier,
and backtracks.  :func:`count_nodes` runs the doubling loop on top of them:
for ``k = 1, 2, ...`` it checks whether every neighbor of every vertex the
walk of ``T_{2^k}`` visits is itself visited, and once that closure holds
counts the distinct visited vertices by pairwise comparison.

Walk positions run from 0 (the source's origin vertex) to ``L``.  Position 0
is included so that a walk which never re-enters the origin still counts it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import NamedTuple

from .cubicize import CubicizedGraph
from .exploration import ExplorationSequence, step_port, unstep_port, trace_walk
from .graph import Dart
from .protocol import ProtocolError, SimNetwork, Terminal, VertexView, _bits, _drive, header_budget
from .search import SequenceFamily

__all__ = [
    "ProbePhase",
    "ProbeHeader",
    "ProbeCodec",
    "handle_probe",
    "ProtocolProber",
    "GraphProber",
    "retrieve",
    "retrieve_neighbor",
    "CountReport",
    "count_nodes",
    "count_original_nodes",
]


class ProbePhase(IntEnum):
    FORWARD = 0
    PEEK = 1
    PEEK_RETURN = 2
    BACK = 3


class ProbeHeader(NamedTuple):
    """``neighbor`` is 0 for Retrieve, ``j`` in 1..3 for RetrieveNeighbor.

    ``return_port`` remembers the arrival port at ``v_i`` during the one-hop
    detour to the neighbor; it is 2 bits, not node state.
    """

    src: int
    neighbor: int
    target: int
    phase: ProbePhase
    index: int
    answer: int | None = None
    return_port: int = 0

    def short(self) -> str:
        ans = "-" if self.answer is None else self.answer
        return f"{self.phase.name.lower()} i={self.index} target={self.target} j={self.neighbor} answer={ans}"


class ProbeCodec:
    """Bit layout: src | neighbor(2) | target | phase(2) | index | has_answer(1) | answer | return_port(2).

    Budget: twice the route-header budget (two walk indices and a vertex
    identifier instead of two names).
    """

    def __init__(self, namespace_size: int, length: int, vertex_count: int):
        self.namespace_size = namespace_size
        self.length = length
        self.vertex_count = vertex_count
        self.id_bits = _bits(namespace_size)
        self.index_bits = max(length, 0).bit_length()
        self.vertex_bits = _bits(vertex_count)
        self.fields = (
            ("src", self.id_bits),
            ("neighbor", 2),
            ("target", self.index_bits),
            ("phase", 2),
            ("index", self.index_bits),
            ("has_answer", 1),
            ("answer", self.vertex_bits),
            ("return_port", 2),
        )
        self.width = sum(w for _, w in self.fields)
        self.budget = 2 * header_budget(namespace_size, length)
        if self.width > self.budget:
            raise ProtocolError(f"probe layout of {self.width} bits exceeds budget {self.budget}")

    def encode(self, h: ProbeHeader) -> int:
        if h.answer is not None and h.phase not in (ProbePhase.PEEK_RETURN, ProbePhase.BACK):
            raise ValueError("an answer only travels back")
        values = {
            "src": h.src,
            "neighbor": h.neighbor,
            "target": h.target,
            "phase": int(h.phase),
            "index": h.index - 1,
            "has_answer": h.answer is not None,
            "answer": h.answer or 0,
            "return_port": h.return_port,
        }
        word = 0
        for name, width in self.fields:
            v = int(values[name])
            if not 0 <= v < (1 << width) and not (width == 0 and v == 0):
                raise OverflowError(f"{name}={v} does not fit in {width} bits")
            word = (word << width) | v
        return word

    def decode(self, word: int) -> ProbeHeader:
        values = {}
        for name, width in reversed(self.fields):
            values[name] = word & ((1 << width) - 1)
            word >>= width
        return ProbeHeader(
            values["src"],
            values["neighbor"],
            values["target"],
            ProbePhase(values["phase"]),
            values["index"] + 1,
            values["answer"] if values["has_answer"] else None,
            values["return_port"],
        )


def _back_from(arrived_or_return: Dart, h: ProbeHeader, answer: int):
    if h.index == 1:
        return Terminal(answer, h._replace(phase=ProbePhase.BACK, answer=answer))
    return arrived_or_return, h._replace(phase=ProbePhase.BACK, answer=answer, index=h.index - 1)


def handle_probe(view: VertexView, arrived_on: Dart, h: ProbeHeader, seq: ExplorationSequence):
    """Probe step at ``view.vertex``; same index discipline as Route."""
    L = len(seq)
    if not 1 <= h.index <= L + 1:
        raise ProtocolError(f"probe index {h.index} outside [1,{L + 1}]")
    if h.phase == ProbePhase.BACK:
        if h.index == 1:
            if view.owner != h.src:
                raise ProtocolError("probe returned to the origin position away from the source")
            return Terminal(h.answer, h)
        port = unstep_port(arrived_on.port, seq.steps[h.index - 1], view.degree)
        return Dart(view.vertex, port), h._replace(index=h.index - 1)
    if h.phase == ProbePhase.PEEK:
        return arrived_on, h._replace(phase=ProbePhase.PEEK_RETURN, answer=view.vertex)
    if h.phase == ProbePhase.PEEK_RETURN:
        return _back_from(Dart(view.vertex, h.return_port), h, h.answer)
    if h.index - 1 == h.target:
        if h.neighbor == 0:
            return _back_from(arrived_on, h, view.vertex)
        return Dart(view.vertex, h.neighbor - 1), h._replace(phase=ProbePhase.PEEK, return_port=arrived_on.port)
    port = step_port(arrived_on.port, seq.steps[h.index - 1], view.degree)
    return Dart(view.vertex, port), h._replace(index=h.index + 1)


class ProtocolProber:
    """Retrieve / RetrieveNeighbor as messages through a :class:`SimNetwork`."""

    def __init__(self, cub: CubicizedGraph, s: int, *, check: bool = False):
        self.cub = cub
        self.s = s
        self.check = check
        self.hops = 0
        self.max_header_bits = 0
        self._nets: dict[int, tuple[SimNetwork, ProbeCodec, ExplorationSequence]] = {}

    def _net(self, seq: ExplorationSequence) -> tuple[SimNetwork, ProbeCodec]:
        key = id(seq)
        if key not in self._nets:
            net = SimNetwork(self.cub, seq)
            codec = ProbeCodec(net.namespace_size, len(seq), len(self.cub.gprime))
            self._nets[key] = (net, codec, seq)
        net, codec, _ = self._nets[key]
        return net, codec

    def _probe(self, seq: ExplorationSequence, i: int, j: int) -> int:
        if not 0 <= i <= len(seq):
            raise IndexError(f"walk position {i} outside [0,{len(seq)}]")
        if not 0 <= j <= 3:
            raise IndexError(f"neighbor index {j} outside [1,3]")
        net, codec = self._net(seq)
        header = ProbeHeader(self.s, j, i, ProbePhase.FORWARD, 1)
        term, hops, bits, _ = _drive(
            net.run(handle_probe, header, net.origin(self.s), codec=codec, check_stateless=self.check)
        )
        self.hops += hops
        self.max_header_bits = max(self.max_header_bits, bits)
        self.last_hops = hops
        return term.status

    def retrieve(self, seq: ExplorationSequence, i: int) -> int:
        return self._probe(seq, i, 0)

    def retrieve_neighbor(self, seq: ExplorationSequence, i: int, j: int) -> int:
        if j not in (1, 2, 3):
            raise IndexError(f"neighbor index {j} outside [1,3]")
        return self._probe(seq, i, j)


class GraphProber:
    """Same answers read straight off the walk trace; the test oracle for probes.

    Hop counts are charged as the message version would pay them.
    """

    def __init__(self, cub: CubicizedGraph, s: int):
        self.cub = cub
        self.s = s
        self.hops = 0
        self.max_header_bits = 0
        self._walks: dict[int, list[int]] = {}

    def walk(self, seq: ExplorationSequence) -> list[int]:
        key = id(seq)
        if key not in self._walks:
            start = Dart(self.cub.origin(self.s), 0)
            entered = self.cub.gprime.pair(start)
            self._walks[key] = ([s.vertex for s in trace_walk(self.cub.gprime, entered, seq)], seq)
        return self._walks[key][0]

    def retrieve(self, seq: ExplorationSequence, i: int) -> int:
        self.hops += 2 * i
        return self.walk(seq)[i]

    def retrieve_neighbor(self, seq: ExplorationSequence, i: int, j: int) -> int:
        self.hops += 2 * i + 2
        return self.cub.gprime.neighbor(self.walk(seq)[i], j - 1)


def retrieve(net: SimNetwork, s: int, seq: ExplorationSequence, i: int) -> tuple[int, int]:
    """Identifier of the vertex at walk position ``i`` from ``s``, and the hops it cost."""
    p = ProtocolProber(net.cub, s)
    return p.retrieve(seq, i), p.hops


def retrieve_neighbor(net: SimNetwork, s: int, seq: ExplorationSequence, i: int, j: int) -> tuple[int, int]:
    p = ProtocolProber(net.cub, s)
    return p.retrieve_neighbor(seq, i, j), p.hops


@dataclass
class KRound:
    k: int
    length: int
    hops: int
    closed: bool


@dataclass
class CountReport:
    count: int
    original_count: int
    k_final: int
    hops_total: int
    rounds: list[KRound] = field(default_factory=list)
    visited: set[int] = field(default_factory=set)
    max_header_bits: int = 0

    def to_text(self) -> str:
        lines = [
            f"count {self.count}",
            f"original_count {self.original_count}",
            f"k_final {self.k_final}",
            f"hops_total {self.hops_total}",
            "k length hops closed",
        ]
        lines += [f"{r.k} {r.length} {r.hops} {int(r.closed)}" for r in self.rounds]
        return "\n".join(lines) + "\n"


def _closed(prober, seq: ExplorationSequence) -> bool:
    L = len(seq)
    for i in range(L + 1):
        for j in (1, 2, 3):
            u = prober.retrieve_neighbor(seq, i, j)
            if not any(prober.retrieve(seq, l) == u for l in range(L + 1)):
                return False
    return True


def _distinct(prober, seq: ExplorationSequence) -> list[int]:
    found = []
    for i in range(len(seq) + 1):
        v_new = prober.retrieve(seq, i)
        if all(prober.retrieve(seq, j) != v_new for j in range(i)):
            found.append(v_new)
    return found


def _closed_fast(walk: list[int], gprime) -> bool:
    seen = set(walk)
    return all(gprime.neighbor(v, p) in seen for v in seen for p in range(3))


def count_nodes(
    cub: CubicizedGraph | SimNetwork,
    s: int,
    family: SequenceFamily,
    *,
    backend: str = "protocol",
    max_k: int = 24,
    check: bool = False,
) -> CountReport:
    """Size of the component of ``s`` in the cubicized graph, without knowing it in advance.

    ``backend="protocol"`` sends every probe through the simulator and does
    the quadratic scans literally.  ``backend="graph"`` reads the walk
    directly and uses sets; it stops at the same ``k`` and is meant as the
    oracle and for sizes where the message version is too slow.
    """
    if isinstance(cub, SimNetwork):
        cub = cub.cub
    if s not in cub.gadget:
        raise KeyError(f"unknown source {s}")
    if backend == "protocol":
        prober = ProtocolProber(cub, s, check=check)
    elif backend == "graph":
        prober = GraphProber(cub, s)
    else:
        raise ValueError(f"backend must be 'protocol' or 'graph', got {backend!r}")
    rounds = []
    k = 0
    while True:
        k += 1
        if k > max_k:
            raise RuntimeError(f"no closed walk up to k={max_k}")
        seq = family.get(k)
        before = prober.hops
        if backend == "protocol":
            closed = _closed(prober, seq)
        else:
            closed = _closed_fast(prober.walk(seq), cub.gprime)
        rounds.append(KRound(k, len(seq), prober.hops - before, closed))
        if closed:
            break
    before = prober.hops
    if backend == "protocol":
        visited = _distinct(prober, seq)
    else:
        visited = list(dict.fromkeys(prober.walk(seq)))
    rounds[-1].hops += prober.hops - before
    owners = {cub.owner[v] for v in visited}
    return CountReport(
        count=len(visited),
        original_count=len(owners),
        k_final=k,
        hops_total=prober.hops,
        rounds=rounds,
        visited=set(visited),
        max_header_bits=prober.max_header_bits,
    )


def count_original_nodes(cub: CubicizedGraph | SimNetwork, s: int, family: SequenceFamily, **kw) -> int:
    """``|C_s|`` in the original graph: distinct owners of the visited gadget vertices."""
    return count_nodes(cub, s, family, **kw).original_count
