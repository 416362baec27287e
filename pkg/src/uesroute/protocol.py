"""Stateless guaranteed-delivery routing over a cubicized network.

All protocol state travels in :class:`MessageHeader`.  A node only sees its
own :class:`VertexView` (gadget id, owner, degree), the local dart the message
came in on, and the shared read-only sequence.

Index discipline: a message standing at walk position ``j`` carries
``index == j + 1`` in both directions.  Forward it consumes ``T[index]`` and
increments; the turn-around bounce goes back over the arrival dart and
decrements; backward it undoes ``T[index]`` and decrements.  The walk is back
at its origin exactly when a backward message holds ``index == 1``.
"""
from __future__ import annotations

import pickle
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable, Iterator, NamedTuple

from .cubicize import CubicizedGraph
from .exploration import ExplorationSequence, step_port, unstep_port
from .graph import Dart

__all__ = [
    "Direction",
    "Status",
    "MessageHeader",
    "HeaderCodec",
    "header_budget",
    "VertexView",
    "Terminal",
    "ProtocolError",
    "handle_message",
    "SimNetwork",
    "Hop",
    "RouteResult",
    "route",
    "route_steps",
    "broadcast",
    "format_trace",
]


class ProtocolError(RuntimeError):
    pass


class Direction(IntEnum):
    FORWARD = 0
    BACK = 1


class Status(IntEnum):
    PENDING = 0
    SUCCESS = 1
    FAILURE = 2


class MessageHeader(NamedTuple):
    """Route header ``(s, t, dir, status, i)`` plus a broadcast flag.

    Forward messages are always pending and backward ones always decided;
    :meth:`check` enforces it and the codec cannot represent anything else.
    """

    src: int
    dst: int
    dir: Direction
    status: Status
    index: int
    broadcast: bool = False

    def check(self) -> "MessageHeader":
        if (self.dir == Direction.BACK) == (self.status == Status.PENDING):
            raise ValueError(f"inconsistent header: {self.dir.name} with {self.status.name}")
        return self

    def short(self) -> str:
        return f"{self.dir.name.lower()} {self.status.name.lower()} {self.index}"


def _bits(count: int) -> int:
    """Bits needed for values 0 .. count-1."""
    return max(count - 1, 0).bit_length()


def header_budget(namespace_size: int, length: int) -> int:
    return 4 * _bits(namespace_size) + _bits(max(length, 1)) + 4


# (dir, status) -> 2-bit phase code; forward always pending, backward always decided.
_PHASE = {
    (Direction.FORWARD, Status.PENDING): 0,
    (Direction.BACK, Status.SUCCESS): 1,
    (Direction.BACK, Status.FAILURE): 2,
}
_UNPHASE = {v: k for k, v in _PHASE.items()}


class HeaderCodec:
    """Fixed-width bit layout, most significant field first::

        src      ceil(log2 namespace)
        dst      ceil(log2 namespace)
        phase    2   (00 forward/pending, 01 back/success, 10 back/failure)
        bcast    1
        index-1  bit_length(L)   (index ranges over 1 .. L+1)
    """

    def __init__(self, namespace_size: int, length: int):
        self.namespace_size = namespace_size
        self.length = length
        self.id_bits = _bits(namespace_size)
        self.index_bits = max(length, 0).bit_length()
        self.width = 2 * self.id_bits + 3 + self.index_bits
        self.budget = header_budget(namespace_size, length)
        if self.width > self.budget:
            raise ProtocolError(f"header layout of {self.width} bits exceeds budget {self.budget}")

    def encode(self, h: MessageHeader) -> int:
        for name, value in (("src", h.src), ("dst", h.dst)):
            if not 0 <= value < self.namespace_size:
                raise OverflowError(f"{name}={value} outside namespace [0,{self.namespace_size})")
        if not 1 <= h.index <= self.length + 1:
            raise OverflowError(f"index {h.index} outside [1,{self.length + 1}]")
        h.check()
        word = h.src
        word = (word << self.id_bits) | h.dst
        word = (word << 2) | _PHASE[(h.dir, h.status)]
        word = (word << 1) | int(h.broadcast)
        word = (word << self.index_bits) | (h.index - 1)
        return word

    def decode(self, word: int) -> MessageHeader:
        if word >> self.width:
            raise OverflowError("word wider than the header layout")
        index = (word & ((1 << self.index_bits) - 1)) + 1
        word >>= self.index_bits
        bcast = bool(word & 1)
        word >>= 1
        phase = word & 3
        word >>= 2
        dst = word & ((1 << self.id_bits) - 1)
        src = word >> self.id_bits
        if phase not in _UNPHASE:
            raise ValueError(f"invalid phase code {phase}")
        d, s = _UNPHASE[phase]
        return MessageHeader(src, dst, d, s, index, bcast)

    def to_bitstring(self, h: MessageHeader) -> str:
        return format(self.encode(h), f"0{self.width}b") if self.width else ""


@dataclass(frozen=True)
class VertexView:
    """Everything a node knows about itself; never mutated."""

    vertex: int
    owner: int
    degree: int


@dataclass(frozen=True)
class Terminal:
    status: Status
    header: object = None


def _bounce(arrived_on: Dart, h: MessageHeader, status: Status):
    if h.index == 1:
        # Still at the origin: nothing to backtrack.
        return Terminal(status, MessageHeader(h.src, h.dst, Direction.BACK, status, 1, h.broadcast))
    return arrived_on, MessageHeader(h.src, h.dst, Direction.BACK, status, h.index - 1, h.broadcast)


def handle_message(view: VertexView, arrived_on: Dart, h: MessageHeader, seq: ExplorationSequence):
    """One Route step at ``view.vertex``.

    ``arrived_on`` is the local dart the message came in through.  Returns
    ``(send_on, header)`` or :class:`Terminal`.
    """
    L = len(seq)
    if not 1 <= h.index <= L + 1:
        raise ProtocolError(f"index {h.index} outside [1,{L + 1}] at vertex {view.vertex}")
    if h.dir == Direction.BACK:
        if view.owner == h.src and h.index == 1:
            return Terminal(h.status, h)
        if h.index == 1 or h.index == L + 1:
            raise ProtocolError(f"backward message with index {h.index} at vertex {view.vertex} (owner {view.owner})")
        port = unstep_port(arrived_on.port, seq.steps[h.index - 1], view.degree)
        return Dart(view.vertex, port), MessageHeader(h.src, h.dst, h.dir, h.status, h.index - 1, h.broadcast)
    if not h.broadcast and view.owner == h.dst:
        return _bounce(arrived_on, h, Status.SUCCESS)
    if h.index > L:
        return _bounce(arrived_on, h, Status.SUCCESS if h.broadcast else Status.FAILURE)
    port = step_port(arrived_on.port, seq.steps[h.index - 1], view.degree)
    return Dart(view.vertex, port), MessageHeader(h.src, h.dst, h.dir, h.status, h.index + 1, h.broadcast)


@dataclass(frozen=True)
class Hop:
    step: int
    sent: Dart
    received: Dart
    header: object

    def line(self) -> str:
        h = self.header
        text = h.short() if hasattr(h, "short") else repr(h)
        return f"{self.step} {self.sent.vertex}.{self.sent.port} -> {self.received.vertex}.{self.received.port} {text}"


@dataclass
class RouteResult:
    status: Status
    hops: int
    trace: list[Hop] = field(default_factory=list)
    max_header_bits: int = 0
    reached: set[int] | None = None
    visited_gadgets: list[int] | None = None
    answer: object = None

    @property
    def success(self) -> bool:
        return self.status == Status.SUCCESS


class SimNetwork:
    """A cubicized network, its sequence, and a single-message event loop."""

    def __init__(self, cub: CubicizedGraph, sequence: ExplorationSequence):
        self.cub = cub
        self.sequence = sequence
        g = cub.gprime
        self.views = tuple(VertexView(v, cub.owner[v], g.deg(v)) for v in g.vertices)
        self._links = tuple(g.port_table(v) for v in g.vertices)
        self.namespace_size = cub.original.namespace_size
        self.codec = HeaderCodec(self.namespace_size, len(sequence))

    def with_sequence(self, sequence: ExplorationSequence) -> "SimNetwork":
        return SimNetwork(self.cub, sequence)

    def node_state(self, v: int) -> bytes:
        return pickle.dumps(self.views[v])

    def deliver(self, send_on: Dart) -> Dart:
        """The dart on which a message sent on ``send_on`` arrives."""
        return self._links[send_on.vertex][send_on.port]

    def origin(self, s: int) -> Dart:
        """Where a message from ``s`` starts: gadget vertex ``gadget(s)[0]``, entered on port 0."""
        if s not in self.cub.gadget:
            raise KeyError(f"unknown source {s}")
        return Dart(self.cub.gadget[s][0], 0)

    def run(
        self,
        handler: Callable,
        header,
        at: Dart,
        *,
        codec=None,
        record: bool = False,
        check_stateless: bool = False,
        on_visit: Callable[[int], None] | None = None,
    ) -> Iterator[Hop]:
        """Drive one message until a handler returns :class:`Terminal`.

        Yields after every hop; the generator's return value is
        ``(Terminal, hops, max_header_bits, trace)``.
        """
        seq = self.sequence
        views = self.views
        links = self._links
        codec = codec or self.codec
        max_bits = codec.width
        if codec is not None:
            if codec.decode(codec.encode(header)) != header:
                raise ProtocolError("header codec round-trip failed")
        hops = 0
        trace: list[Hop] = []
        if on_visit:
            on_visit(at.vertex)
        while True:
            view = views[at.vertex]
            before = pickle.dumps(view) if check_stateless else None
            out = handler(view, at, header, seq)
            if check_stateless and pickle.dumps(view) != before:
                raise ProtocolError(f"node {view.vertex} state changed while handling a message")
            if isinstance(out, Terminal):
                return out, hops, max_bits, trace
            send_on, header = out
            if send_on.vertex != at.vertex:
                raise ProtocolError("handler tried to send from another vertex")
            if check_stateless:
                if codec.decode(codec.encode(header)) != header:
                    raise ProtocolError("header codec round-trip failed")
            at = links[send_on.vertex][send_on.port]
            hops += 1
            if record:
                trace.append(Hop(hops, send_on, at, header))
            if on_visit:
                on_visit(at.vertex)
            yield hops


def _drive(gen):
    while True:
        try:
            next(gen)
        except StopIteration as stop:
            return stop.value


def route_steps(net: SimNetwork, s: int, t: int, *, record: bool = False, check: bool = False):
    """Generator form of :func:`route`: yields once per hop, returns a :class:`RouteResult`."""
    if not 0 <= t < net.namespace_size:
        raise ValueError(f"target {t} outside namespace [0,{net.namespace_size})")
    at = net.origin(s)
    if s == t:
        return RouteResult(Status.SUCCESS, 0, [], net.codec.width)
    header = MessageHeader(s, t, Direction.FORWARD, Status.PENDING, 1)
    term, hops, bits, trace = yield from net.run(handle_message, header, at, record=record, check_stateless=check)
    return RouteResult(term.status, hops, trace, bits)


def route(net: SimNetwork, s: int, t: int, *, record: bool = True, check: bool = False) -> RouteResult:
    """Route a message from ``s`` towards ``t`` and wait for the confirmation at ``s``."""
    return _drive(route_steps(net, s, t, record=record, check=check))


def broadcast(net: SimNetwork, s: int, payload: object = None, *, record: bool = False, check: bool = False) -> RouteResult:
    """Walk the whole sequence from ``s``, delivering at each first visit, then confirm back at ``s``."""
    first_visit: list[int] = []
    seen: set[int] = set()

    def visit(v: int) -> None:
        if v not in seen:
            seen.add(v)
            first_visit.append(v)

    header = MessageHeader(s, s, Direction.FORWARD, Status.PENDING, 1, broadcast=True)
    term, hops, bits, trace = _drive(
        net.run(handle_message, header, net.origin(s), record=record, check_stateless=check, on_visit=visit)
    )
    reached = {net.cub.owner[v] for v in seen}
    return RouteResult(term.status, hops, trace, bits, reached=reached, visited_gadgets=first_visit, answer=payload)


def format_trace(result: RouteResult) -> str:
    return "".join(hop.line() + "\n" for hop in result.trace)
