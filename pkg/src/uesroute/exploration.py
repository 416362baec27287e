"""Exploration-sequence semantics: the step rule, its inverse, and walk traces.

A walk position is the dart most recently traversed.  Starting from ``e_0``
the walker stands at the head of ``e_0`` (the vertex ``e_0`` points into);
step ``t`` leaves through port ``entry_port + t mod deg``.  The visited set
of a walk is the set of vertices the walker stands on, i.e. the heads of
``e_0, e_1, ...``.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

from .graph import Dart, PortLabeledGraph

__all__ = [
    "step_port",
    "unstep_port",
    "next_dart",
    "prev_dart",
    "Certificate",
    "UNVERIFIED",
    "ExplorationSequence",
    "TraceStep",
    "trace_walk",
    "walk_visited",
    "dump_sequence",
    "parse_sequence",
    "load_sequence",
    "save_sequence",
]


def step_port(entry_port: int, t: int, deg: int) -> int:
    return (entry_port + t) % deg


def unstep_port(exit_port: int, t: int, deg: int) -> int:
    return (exit_port - t) % deg


def next_dart(graph: PortLabeledGraph, entered_on: Dart, t: int) -> Dart:
    """Dart leaving ``v`` after entering ``v`` on ``entered_on`` and applying offset ``t``."""
    back = graph.pair(entered_on)
    return Dart(back.vertex, step_port(back.port, t, graph.deg(back.vertex)))


def prev_dart(graph: PortLabeledGraph, exited_on: Dart, t: int) -> Dart:
    """Dart at ``v`` that the walk had entered through, given it left on ``exited_on`` with ``t``.

    The result is the co-dart of the entering dart, so
    ``graph.pair(prev_dart(g, next_dart(g, d, t), t)) == d``.
    """
    v = exited_on.vertex
    return Dart(v, unstep_port(exited_on.port, t, graph.deg(v)))


@dataclass(frozen=True)
class Certificate:
    """How much of the universality claim has been checked.

    ``kind`` is ``"exhaustive"``, ``"sampled"`` or ``"unverified"``.
    """

    kind: str
    bound: int | None = None
    samples: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in ("exhaustive", "sampled", "unverified"):
            raise ValueError(f"unknown certificate kind {self.kind!r}")

    @property
    def exhaustive(self) -> bool:
        return self.kind == "exhaustive"

    def covers(self, size: int) -> bool:
        return self.kind != "unverified" and self.bound is not None and size <= self.bound

    def to_line(self) -> str:
        if self.kind == "exhaustive":
            return f"exhaustive {self.bound}"
        if self.kind == "sampled":
            return f"sampled {self.bound} {self.samples} {self.seed}"
        return "unverified"

    @classmethod
    def from_line(cls, text: str) -> "Certificate":
        parts = text.split()
        if not parts:
            raise ValueError("empty certificate")
        kind, nums = parts[0], [int(x) for x in parts[1:]]
        if kind == "exhaustive" and len(nums) == 1:
            return cls(kind, nums[0])
        if kind == "sampled" and len(nums) == 3:
            return cls(kind, *nums)
        if kind == "unverified" and not nums:
            return cls(kind)
        raise ValueError(f"malformed certificate {text!r}")


UNVERIFIED = Certificate("unverified")


@dataclass(frozen=True)
class ExplorationSequence:
    """Steps ``t_1 .. t_N`` with the size they are rated for.

    ``steps`` is 0-based storage; :meth:`at` gives the 1-based ``t_i``.
    """

    steps: tuple[int, ...]
    rated_size: int
    certificate: Certificate = UNVERIFIED

    def __post_init__(self):
        if any(t not in (0, 1, 2) for t in self.steps):
            raise ValueError("cubic exploration steps must lie in {0, 1, 2}")

    @classmethod
    def of(cls, steps: Sequence[int] | str, rated_size: int = 0, certificate: Certificate = UNVERIFIED):
        if isinstance(steps, str):
            steps = [int(c) for c in steps]
        return cls(tuple(steps), rated_size, certificate)

    def __len__(self) -> int:
        return len(self.steps)

    def at(self, i: int) -> int:
        if not 1 <= i <= len(self.steps):
            raise IndexError(f"step index {i} outside [1, {len(self.steps)}]")
        return self.steps[i - 1]

    def with_certificate(self, certificate: Certificate) -> "ExplorationSequence":
        return ExplorationSequence(self.steps, self.rated_size, certificate)

    def __repr__(self) -> str:
        head = "".join(map(str, self.steps[:16]))
        more = "..." if len(self.steps) > 16 else ""
        return f"ExplorationSequence(len={len(self)}, rated={self.rated_size}, {self.certificate.to_line()}, {head}{more})"


class TraceStep(NamedTuple):
    index: int
    dart: Dart
    vertex: int


def trace_walk(
    graph: PortLabeledGraph,
    start: Dart,
    seq: ExplorationSequence | Sequence[int],
    limit: int | None = None,
) -> list[TraceStep]:
    """The walk ``e_0 .. e_limit``; entry ``i`` holds ``e_i`` and the vertex it enters."""
    steps = seq.steps if isinstance(seq, ExplorationSequence) else tuple(seq)
    if limit is None:
        limit = len(steps)
    if not 0 <= limit <= len(steps):
        raise ValueError(f"limit {limit} outside [0, {len(steps)}]")
    start = Dart(*start)
    out = [TraceStep(0, start, graph.pair(start).vertex)]
    d = start
    for i in range(limit):
        d = next_dart(graph, d, steps[i])
        out.append(TraceStep(i + 1, d, graph.pair(d).vertex))
    return out


def walk_visited(graph: PortLabeledGraph, start: Dart, steps: Sequence[int]) -> set[int]:
    return {s.vertex for s in trace_walk(graph, start, steps)}


# file format: "rated_size length certificate..." then the steps as digits

def dump_sequence(seq: ExplorationSequence) -> str:
    digits = "".join(map(str, seq.steps))
    return f"{seq.rated_size} {len(seq)} {seq.certificate.to_line()}\n{digits}\n"


def parse_sequence(text: str) -> ExplorationSequence:
    lines = text.split("\n")
    head = lines[0].split()
    if len(head) < 3:
        raise ValueError("sequence header must be 'rated_size length certificate'")
    rated, length = int(head[0]), int(head[1])
    cert = Certificate.from_line(" ".join(head[2:]))
    digits = "".join(ln.strip() for ln in lines[1:])
    if len(digits) != length:
        raise ValueError(f"header says {length} steps, found {len(digits)}")
    if any(c not in "012" for c in digits):
        raise ValueError("steps must be digits 0, 1 or 2")
    return ExplorationSequence(tuple(int(c) for c in digits), rated, cert)


def save_sequence(seq: ExplorationSequence, path: str | Path) -> None:
    Path(path).write_text(dump_sequence(seq))


def load_sequence(path: str | Path) -> ExplorationSequence:
    return parse_sequence(Path(path).read_text())
