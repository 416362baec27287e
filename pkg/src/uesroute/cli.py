"""Command line harness.

Exit codes: 0 success, 1 routing failure (target unreachable), 2 usage or
configuration error, 3 certification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
import zlib
from dataclasses import dataclass
from pathlib import Path

from .counting import count_nodes
from .cubicize import dump_mapping, reduce_to_cubic
from .exploration import dump_sequence, load_sequence
from .graph import FAMILIES, PortLabeledGraph, bfs_component, dump_graph, generate, load_graph, validate
from .protocol import SimNetwork, Status, broadcast, format_trace, route
from .race import format_race, race, random_walk_steps
from .search import SearchBudget, SequenceFamily, find_ues
from .verify import is_universal

EXIT_OK, EXIT_UNREACHABLE, EXIT_USAGE, EXIT_CERT = 0, 1, 2, 3
OUT_ENV = "UESROUTE_OUT"

log = logging.getLogger("uesroute")


class UsageError(Exception):
    pass


def subseed(seed: int, name: str) -> int:
    return (seed * 0x9E3779B1 + zlib.crc32(name.encode())) & 0xFFFFFFFF


@dataclass
class ExperimentConfig:
    command: str
    graph: str | None
    seed: int
    sequence: str | None
    bound: int | None
    budget: int
    source: int | None
    target: int | None
    ttl: int | None
    quantum: int
    oracle: bool
    out: Path | None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "ExperimentConfig":
        out = getattr(args, "out", None)
        if out is None and os.environ.get(OUT_ENV) and args.command != "gen" and args.command != "certify":
            out = os.environ[OUT_ENV]
        return cls(
            command=args.command,
            graph=getattr(args, "graph", None),
            seed=args.seed,
            sequence=getattr(args, "sequence", None),
            bound=getattr(args, "bound", None),
            budget=getattr(args, "budget", 1 << 18),
            source=getattr(args, "source", None),
            target=getattr(args, "target", None),
            ttl=getattr(args, "ttl", None),
            quantum=getattr(args, "quantum", 1),
            oracle=getattr(args, "oracle", False),
            out=Path(out) if out else None,
        )


def parse_graph_spec(spec: str, seed: int) -> PortLabeledGraph:
    """A graph file path, or ``family:size[:param]`` (param is p or radius)."""
    if Path(spec).exists():
        return load_graph(spec)
    parts = spec.split(":")
    if parts[0] not in FAMILIES or len(parts) < 2:
        raise UsageError(f"--graph must be a file or family:size[:param], got {spec!r}")
    try:
        n = int(parts[1])
        extra = {}
        if len(parts) > 2:
            extra["radius" if parts[0] == "unit_disk" else "p"] = float(parts[2])
        return generate(parts[0], n, subseed(seed, "graph"), **extra)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _family(cfg: ExperimentConfig) -> SequenceFamily:
    return SequenceFamily(subseed(cfg.seed, "family"), strategy="incremental_fix", budget=SearchBudget(cfg.budget))


def _network(cfg: ExperimentConfig):
    if cfg.graph is None:
        raise UsageError("--graph is required")
    graph = parse_graph_spec(cfg.graph, cfg.seed)
    if cfg.source is None or cfg.source not in graph:
        raise UsageError(f"--source must name a vertex of the graph, got {cfg.source}")
    cub = reduce_to_cubic(graph)
    if cfg.sequence:
        seq = load_sequence(cfg.sequence)
        counted = None
    else:
        # Size unknown: count first, then use the sequence that closed the walk.
        fam = _family(cfg)
        counted = count_nodes(cub, cfg.source, fam, backend="graph")
        seq = fam.get(counted.k_final)
    return graph, cub, SimNetwork(cub, seq), counted


def _emit(cfg: ExperimentConfig, row: dict, trace: str | None) -> None:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(row), lineterminator="\n")
    writer.writeheader()
    writer.writerow(row)
    if cfg.out is not None:
        cfg.out.mkdir(parents=True, exist_ok=True)
        (cfg.out / "summary.csv").write_text(buf.getvalue())
        if trace is not None:
            (cfg.out / "trace.txt").write_text(trace)
    sys.stdout.write(buf.getvalue())


def _oracle_cols(cfg, graph, cub, s) -> dict:
    if not cfg.oracle:
        return {}
    comp = bfs_component(graph, s)
    return {
        "oracle_component": len(comp),
        "oracle_gadget_component": len(bfs_component(cub.gprime, cub.origin(s))),
    }


def cmd_gen(cfg: ExperimentConfig, args) -> int:
    extra = {}
    if args.param is not None:
        extra["radius" if args.family == "unit_disk" else "p"] = args.param
    try:
        g = generate(args.family, args.size, subseed(cfg.seed, "graph"), **extra)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = validate(g)
    if not report.ok:
        raise UsageError("generated graph failed validation: " + "; ".join(report.violations))
    text = dump_graph(g)
    if cfg.out:
        cfg.out.write_text(text)
        if args.cubicize:
            cub = reduce_to_cubic(g)
            cfg.out.with_suffix(".cubic").write_text(dump_graph(cub.gprime))
            cfg.out.with_suffix(".map").write_text(dump_mapping(cub))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_certify(cfg: ExperimentConfig, args) -> int:
    if args.reverify:
        seq = load_sequence(args.reverify)
        bound = cfg.bound or seq.certificate.bound or seq.rated_size
        mode = "exhaustive" if bound <= 4 else "sampled"
        verdict = is_universal(seq, bound, mode, samples=args.samples, seed=subseed(cfg.seed, "reverify"))
        if verdict:
            print(f"ok bound={bound} mode={mode} instances={verdict.instances}")
            return EXIT_OK
        print(f"FAILED bound={bound} mode={mode} counterexample: {verdict.counterexample.describe()}")
        return EXIT_CERT
    if cfg.bound is None or cfg.bound <= 0 or cfg.bound % 2:
        raise UsageError("--bound must be a positive even number")
    found = find_ues(
        cfg.bound,
        args.strategy,
        SearchBudget(cfg.budget, args.attempts),
        seed=subseed(cfg.seed, "certify"),
        samples=args.samples,
    )
    if not found:
        print(f"certification failed: {found}", file=sys.stderr)
        return EXIT_CERT
    text = dump_sequence(found)
    if cfg.out:
        cfg.out.write_text(text)
    else:
        sys.stdout.write(text)
    print(f"certified length={len(found)} {found.certificate.to_line()}", file=sys.stderr)
    return EXIT_OK


def _check_target(cfg, graph) -> None:
    if cfg.target is None or not 0 <= cfg.target < graph.namespace_size:
        raise UsageError(f"--target must lie in the namespace [0,{graph.namespace_size}), got {cfg.target}")


def cmd_route(cfg: ExperimentConfig, args) -> int:
    graph, cub, net, _ = _network(cfg)
    _check_target(cfg, graph)
    res = route(net, cfg.source, cfg.target, record=True, check=True)
    row = {
        "command": "route",
        "source": cfg.source,
        "target": cfg.target,
        "status": res.status.name.lower(),
        "hops": res.hops,
        "sequence_length": len(net.sequence),
        "max_header_bits": res.max_header_bits,
        "header_budget": net.codec.budget,
        **_oracle_cols(cfg, graph, cub, cfg.source),
    }
    _emit(cfg, row, format_trace(res))
    return EXIT_OK if res.status == Status.SUCCESS else EXIT_UNREACHABLE


def cmd_broadcast(cfg: ExperimentConfig, args) -> int:
    graph, cub, net, _ = _network(cfg)
    res = broadcast(net, cfg.source, args.payload, record=True, check=True)
    row = {
        "command": "broadcast",
        "source": cfg.source,
        "status": res.status.name.lower(),
        "hops": res.hops,
        "reached": len(res.reached),
        "reached_nodes": " ".join(map(str, sorted(res.reached))),
        "sequence_length": len(net.sequence),
        "max_header_bits": res.max_header_bits,
        **_oracle_cols(cfg, graph, cub, cfg.source),
    }
    _emit(cfg, row, format_trace(res))
    return EXIT_OK


def cmd_count(cfg: ExperimentConfig, args) -> int:
    if cfg.graph is None:
        raise UsageError("--graph is required")
    graph = parse_graph_spec(cfg.graph, cfg.seed)
    if cfg.source is None or cfg.source not in graph:
        raise UsageError(f"--source must name a vertex of the graph, got {cfg.source}")
    cub = reduce_to_cubic(graph)
    rep = count_nodes(cub, cfg.source, _family(cfg), backend=args.backend)
    row = {
        "command": "count",
        "source": cfg.source,
        "original_count": rep.original_count,
        "gadget_count": rep.count,
        "k_final": rep.k_final,
        "hops_total": rep.hops_total,
        **_oracle_cols(cfg, graph, cub, cfg.source),
    }
    _emit(cfg, row, rep.to_text())
    return EXIT_OK


def cmd_race(cfg: ExperimentConfig, args) -> int:
    graph, cub, net, _ = _network(cfg)
    _check_target(cfg, graph)
    ttl = cfg.ttl if cfg.ttl is not None else 10 * len(cub.gprime) ** 2
    seed = subseed(cfg.seed, "walk")
    res = race(net, cfg.source, cfg.target, lambda n, s, t: random_walk_steps(n, s, t, ttl, seed), cfg.quantum)
    row = {
        "command": "race",
        "source": cfg.source,
        "target": cfg.target,
        "status": res.status.name.lower(),
        "winner": res.winner.value,
        "hops_prob": res.hops_prob,
        "hops_guar": res.hops_guar,
        "hops_total": res.hops_total,
        "quantum": cfg.quantum,
        **_oracle_cols(cfg, graph, cub, cfg.source),
    }
    _emit(cfg, row, format_race(res))
    return EXIT_OK if res.status == Status.SUCCESS else EXIT_UNREACHABLE


COMMANDS = {
    "gen": cmd_gen,
    "certify": cmd_certify,
    "route": cmd_route,
    "broadcast": cmd_broadcast,
    "count": cmd_count,
    "race": cmd_race,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uesroute", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, graph=True):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output file (gen, certify) or directory (experiments)")
        if graph:
            p.add_argument("--graph", help="graph file or family:size[:param]")
            p.add_argument("--source", type=int)
            p.add_argument("--sequence", help="sequence file; default: count, then use the closing sequence")
            p.add_argument("--budget", type=int, default=1 << 18, help="max sequence length for the search")
            p.add_argument("--oracle", action="store_true", help="add BFS component sizes to the summary")

    p = sub.add_parser("gen", help="generate a graph file")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("size", type=int)
    p.add_argument("param", type=float, nargs="?", help="p for erdos_renyi, radius for unit_disk")
    p.add_argument("--cubicize", action="store_true", help="also write the cubic graph and owner map")
    common(p, graph=False)

    p = sub.add_parser("certify", help="search for and certify a sequence")
    p.add_argument("--bound", type=int)
    p.add_argument("--budget", type=int, default=1 << 18)
    p.add_argument("--strategy", choices=("random_extend", "incremental_fix"), default="incremental_fix")
    p.add_argument("--attempts", type=int, default=8)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--reverify", metavar="FILE", help="re-verify an existing sequence file instead")
    common(p, graph=False)

    p = sub.add_parser("route", help="route one message")
    p.add_argument("--target", type=int)
    common(p)

    p = sub.add_parser("broadcast", help="broadcast from the source")
    p.add_argument("--payload", default="hello")
    common(p)

    p = sub.add_parser("count", help="count the source's component")
    p.add_argument("--backend", choices=("protocol", "graph"), default="protocol")
    common(p)

    p = sub.add_parser("race", help="race a random walk against the guaranteed router")
    p.add_argument("--target", type=int)
    p.add_argument("--ttl", type=int)
    p.add_argument("--quantum", type=int, default=1)
    common(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    cfg = ExperimentConfig.from_args(args)
    try:
        return COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        print(f"uesroute: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"uesroute: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
