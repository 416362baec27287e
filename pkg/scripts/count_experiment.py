"""Measure the message cost of component counting.

For each graph, counts with probe messages and reports hops per doubling
round next to L and L^2, to compare against a quadratic cost at the source.
"""
import argparse
import random
from dataclasses import dataclass

from uesroute.counting import count_nodes
from uesroute.cubicize import reduce_to_cubic
from uesroute.graph import bfs_component, generate
from uesroute.search import SequenceFamily


@dataclass
class Config:
    graphs: int = 10
    max_n: int = 6
    seed: int = 0
    backend: str = "protocol"


def main(cfg: Config) -> None:
    rng = random.Random(cfg.seed)
    fam = SequenceFamily(cfg.seed, strategy="incremental_fix")
    print("graph,n,component,gadget_count,original_count,k,length,round_hops,hops_over_L2,closed")
    for gi in range(cfg.graphs):
        n = rng.randint(1, cfg.max_n)
        g = generate("erdos_renyi", n, rng.randrange(2**32), p=0.4)
        cub = reduce_to_cubic(g)
        s = rng.randrange(n)
        rep = count_nodes(cub, s, fam, backend=cfg.backend)
        comp = bfs_component(g, s)
        for r in rep.rounds:
            ratio = r.hops / max(r.length, 1) ** 2
            print(f"{gi},{n},{len(comp)},{rep.count},{rep.original_count},{r.k},{r.length},{r.hops},{ratio:.2f},{int(r.closed)}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--graphs", type=int, default=10)
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--backend", choices=("protocol", "graph"), default="protocol")
    a = p.parse_args()
    main(Config(a.graphs, a.max_n, a.seed, a.backend))
