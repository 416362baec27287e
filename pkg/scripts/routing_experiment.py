"""Route random pairs on random graphs and tabulate hops against the oracle.

One CSV row per route: graph size, component sizes, sequence length,
status, hops, header bits.
"""
import argparse
import random
from dataclasses import dataclass

from uesroute.cubicize import reduce_to_cubic
from uesroute.graph import bfs_component, generate
from uesroute.protocol import SimNetwork, route
from uesroute.search import SequenceFamily


@dataclass
class Config:
    graphs: int = 20
    pairs: int = 10
    max_n: int = 30
    avg_degree: float = 2.0
    seed: int = 0


def main(cfg: Config) -> None:
    rng = random.Random(cfg.seed)
    fam = SequenceFamily(cfg.seed, strategy="incremental_fix")
    print("graph,n,s,t,component,gadget_component,length,status,expected,hops,header_bits,budget")
    for gi in range(cfg.graphs):
        n = rng.randint(2, cfg.max_n)
        g = generate("erdos_renyi", n, rng.randrange(2**32), p=min(1.0, cfg.avg_degree / n))
        cub = reduce_to_cubic(g, shuffle_seed=rng.randrange(2**32))
        for _ in range(cfg.pairs):
            s, t = rng.randrange(n), rng.randrange(n)
            comp = bfs_component(g, s)
            size = sum(len(cub.gadget[v]) for v in comp)
            _, seq = fam.rated_at_least(size)
            net = SimNetwork(cub, seq)
            res = route(net, s, t, record=False)
            print(f"{gi},{n},{s},{t},{len(comp)},{size},{len(seq)},{res.status.name.lower()},"
                  f"{'success' if t in comp else 'failure'},{res.hops},{res.max_header_bits},{net.codec.budget}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--graphs", type=int, default=20)
    p.add_argument("--pairs", type=int, default=10)
    p.add_argument("--max-n", type=int, default=30)
    p.add_argument("--avg-degree", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args()
    main(Config(a.graphs, a.pairs, a.max_n, a.avg_degree, a.seed))
