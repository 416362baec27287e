"""How long must a random step sequence be to cover a random cubic graph?

Prints the cover frequency for lengths c * n^2 over a grid of n and c.
"""
import argparse
import random
from dataclasses import dataclass, field

from uesroute.cubic import matching_to_graph, random_cubic_mate
from uesroute.verify import covers_from


@dataclass
class Config:
    sizes: list[int] = field(default_factory=lambda: [4, 8, 12, 16, 24, 32])
    factors: list[float] = field(default_factory=lambda: [0.5, 1, 2, 5, 10])
    trials: int = 500
    seed: int = 0


def cover_rate(n: int, length: int, trials: int, rng: random.Random) -> float:
    hit = 0
    for _ in range(trials):
        g = matching_to_graph(random_cubic_mate(n, rng))
        steps = [rng.randrange(3) for _ in range(length)]
        hit += covers_from(g, rng.choice(g.darts()), steps)[0]
    return hit / trials


def main(cfg: Config) -> None:
    rng = random.Random(cfg.seed)
    print("n,factor,length,rate")
    for n in cfg.sizes:
        for c in cfg.factors:
            length = int(c * n * n)
            print(f"{n},{c},{length},{cover_rate(n, length, cfg.trials, rng):.3f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", type=int, nargs="+", default=Config().sizes)
    p.add_argument("--factors", type=float, nargs="+", default=Config().factors)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args()
    main(Config(a.sizes, a.factors, a.trials, a.seed))
