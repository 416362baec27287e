"""Build the sequence family T_1, T_2, T_4, ... and write each one to disk.

    python3 scripts/certify_family.py --max-k 7 --out sequences/
"""
import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from uesroute.exploration import save_sequence
from uesroute.search import SequenceFamily


@dataclass
class Config:
    max_k: int = 6
    seed: int = 0
    strategy: str = "incremental_fix"
    samples: int = 200
    out: Path = Path("sequences")


def main(cfg: Config) -> None:
    cfg.out.mkdir(parents=True, exist_ok=True)
    fam = SequenceFamily(cfg.seed, strategy=cfg.strategy, samples=cfg.samples)
    print("k,bound,length,certificate,seconds")
    for k in range(cfg.max_k + 1):
        start = time.perf_counter()
        seq = fam.get(k)
        save_sequence(seq, cfg.out / f"T{2**k}.txt")
        print(f"{k},{2**k},{len(seq)},{seq.certificate.to_line()},{time.perf_counter() - start:.2f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--max-k", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strategy", choices=("random_extend", "incremental_fix"), default="incremental_fix")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--out", type=Path, default=Path("sequences"))
    a = p.parse_args()
    main(Config(a.max_k, a.seed, a.strategy, a.samples, a.out))
