"""Count effect algebras of each size, pruned search against the unpruned oracle.

Usage: python3 scripts/enumeration_counts.py [--max-size 7] [--oracle-max 5]
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time

from latticeea.enumeration import enumerate_size, oracle_count


@dataclasses.dataclass
class Config:
    max_size: int = 7
    oracle_max: int = 5  # the unpruned oracle is factorial in the size


def run(cfg: Config) -> int:
    mismatches = 0
    print(f"{'size':>4} {'classes':>8} {'lattices':>9} {'oracle':>7} {'seconds':>8}")
    for n in range(2, cfg.max_size + 1):
        t = time.perf_counter()
        found = enumerate_size(n)
        lattices = sum(E.is_lattice for E in found)
        oracle = oracle_count(n) if n <= cfg.oracle_max else None
        mismatches += oracle is not None and oracle != len(found)
        shown = "-" if oracle is None else str(oracle)
        print(f"{n:>4} {len(found):>8} {lattices:>9} {shown:>7} {time.perf_counter() - t:>8.2f}")
    return 2 if mismatches else 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-size", type=int, default=Config.max_size)
    ap.add_argument("--oracle-max", type=int, default=Config.oracle_max)
    a = ap.parse_args(argv)
    return run(Config(a.max_size, a.oracle_max))


if __name__ == "__main__":
    sys.exit(main())
