"""Run every theorem suite over the instance corpus and print a summary.

Usage: python3 scripts/corpus_sweep.py [--max-size 6] [--only separation,blocks]
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time
from collections import Counter

from latticeea.checks import FAIL, check_all
from latticeea.corpus import full_corpus


@dataclasses.dataclass
class Config:
    max_size: int = 6
    only: list[str] | None = None
    verbose: bool = False


def sweep(cfg: Config) -> int:
    totals: Counter = Counter()
    seconds: Counter = Counter()
    failures = []
    t0 = time.perf_counter()
    for name, E in full_corpus(cfg.max_size):
        for r in check_all(E, cfg.only):
            totals[(r.name, r.label)] += 1
            seconds[r.name] += r.seconds
            if r.status == FAIL:
                failures.append((name, r))
            if cfg.verbose:
                print(f"{name:34s} {r.label:13s} {r.name} ({r.checked})")
    for suite in dict.fromkeys(k[0] for k in totals):
        labels = ", ".join(f"{lab}={c}" for (s, lab), c in sorted(totals.items()) if s == suite)
        print(f"{suite:22s} {seconds[suite]:7.2f}s  {labels}")
    for name, r in failures:
        print(f"FAIL {name}: {r.name}: {r.detail}")
    print(f"total {time.perf_counter() - t0:.1f}s, {len(failures)} failure(s)")
    return 2 if failures else 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-size", type=int, default=Config.max_size)
    ap.add_argument("--only", type=lambda s: s.split(","), default=None)
    ap.add_argument("--verbose", action="store_true")
    a = ap.parse_args(argv)
    return sweep(Config(a.max_size, a.only, a.verbose))


if __name__ == "__main__":
    sys.exit(main())
