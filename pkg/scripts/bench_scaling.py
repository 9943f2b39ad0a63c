#!/usr/bin/env python3
"""Wall time and peak traced memory of ``solve`` across instance sizes.

    python3 scripts/bench_scaling.py --sizes 65536,262144,2097152 --repeat 5

Prints one row per size plus the ratios against the smallest size, which
is what the linearity check compares (32x size at most 48x time, 64x memory).
"""

from __future__ import annotations

import argparse
import gc
import statistics
import time
import tracemalloc
from dataclasses import dataclass

from treeflow.oracle import GenParams, random_instance
from treeflow.solver import solve


@dataclass
class BenchConfig:
    sizes: list[int]
    seed: int = 7
    repeat: int = 5
    terminal_fraction: float = 0.5
    max_cap: int = 4
    memory: bool = True


def parse_args(argv=None) -> BenchConfig:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="65536,2097152")
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--terminal-fraction", type=float, default=0.5)
    ap.add_argument("--max-cap", type=int, default=4)
    ap.add_argument("--no-memory", action="store_true", help="skip the tracemalloc pass")
    a = ap.parse_args(argv)
    sizes = [int(s) for s in a.sizes.split(",")]
    return BenchConfig(sizes, a.seed, a.repeat, a.terminal_fraction, a.max_cap, not a.no_memory)


def measure(cfg: BenchConfig, n: int) -> tuple[float, int | None]:
    inst = random_instance(GenParams(n, cfg.terminal_fraction, cfg.max_cap, cfg.seed))
    times = []
    for _ in range(cfg.repeat):
        gc.collect()
        t = time.perf_counter()
        solve(inst)
        times.append(time.perf_counter() - t)
    peak = None
    if cfg.memory:
        gc.collect()
        tracemalloc.start()
        solve(inst)
        peak = tracemalloc.get_traced_memory()[1]
        tracemalloc.stop()
    return statistics.median(times), peak


def main(argv=None) -> None:
    cfg = parse_args(argv)
    print(f"{'n':>10} {'median s':>10} {'ns/edge':>9} {'peak MiB':>9} {'B/edge':>7} {'t ratio':>8} {'m ratio':>8}")
    base = None
    for n in cfg.sizes:
        secs, peak = measure(cfg, n)
        if base is None:
            base = (secs, peak)
        mib = f"{peak / 2**20:9.1f}" if peak else f"{'-':>9}"
        per = f"{peak / (n - 1):7.0f}" if peak else f"{'-':>7}"
        mr = f"{peak / base[1]:8.1f}" if peak else f"{'-':>8}"
        print(f"{n:>10} {secs:10.3f} {secs / (n - 1) * 1e9:9.0f} {mib} {per} {secs / base[0]:8.1f} {mr}", flush=True)


if __name__ == "__main__":
    main()
