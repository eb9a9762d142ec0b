"""Time the incremental driver on grids of n and 4n vertices."""

from __future__ import annotations

import argparse
import gc
import time
from dataclasses import dataclass

from fvskernel.engine import kernelize
from fvskernel.generators import grid_for_size


@dataclass(frozen=True)
class BenchConfig:
    base: int = 50_000
    factor: int = 4
    repeat: int = 3
    mode: str = "incremental"
    ell: int = 5
    max_ratio: float = 6.0


def best_time(n: int, cfg: BenchConfig) -> float:
    inst = grid_for_size(n)
    best = float("inf")
    for _ in range(cfg.repeat):
        gc.collect()
        gc.disable()
        try:
            t0 = time.perf_counter()
            kernelize(inst, mode=cfg.mode, ell=cfg.ell)
            best = min(best, time.perf_counter() - t0)
        finally:
            gc.enable()
    return best


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__)
    for name, value in BenchConfig().__dict__.items():
        p.add_argument(f"--{name.replace('_', '-')}", type=type(value), default=value)
    cfg = BenchConfig(**vars(p.parse_args()))
    small = best_time(cfg.base, cfg)
    large = best_time(cfg.base * cfg.factor, cfg)
    ratio = large / small
    print(f"n={cfg.base} {small:.3f}s  n={cfg.base * cfg.factor} {large:.3f}s  ratio={ratio:.2f}")
    return 0 if ratio <= cfg.max_ratio else 1


if __name__ == "__main__":
    raise SystemExit(main())
