"""Search-space counters of the general path and the fast path on random instances.

Reports, per number of values k, how many candidate full-edge sets and
spanning forests each path visits.  Counters only; no timing claims.
"""

import argparse
import random
import statistics
from dataclasses import dataclass

from genfactor.families import random_instance
from genfactor.fpt import solve, solve_singleton_ones


@dataclass
class Config:
    per_k: int = 200
    max_u: int = 10
    k_max: int = 3
    seed: int = 1


def run(cfg: Config) -> None:
    rng = random.Random(cfg.seed)
    print(f"{'k':>2} {'p max':>6} {'bound':>6} {'X mean':>8} {'X max':>6} {'forests mean':>13} {'fast forests':>13} {'YES':>5}")
    for k in range(1, cfg.k_max + 1):
        xs, forests, fast_forests, ps, yes = [], [], [], [], 0
        for _ in range(cfg.per_k):
            inst = random_instance(rng, max_u=cfg.max_u, max_v=k, ones=True)
            while len(inst.v_vertices) != k:
                inst = random_instance(rng, max_u=cfg.max_u, max_v=k, ones=True)
            dec, stats = solve(inst, count_all=True)
            _, fast = solve_singleton_ones(inst)
            xs.append(stats.x_subsets_explored)
            forests.append(stats.forests_explored)
            fast_forests.append(fast.forests_explored)
            ps.append(stats.modules_found)
            yes += dec.yes
        print(
            f"{k:>2} {max(ps):>6} {k * (2**k - 1):>6} {statistics.mean(xs):>8.1f} {max(xs):>6} "
            f"{statistics.mean(forests):>13.1f} {statistics.mean(fast_forests):>13.1f} {yes:>5}"
        )


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name in ("per_k", "max_u", "k_max", "seed"):
        p.add_argument("--" + name.replace("_", "-"), type=int, default=getattr(Config, name))
    run(Config(**vars(p.parse_args())))
