"""Tabulate the size of the clique reduction against the closed-form counts.

Prints one row per (k, n): |V_H| next to C(k,2)+3k, and the constructed
|U_H| next to both k*n(n+2) and k*2n(n+2).
"""

import argparse
import random
from dataclasses import dataclass

from genfactor.gadgets import (
    constructed_u_count,
    expected_v_count,
    random_partitioned_graph,
    reduce_clique,
    stated_u_count,
)
from genfactor.instance import U


@dataclass
class Config:
    k_max: int = 5
    n_max: int = 3
    seed: int = 0


def run(cfg: Config) -> None:
    rng = random.Random(cfg.seed)
    print(f"{'k':>2} {'n':>2} {'|V_H|':>6} {'C(k,2)+3k':>10} {'|U_H|':>6} {'k*n(n+2)':>9} {'k*2n(n+2)':>10} {'|E_H|':>6} U-lists")
    for k in range(2, cfg.k_max + 1):
        for n in range(1, cfg.n_max + 1):
            red = reduce_clique(random_partitioned_graph(rng, k, n))
            inst = red.instance
            sizes = sorted({max(inst.lists[(U, i)]) for i in inst.u_vertices})
            print(
                f"{k:>2} {n:>2} {len(inst.v_vertices):>6} {expected_v_count(k):>10} "
                f"{red.u_count:>6} {constructed_u_count(k, n):>9} {stated_u_count(k, n):>10} "
                f"{len(inst.edges):>6} {{0,s}} s in {sizes}"
            )


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--k-max", type=int, default=Config.k_max)
    p.add_argument("--n-max", type=int, default=Config.n_max)
    p.add_argument("--seed", type=int, default=Config.seed)
    run(Config(**vars(p.parse_args())))
