"""Compare the FPT solver with the brute-force oracle on an exhaustive family.

    python3 scripts/exhaustive_sweep.py --max-u 3 --max-v 2
"""

import argparse
import time
from dataclasses import dataclass, fields

from genfactor.families import exhaustive_family, exhaustive_family_size
from genfactor.fpt import solve
from genfactor.instance import serialize_instance, verify_factor
from genfactor.oracle import solve_bruteforce


@dataclass
class Config:
    max_u: int = 3
    max_v: int = 2
    show: int = 3  # disagreements to print in full


def run(cfg: Config) -> int:
    total = exhaustive_family_size(cfg.max_u, cfg.max_v)
    print(f"family size {total}")
    start = time.perf_counter()
    yes = bad = 0
    worst_x = 0
    for inst in exhaustive_family(cfg.max_u, cfg.max_v):
        dec, stats = solve(inst)
        ref = solve_bruteforce(inst)
        yes += ref.yes
        worst_x = max(worst_x, stats.x_subsets_explored)
        if dec.yes != ref.yes or (dec and not verify_factor(inst, dec.witness)):
            bad += 1
            if bad <= cfg.show:
                print("mismatch:\n" + serialize_instance(inst))
    elapsed = time.perf_counter() - start
    print(f"{total} instances, {yes} YES, {bad} mismatches, max X explored {worst_x}, {elapsed:.1f}s")
    return 1 if bad else 0


def parse_args() -> Config:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in fields(Config):
        p.add_argument("--" + f.name.replace("_", "-"), type=int, default=f.default)
    return Config(**vars(p.parse_args()))


if __name__ == "__main__":
    raise SystemExit(run(parse_args()))
