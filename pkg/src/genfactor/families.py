"""Instance families used by the test sweeps and experiment scripts."""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Sequence

from .instance import U, V, Instance, make_instance


def _subsets(values: Sequence[int]) -> list[frozenset[int]]:
    return [
        frozenset(c)
        for r in range(len(values) + 1)
        for c in itertools.combinations(values, r)
    ]


def exhaustive_family(
    max_u: int = 3,
    max_v: int = 2,
    u_lists: Sequence[frozenset[int]] = (frozenset({1}), frozenset({2})),
    v_values: Sequence[int] = (0, 1, 2, 3),
    min_u: int = 0,
    min_v: int = 0,
    rho_values: Sequence[int] = (1,),
) -> Iterator[Instance]:
    """Every bipartite instance up to the given sizes.

    Each possible edge is absent or present with a capacity from
    ``rho_values`` (unit capacities by default).  U-lists range over
    ``u_lists``; V-lists over all subsets of ``v_values``.
    """
    v_lists = _subsets(v_values)
    for m in range(min_u, max_u + 1):
        for k in range(min_v, max_v + 1):
            pairs = [(i, j) for i in range(1, m + 1) for j in range(1, k + 1)]
            for choice in itertools.product((0, *rho_values), repeat=len(pairs)):
                cap = {e: r for e, r in zip(pairs, choice) if r}
                for ul in itertools.product(u_lists, repeat=m):
                    for vl in itertools.product(v_lists, repeat=k):
                        lists = {(U, i): ul[i - 1] for i in range(1, m + 1)}
                        lists.update({(V, j): vl[j - 1] for j in range(1, k + 1)})
                        yield make_instance(m, k, cap, lists)


def exhaustive_family_size(
    max_u=3, max_v=2, n_u_lists=2, n_v_values=4, min_u=0, min_v=0, n_rho=1
) -> int:
    return sum(
        (n_rho + 1) ** (m * k) * n_u_lists**m * (2**n_v_values) ** k
        for m in range(min_u, max_u + 1)
        for k in range(min_v, max_v + 1)
    )


def random_instance(
    rng: random.Random,
    max_u: int = 5,
    max_v: int = 3,
    max_rho: int = 3,
    singleton_u: bool = True,
    ones: bool = False,
    edge_prob: float = 0.6,
    max_list: int = 3,
) -> Instance:
    """A random weighted instance whose lists are biased towards reachable degrees."""
    m = rng.randint(1, max_u)
    k = rng.randint(1, max_v)
    cap = {}
    for i in range(1, m + 1):
        for j in range(1, k + 1):
            if rng.random() < edge_prob:
                cap[(i, j)] = 1 if ones else rng.randint(1, max_rho)
    dr = {(U, i): 0 for i in range(1, m + 1)}
    dr.update({(V, j): 0 for j in range(1, k + 1)})
    for (i, j), r in cap.items():
        dr[(U, i)] += r
        dr[(V, j)] += r
    lists = {}
    for x, d in dr.items():
        if x[0] == U and ones:
            lists[x] = {1}
        elif x[0] == U and singleton_u:
            lists[x] = {rng.randint(0, d + 1)}
        else:
            size = rng.randint(1, max_list)
            lists[x] = {rng.randint(0, d + 1) for _ in range(size)}
    return make_instance(m, k, cap, lists)


def random_forest_instance(
    rng: random.Random, max_vertices: int = 10, max_rho: int = 3, max_list: int = 3
) -> Instance:
    """A random bipartite forest with up to ``max_vertices`` vertices."""
    n = rng.randint(1, max_vertices)
    m = rng.randint(0, n)
    k = n - m
    cap = {}
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            x = parent[x]
        return x

    pairs = [(i, j) for i in range(1, m + 1) for j in range(1, k + 1)]
    rng.shuffle(pairs)
    for i, j in pairs:
        if rng.random() < 0.5:
            a, b = find((U, i)), find((V, j))
            if a != b:
                parent[a] = b
                cap[(i, j)] = rng.randint(0, max_rho)
    dr = {(U, i): 0 for i in range(1, m + 1)}
    dr.update({(V, j): 0 for j in range(1, k + 1)})
    for (i, j), r in cap.items():
        dr[(U, i)] += r
        dr[(V, j)] += r
    lists = {
        x: {rng.randint(0, d + 1) for _ in range(rng.randint(1, max_list))} for x, d in dr.items()
    }
    return make_instance(m, k, cap, lists)
