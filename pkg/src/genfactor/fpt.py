"""Fixed-parameter solver for bipartite instances whose U-lists are singletons.

Pipeline: normalize, contract U-modules, then for every admissible set X of
edges guessed to be full, enumerate maximal spanning forests of ``I_M - X``
and run the forest solver on each.  The first forest factor found is lifted
back through ``I - X``, the module contraction and normalization.

The search is exponential only in ``k = |V|``: there are at most
``k(2^k - 1)`` modules on unit-capacity input, so ``|E_M| <= k^2 2^k``.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import asdict, dataclass
from typing import Iterator, Optional, Sequence

from .forest import solve_forest
from .instance import (
    NO,
    U,
    V,
    Decision,
    Edge,
    Instance,
    Vertex,
    Weighting,
    inflate,
    normalize,
)
from .transforms import (
    ModuleMap,
    PreconditionError,
    contract_modules,
    expand_factor,
    find_module_partition,
    lift_factor_over_X,
    subtract_full_edges,
)


@dataclass
class SolveStats:
    k: int = 0
    modules_found: int = 0
    contracted_edge_count: int = 0
    x_subsets_explored: int = 0
    forests_explored: int = 0
    forest_solves: int = 0
    outcome: str = ""
    fast_path: bool = False
    unit_capacity: bool = True  # input had rho == 1 everywhere

    @property
    def module_bound(self) -> int:
        return self.k * (2**self.k - 1)

    def bound_violations(self) -> list[str]:
        """Counter invariants that fail on this run (empty list when all hold)."""
        bad = []
        if self.modules_found > self.module_bound:
            bad.append(f"p={self.modules_found} > k(2^k-1)={self.module_bound}")
        if self.x_subsets_explored > 2**self.contracted_edge_count:
            bad.append(f"x_subsets_explored={self.x_subsets_explored} > 2^|E_M|")
        if self.fast_path and self.x_subsets_explored != 1:
            bad.append("fast path explored more than one X")
        return bad

    def lines(self) -> list[str]:
        return [f"{key}={value}" for key, value in asdict(self).items()]

    def merge_counts(self, other: "SolveStats") -> None:
        self.x_subsets_explored += other.x_subsets_explored
        self.forests_explored += other.forests_explored
        self.forest_solves += other.forest_solves


# ---------------------------------------------------------------- enumerators


def enumerate_full_edge_sets(inst: Instance) -> Iterator[tuple[Edge, ...]]:
    """Candidate full-edge sets, smallest first, lexicographic within a size.

    A set is skipped when its capacity sum at some vertex exceeds ``max K``;
    that pruning is monotone, so the search stops at the first empty size.
    """
    candidates = [e for e in inst.edges if inst.capacity[e] >= 1]
    top = {x: max(lst, default=-1) for x, lst in inst.lists.items()}
    for size in range(len(candidates) + 1):
        any_ok = False
        for X in itertools.combinations(candidates, size):
            load: dict[Vertex, int] = {}
            ok = True
            for i, j in X:
                rho = inst.capacity[(i, j)]
                for x in ((U, i), (V, j)):
                    load[x] = load.get(x, 0) + rho
                    if load[x] > top[x]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                any_ok = True
                yield X
        if not any_ok:
            return


class _DSU:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        parent = self.parent
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def enumerate_spanning_forests(edges: Sequence[Edge]) -> Iterator[tuple[Edge, ...]]:
    """Every maximal spanning forest of the graph formed by ``edges``, once each.

    Deletion/contraction in the given edge order: an edge whose ends are
    already joined by chosen edges is dropped; otherwise it is taken, and it
    may also be skipped provided the unexamined edges still join its ends.
    """
    edges = list(edges)
    n = len(edges)
    ends = [((U, i), (V, j)) for i, j in edges]

    def joined_later(chosen: list[int], t: int) -> bool:
        dsu = _DSU()
        for s in chosen:
            dsu.union(*ends[s])
        for s in range(t + 1, n):
            dsu.union(*ends[s])
        a, b = ends[t]
        return dsu.find(a) == dsu.find(b)

    def rec(t: int, chosen: list[int]) -> Iterator[tuple[Edge, ...]]:
        while t < n:
            dsu = _DSU()
            for s in chosen:
                dsu.union(*ends[s])
            a, b = ends[t]
            if dsu.find(a) != dsu.find(b):
                break
            t += 1
        if t == n:
            yield tuple(edges[s] for s in chosen)
            return
        yield from rec(t + 1, chosen + [t])
        if joined_later(chosen, t):
            yield from rec(t + 1, chosen)

    yield from rec(0, [])


# ---------------------------------------------------------------- the search


@dataclass(frozen=True)
class _Prepared:
    original: Instance
    modules: ModuleMap
    contracted: Instance


def _prepare(inst: Instance, stats: SolveStats) -> Optional[_Prepared]:
    stats.k = len(inst.v_vertices)
    stats.unit_capacity = all(r == 1 for r in inst.capacity.values())
    norm = normalize(inst)
    if norm is None:
        stats.outcome = "NO"
        return None
    mm = find_module_partition(norm)
    contracted = contract_modules(norm, mm)
    stats.modules_found = mm.p
    stats.contracted_edge_count = len(contracted.capacity)
    return _Prepared(inst, mm, contracted)


def _forest_instance(base: Instance, tree: Sequence[Edge]) -> Instance:
    return Instance._trusted(
        base.u_vertices, base.v_vertices, {e: base.capacity[e] for e in tree}, base.lists
    )


def _search_X(contracted: Instance, X: tuple[Edge, ...], stats: SolveStats) -> Optional[Weighting]:
    """Try every forest of ``I_M - X``; return a factor of ``I_M`` or None."""
    stats.x_subsets_explored += 1
    reduced = subtract_full_edges(contracted, X)
    if any(not lst for lst in reduced.lists.values()):
        return None
    # Zero-capacity edges carry weight 0 in every factor, so they never sit in
    # a full skeleton; forests are taken over the positive edges only.
    positive = [e for e in reduced.edges if reduced.capacity[e] > 0]
    for tree in enumerate_spanning_forests(positive):
        stats.forests_explored += 1
        stats.forest_solves += 1
        dec = solve_forest(_forest_instance(reduced, tree))
        if dec:
            return lift_factor_over_X(contracted, X, dec.witness)
    return None


def _search_chunk(contracted: Instance, chunk: list[tuple[int, tuple[Edge, ...]]]):
    stats = SolveStats()
    for idx, X in chunk:
        phi = _search_X(contracted, X, stats)
        if phi is not None:
            return idx, phi, stats
    return None, None, stats


def _finish(prep: _Prepared, phi_m: Optional[Weighting], stats: SolveStats) -> Decision:
    if phi_m is None:
        stats.outcome = "NO"
        return NO
    stats.outcome = "YES"
    return Decision(inflate(prep.original, expand_factor(prep.modules, phi_m)))


def _check_singletons(inst: Instance) -> None:
    for i in inst.u_vertices:
        if len(inst.lists[(U, i)]) > 1:
            raise PreconditionError(
                f"u {i} has a list with {len(inst.lists[(U, i)])} entries; "
                "this solver needs |K(u)| <= 1 (use the brute-force oracle instead)"
            )


def solve(
    inst: Instance,
    workers: int = 1,
    deterministic: bool = True,
    count_all: bool = False,
) -> tuple[Decision, SolveStats]:
    """Decide ``inst`` and return a witness valid for ``inst`` itself.

    ``workers > 1`` splits the candidate sets X into contiguous chunks across
    processes.  The decision never depends on ``workers``; with
    ``deterministic`` the witness is the one from the first successful X in
    canonical order.  ``count_all`` keeps searching after the first success
    (for counter checks only).
    """
    _check_singletons(inst)
    stats = SolveStats()
    prep = _prepare(inst, stats)
    if prep is None:
        return NO, stats
    xs = enumerate_full_edge_sets(prep.contracted)
    if workers <= 1:
        best = None
        for X in xs:
            phi = _search_X(prep.contracted, X, stats)
            if phi is not None and best is None:
                best = phi
                if not count_all:
                    break
        return _finish(prep, best, stats), stats
    return _solve_parallel(prep, list(enumerate(xs)), workers, deterministic, stats)


def _solve_parallel(prep, indexed, workers, deterministic, stats):
    size = max(1, -(-len(indexed) // workers))
    chunks = [indexed[s : s + size] for s in range(0, len(indexed), size)]
    best_idx, best = None, None
    with ProcessPoolExecutor(max_workers=workers) as pool:
        pending = {pool.submit(_search_chunk, prep.contracted, c) for c in chunks}
        while pending:
            done, pending = wait(pending, return_when=FIRST_COMPLETED)
            for fut in done:
                idx, phi, part = fut.result()
                stats.merge_counts(part)
                if idx is not None and (best_idx is None or idx < best_idx):
                    best_idx, best = idx, phi
            if best is not None and not deterministic:
                for fut in pending:
                    fut.cancel()
                # cancelled chunks contribute nothing; running ones are awaited
                for fut in pending:
                    if not fut.cancelled():
                        stats.merge_counts(fut.result()[2])
                break
    return _finish(prep, best, stats), stats


def solve_singleton_ones(inst: Instance) -> tuple[Decision, SolveStats]:
    """Search for a fully acyclic factor directly when every U-list is ``{1}``.

    After contraction each module edge has capacity equal to the module's
    single admissible degree, so some factor (if any) has a forest as its
    full skeleton; no full-edge guessing is needed.
    """
    for i in inst.u_vertices:
        if inst.lists[(U, i)] != {1}:
            raise PreconditionError(f"u {i} does not have list {{1}}")
    stats = SolveStats(fast_path=True)
    prep = _prepare(inst, stats)
    if prep is None:
        stats.x_subsets_explored = 1
        return NO, stats
    stats.x_subsets_explored = 1
    contracted = prep.contracted
    found = None
    for tree in enumerate_spanning_forests(contracted.edges):
        stats.forests_explored += 1
        stats.forest_solves += 1
        dec = solve_forest(_forest_instance(contracted, tree))
        if dec:
            found = {e: dec.witness.get(e, 0) for e in contracted.edges}
            break
    return _finish(prep, found, stats), stats


def all_singleton_ones(inst: Instance) -> bool:
    return all(inst.lists[(U, i)] == {1} for i in inst.u_vertices)


def default_workers() -> int:
    return os.cpu_count() or 1
