"""Exhaustive backtracking oracle, independent of the reduction machinery.

Edges are branched on one at a time with weights ``0..rho``.  A vertex keeps
its committed degree and the capacity still unassigned around it; a branch is
cut as soon as no list entry lies in ``[committed, committed + remaining]``.
That single test covers a finished vertex missing its list, a vertex that
already overshot ``max K``, and one that can no longer reach ``min K``.
"""

from __future__ import annotations

from .instance import NO, U, V, Decision, Edge, Instance, Vertex, Weighting

DEFAULT_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    """The node budget ran out before the search finished (outcome unknown)."""


def _branch_order(inst: Instance) -> list[Edge]:
    # Tightest endpoint first: slack = number of admissible degrees.  Ties by
    # canonical edge order, which keeps each U-vertex's edges together.
    def slack(e: Edge) -> int:
        return min(len(inst.lists[(U, e[0])]), len(inst.lists[(V, e[1])]))

    return sorted(inst.edges, key=lambda e: (slack(e), e))


def _search(inst: Instance, budget: int, collect: bool):
    order = _branch_order(inst)
    lists = {x: sorted(inst.lists[x]) for x in inst.vertices}
    committed = {x: 0 for x in inst.vertices}
    remaining = {x: inst.capacity_degree(x) for x in inst.vertices}
    weights = [0] * len(order)
    ends = [((U, e[0]), (V, e[1])) for e in order]
    found: list[Weighting] = []
    nodes = 0

    def reachable(x: Vertex) -> bool:
        lo = committed[x]
        hi = lo + remaining[x]
        return any(lo <= c <= hi for c in lists[x])

    for x in inst.vertices:
        if not reachable(x):
            return found, 0

    def rec(t: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"oracle exceeded {budget} nodes")
        if t == len(order):
            found.append({order[s]: weights[s] for s in range(len(order))})
            return not collect
        a, b = ends[t]
        rho = inst.capacity[order[t]]
        remaining[a] -= rho
        remaining[b] -= rho
        for w in range(rho + 1):
            committed[a] += w
            committed[b] += w
            if reachable(a) and reachable(b):
                weights[t] = w
                if rec(t + 1):
                    committed[a] -= w
                    committed[b] -= w
                    remaining[a] += rho
                    remaining[b] += rho
                    return True
            committed[a] -= w
            committed[b] -= w
        remaining[a] += rho
        remaining[b] += rho
        return False

    rec(0)
    return found, nodes


def _canonical_key(inst: Instance, phi: Weighting) -> tuple[int, ...]:
    return tuple(phi[e] for e in inst.edges)


def solve_bruteforce(inst: Instance, budget: int = DEFAULT_BUDGET) -> Decision:
    """First factor met by the search, or NO.  Raises :class:`BudgetExceeded`."""
    found, _ = _search(inst, budget, collect=False)
    if not found:
        return NO
    return Decision({e: found[0][e] for e in inst.edges})


def enumerate_all_factors(inst: Instance, budget: int = DEFAULT_BUDGET) -> list[Weighting]:
    """Every factor of ``inst``, sorted by weight vector in canonical edge order."""
    found, _ = _search(inst, budget, collect=True)
    unique = {_canonical_key(inst, phi): phi for phi in found}
    return [{e: unique[key][e] for e in inst.edges} for key in sorted(unique)]


def count_nodes(inst: Instance, budget: int = DEFAULT_BUDGET) -> int:
    return _search(inst, budget, collect=True)[1]
