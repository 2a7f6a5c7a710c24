"""Exact solver for instances whose graph is a forest.

Leaves and isolated vertices are peeled off one at a time (lowest canonical
vertex first).  Peeling a leaf ``v`` with neighbour ``u`` replaces ``K(u)``
by the degrees ``u`` may still need from its remaining edges; the recorded
witness pairs let the factor be rebuilt in reverse peel order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .instance import NO, U, V, Decision, Edge, Instance, Vertex, Weighting, is_forest
from .transforms import Elimination, PreconditionError, Rejected, rule_degree0, rule_degree1


@dataclass
class ForestTrace:
    steps: list = field(default_factory=list)  # Vertex (degree-0 deletion) or Elimination

    @property
    def applications(self) -> int:
        return len(self.steps)


def solve_forest(inst: Instance, trace: ForestTrace | None = None) -> Decision:
    if not is_forest(inst.edges):
        raise PreconditionError("solve_forest needs an acyclic graph")
    if trace is None:
        trace = ForestTrace()
    # Working copies; rule_degree0/1 are the reference versions but rebuilding
    # an Instance per step is wasteful on the solver's hot path.
    lists = dict(inst.lists)
    adj: dict[Vertex, dict[Vertex, Edge]] = {x: {} for x in inst.vertices}
    for e in inst.edges:
        a, b = (U, e[0]), (V, e[1])
        adj[a][b] = e
        adj[b][a] = e
    for lst in lists.values():
        if not lst:
            return NO
    alive = set(inst.vertices)
    while alive:
        x = min(y for y in alive if len(adj[y]) <= 1)
        if not adj[x]:
            if 0 not in lists[x]:
                return NO
            trace.steps.append(x)
        else:
            ((y, e),) = adj[x].items()
            rho = inst.capacity[e]
            pairs: dict[int, list[tuple[int, int]]] = {}
            ly = sorted(lists[y])
            for cv in sorted(lists[x]):
                if cv > rho:
                    break
                for cu in ly:
                    if cv <= cu:
                        pairs.setdefault(cu - cv, []).append((cu, cv))
            if not pairs:
                return NO
            lists[y] = frozenset(pairs)
            trace.steps.append(Elimination(x, y, e, {c: tuple(p) for c, p in pairs.items()}))
            del adj[y][x]
        alive.discard(x)
        del adj[x]
    return Decision(_back_substitute(inst, trace))


def _back_substitute(inst: Instance, trace: ForestTrace) -> Weighting:
    phi: Weighting = {e: 0 for e in inst.edges}
    committed = {x: 0 for x in inst.vertices}
    for step in reversed(trace.steps):
        if not isinstance(step, Elimination):
            continue
        y = step.neighbor
        cu, cv = step.witnesses[committed[y]][0]
        phi[step.edge] = cv
        committed[y] += cv
        committed[step.vertex] += cv
    return phi


def solve_forest_by_rules(inst: Instance) -> Decision:
    """Same decision via the standalone rule functions; slower, used as a cross-check."""
    trace = ForestTrace()
    cur = inst
    try:
        while cur.vertices:
            x = min(y for y in cur.vertices if cur.degree(y) <= 1)
            if cur.degree(x) == 0:
                cur = rule_degree0(cur, x)
                trace.steps.append(x)
            else:
                cur, elim = rule_degree1(cur, x)
                if not cur.lists[elim.neighbor]:
                    return NO
                trace.steps.append(elim)
    except Rejected:
        return NO
    return Decision(_back_substitute(inst, trace))
