"""Instance-to-instance reductions and the matching certificate maps.

* module contraction (groups of interchangeable U-vertices) and the
  round-robin expansion of a contracted factor back to the groups,
* the full-edge transform ``I - X`` and its inverse on factors,
* cycle cancelling on the skeleton of a factor (``acyclify``),
* elimination of degree-0 and degree-1 vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Sequence

from .instance import (
    U,
    V,
    Edge,
    Instance,
    StructuralError,
    Vertex,
    Weighting,
    fmt_vertex,
    skeleton,
    verify_factor,
)


class PreconditionError(ValueError):
    """An operation was called on input outside its domain."""


# ---------------------------------------------------------------- modules


@dataclass(frozen=True)
class Module:
    members: tuple[int, ...]  # original U ids, ascending
    c: int
    replacement: int  # U id in the contracted instance
    neighbors: tuple[int, ...]  # V ids, ascending

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class ModuleMap:
    modules: tuple[Module, ...]

    @property
    def p(self) -> int:
        return len(self.modules)


def _module_eligible(inst: Instance, i: int) -> bool:
    return all(inst.capacity[e] == 1 for e in inst.incident[(U, i)])


def find_module_partition(inst: Instance) -> ModuleMap:
    """Group U by (list value, neighbourhood); vertices with a non-unit edge stay alone.

    Replacement ids are assigned 1..p in order of each group's smallest member.
    """
    groups: dict[object, list[int]] = {}
    for i in sorted(inst.u_vertices):
        lst = inst.lists[(U, i)]
        if len(lst) != 1:
            raise PreconditionError(
                f"u {i} has list of size {len(lst)}; module contraction needs singleton U-lists"
            )
        nbrs = tuple(e[1] for e in inst.incident[(U, i)])
        key = (next(iter(lst)), nbrs) if _module_eligible(inst, i) else ("alone", i)
        groups.setdefault(key, []).append(i)
    modules = []
    for rid, members in enumerate(sorted(groups.values()), 1):
        first = members[0]
        c = next(iter(inst.lists[(U, first)]))
        nbrs = tuple(e[1] for e in inst.incident[(U, first)])
        modules.append(Module(tuple(members), c, rid, nbrs))
    return ModuleMap(tuple(modules))


def contract_modules(inst: Instance, mm: ModuleMap) -> Instance:
    capacity: dict[Edge, int] = {}
    lists: dict[Vertex, frozenset[int]] = {(V, j): inst.lists[(V, j)] for j in inst.v_vertices}
    for mod in mm.modules:
        if mod.size == 1:
            (i,) = mod.members
            for e in inst.incident[(U, i)]:
                capacity[(mod.replacement, e[1])] = inst.capacity[e]
            lists[(U, mod.replacement)] = inst.lists[(U, i)]
        else:
            for j in mod.neighbors:
                capacity[(mod.replacement, j)] = mod.size
            lists[(U, mod.replacement)] = frozenset({mod.c * mod.size})
    return Instance._trusted(
        [mod.replacement for mod in mm.modules], sorted(inst.v_vertices), capacity, lists
    )


def expand_factor(mm: ModuleMap, phi_c: Mapping[Edge, int]) -> Weighting:
    """Distribute each module's contracted weights round-robin over its members.

    Neighbour ``v_i`` of a module of size ``s`` gets the members at positions
    ``S_{i-1}+1, ..., S_{i-1}+phi'(u_M v_i)`` (mod ``s``), where ``S`` is the
    running prefix sum; every member ends with degree exactly ``c``.
    """
    phi: Weighting = {}
    for mod in mm.modules:
        r = mod.replacement
        if mod.size == 1:
            i = mod.members[0]
            for (a, j), w in phi_c.items():
                if a == r:
                    phi[(i, j)] = w
            continue
        s = mod.size
        total = sum(phi_c.get((r, j), 0) for j in mod.neighbors)
        if total != mod.c * s:
            raise PreconditionError(
                f"module u {r} has contracted degree {total}, expected {mod.c * s}"
            )
        prefix = 0
        for j in mod.neighbors:
            w = phi_c.get((r, j), 0)
            if w > s:
                raise PreconditionError(f"weight {w} on u {r} v {j} exceeds module size {s}")
            chosen = {(prefix + l - 1) % s for l in range(1, w + 1)}
            for pos, i in enumerate(mod.members):
                phi[(i, j)] = 1 if pos in chosen else 0
            prefix += w
    return phi


# ---------------------------------------------------------------- full edges


def full_edge_degrees(inst: Instance, X: Sequence[Edge]) -> dict[Vertex, int]:
    d = {x: 0 for x in inst.vertices}
    for i, j in X:
        rho = inst.capacity[(i, j)]
        d[(U, i)] += rho
        d[(V, j)] += rho
    return d


def subtract_full_edges(inst: Instance, X: Sequence[Edge]) -> Instance:
    """The instance ``I - X``: drop X, lower other capacities by one, shift lists."""
    xs = set(X)
    for e in xs:
        if e not in inst.capacity:
            raise PreconditionError(f"u {e[0]} v {e[1]} is not an edge")
        if inst.capacity[e] < 1:
            raise PreconditionError(f"u {e[0]} v {e[1]} has capacity 0 and cannot be full")
    dx = full_edge_degrees(inst, list(xs))
    capacity = {e: max(r - 1, 0) for e, r in inst.capacity.items() if e not in xs}
    lists = {
        x: frozenset(c - dx[x] for c in lst if c >= dx[x]) for x, lst in inst.lists.items()
    }
    return Instance._trusted(inst.u_vertices, inst.v_vertices, capacity, lists)


def lift_factor_over_X(inst: Instance, X: Sequence[Edge], phi_x: Mapping[Edge, int]) -> Weighting:
    """Set every edge of X to its capacity and keep ``phi_x`` elsewhere."""
    reduced = subtract_full_edges(inst, X)
    if not verify_factor(reduced, phi_x):
        raise PreconditionError("weighting is not a factor of I - X")
    phi = {e: phi_x.get(e, 0) for e in inst.edges}
    for e in X:
        phi[e] = inst.capacity[e]
    return phi


# ---------------------------------------------------------------- acyclic factors


def find_cycle(edges: Sequence[Edge]) -> Optional[list[Vertex]]:
    """Return the vertices of some cycle as a closed walk ``[x0, x1, ..., x0]``, or None.

    Deterministic: adds ``edges`` in the given order and reports the first edge
    closing a cycle, together with the tree path between its ends.
    """
    adj: dict[Vertex, list[Vertex]] = {}
    parent: dict[Vertex, Vertex] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        a, b = (U, i), (V, j)
        if find(a) == find(b):
            return _tree_path(adj, b, a) + [a]
        parent[find(a)] = find(b)
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    return None


def _tree_path(adj, src, dst) -> list[Vertex]:
    prev = {src: None}
    stack = [src]
    while stack:
        x = stack.pop()
        if x == dst:
            break
        for y in adj.get(x, ()):
            if y not in prev:
                prev[y] = x
                stack.append(y)
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    return path  # dst ... src


def _as_edge(a: Vertex, b: Vertex) -> Edge:
    return (a[1], b[1]) if a[0] == U else (b[1], a[1])


def lex_key(e: Edge) -> tuple[int, int]:
    """Position of an edge in the V-major vector ``(phi(v1u1), phi(v1u2), ...)``."""
    return (e[1], e[0])


def lex_vector(inst: Instance, phi: Mapping[Edge, int]) -> tuple[int, ...]:
    return tuple(phi.get(e, 0) for e in sorted(inst.edges, key=lex_key))


def acyclify_steps(inst: Instance, phi: Mapping[Edge, int]) -> Iterator[Weighting]:
    """Yield the weighting after each cycle cancellation (see :func:`acyclify`)."""
    if not verify_factor(inst, phi):
        raise PreconditionError("acyclify needs a valid factor")
    phi = {e: phi.get(e, 0) for e in inst.edges}
    while True:
        cycle = find_cycle(skeleton(inst, phi))
        if cycle is None:
            return
        walk = [_as_edge(cycle[t], cycle[t + 1]) for t in range(len(cycle) - 1)]
        first = min(range(len(walk)), key=lambda t: lex_key(walk[t]))
        up, down = walk[first % 2 :: 2], walk[1 - first % 2 :: 2]
        delta = min(min(inst.capacity[e] - phi[e] for e in up), min(phi[e] for e in down))
        for e in up:
            phi[e] += delta
        for e in down:
            phi[e] -= delta
        yield dict(phi)


def acyclify(inst: Instance, phi: Mapping[Edge, int]) -> Weighting:
    """Cancel skeleton cycles until the skeleton is a forest.

    Each round alternately raises and lowers the weights around one cycle by
    the largest feasible amount, in the direction that raises the cycle's
    first edge in V-major order.  Weighted degrees never change, and each
    round empties or fills at least one cycle edge.
    """
    out = {e: phi.get(e, 0) for e in inst.edges}
    for out in acyclify_steps(inst, phi):
        pass
    return out


# ---------------------------------------------------------------- low degree rules


class Rejected(Exception):
    """A reduction rule proved the instance has no factor."""


def _delete_vertex(inst: Instance, x: Vertex, lists) -> Instance:
    side, idx = x
    lists = dict(lists)
    del lists[x]
    if side == U:
        us = [i for i in inst.u_vertices if i != idx]
        cap = {e: r for e, r in inst.capacity.items() if e[0] != idx}
        return Instance._trusted(us, inst.v_vertices, cap, lists)
    vs = [j for j in inst.v_vertices if j != idx]
    cap = {e: r for e, r in inst.capacity.items() if e[1] != idx}
    return Instance._trusted(inst.u_vertices, vs, cap, lists)


def rule_degree0(inst: Instance, x: Vertex) -> Instance:
    """Delete an isolated vertex; raise :class:`Rejected` if 0 is not in its list."""
    if inst.degree(x) != 0:
        raise PreconditionError(f"{fmt_vertex(x)} has degree {inst.degree(x)}, not 0")
    if 0 not in inst.lists[x]:
        raise Rejected(f"isolated {fmt_vertex(x)} cannot reach a degree in its list")
    return _delete_vertex(inst, x, inst.lists)


@dataclass(frozen=True)
class Elimination:
    """One degree-1 elimination: ``vertex`` hung off ``neighbor`` via ``edge``.

    ``witnesses[c']`` lists every pair ``(c_u, c_v)`` with ``c' = c_u - c_v``,
    smallest ``c_v`` first, then smallest ``c_u``.
    """

    vertex: Vertex
    neighbor: Vertex
    edge: Edge
    witnesses: Mapping[int, tuple[tuple[int, int], ...]] = field(repr=False)


def rule_degree1(inst: Instance, x: Vertex) -> tuple[Instance, Elimination]:
    if inst.degree(x) != 1:
        raise PreconditionError(f"{fmt_vertex(x)} has degree {inst.degree(x)}, not 1")
    (e,) = inst.incident[x]
    y = (V, e[1]) if x[0] == U else (U, e[0])
    rho = inst.capacity[e]
    pairs: dict[int, list[tuple[int, int]]] = {}
    for cv in sorted(inst.lists[x]):
        if cv > rho:
            break
        for cu in sorted(inst.lists[y]):
            if cv <= cu:
                pairs.setdefault(cu - cv, []).append((cu, cv))
    witnesses = {c: tuple(ps) for c, ps in pairs.items()}
    lists = dict(inst.lists)
    lists[y] = frozenset(witnesses)
    return _delete_vertex(inst, x, lists), Elimination(x, y, e, witnesses)


def check_module_map(inst: Instance, mm: ModuleMap) -> None:
    """Raise if ``mm`` is not a module partition of ``inst``'s U side."""
    seen = []
    for mod in mm.modules:
        seen.extend(mod.members)
        for i in mod.members:
            if inst.lists[(U, i)] != {mod.c}:
                raise StructuralError(f"u {i} does not have list {{{mod.c}}}")
            if tuple(e[1] for e in inst.incident[(U, i)]) != mod.neighbors:
                raise StructuralError(f"u {i} neighbourhood differs from its module")
            if mod.size > 1 and not _module_eligible(inst, i):
                raise StructuralError(f"u {i} has a non-unit edge")
    if sorted(seen) != sorted(inst.u_vertices):
        raise StructuralError("modules do not partition U")
