"""Bipartite edge-weighted general factor instances.

An instance is a bipartite graph ``G = (U + V, E)`` with an integer capacity
on each edge and a finite list of admissible degrees at each vertex.  A
*factor* is an edge weighting ``phi`` with ``0 <= phi(e) <= capacity(e)``
whose weighted degree at every vertex lies in that vertex's list.

Vertices are ``(side, index)`` tuples with side ``"u"`` or ``"v"``; sorting
them gives the canonical order (all of U, then all of V).  Edges are
``(i, j)`` pairs meaning ``u_i v_j``.  Weightings are plain dicts from edge
to weight; absent edges carry weight 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional

Vertex = tuple[str, int]
Edge = tuple[int, int]
Weighting = dict[Edge, int]

U, V = "u", "v"


class StructuralError(ValueError):
    """Input that does not describe a well-formed instance or weighting."""


class ParseError(StructuralError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def uvert(i: int) -> Vertex:
    return (U, i)


def vvert(j: int) -> Vertex:
    return (V, j)


def edge_ends(e: Edge) -> tuple[Vertex, Vertex]:
    return (U, e[0]), (V, e[1])


def fmt_vertex(x: Vertex) -> str:
    return f"{x[0]} {x[1]}"


def fmt_list(values: Iterable[int]) -> str:
    values = sorted(values)
    return ",".join(map(str, values)) if values else "-"


@dataclass(frozen=True, eq=True)
class Instance:
    """An instance ``(G, rho, K)``; treat as immutable once built."""

    u_vertices: tuple[int, ...]
    v_vertices: tuple[int, ...]
    capacity: Mapping[Edge, int]
    lists: Mapping[Vertex, frozenset[int]] = field(repr=False)

    def __post_init__(self):
        if len(set(self.u_vertices)) != len(self.u_vertices):
            raise StructuralError("duplicate U vertex id")
        if len(set(self.v_vertices)) != len(self.v_vertices):
            raise StructuralError("duplicate V vertex id")
        us, vs = set(self.u_vertices), set(self.v_vertices)
        for (i, j), rho in self.capacity.items():
            if i not in us or j not in vs:
                raise StructuralError(f"edge ({i}, {j}) has an undeclared endpoint")
            if rho < 0:
                raise StructuralError(f"edge ({i}, {j}) has negative capacity {rho}")
        declared = {(U, i) for i in us} | {(V, j) for j in vs}
        if set(self.lists) != declared:
            raise StructuralError("degree lists must cover exactly the declared vertices")
        for x, lst in self.lists.items():
            if any(c < 0 for c in lst):
                raise StructuralError(f"negative entry in list of {fmt_vertex(x)}")

    @classmethod
    def _trusted(cls, u_vertices, v_vertices, capacity, lists) -> "Instance":
        # internal constructor for transforms whose output is valid by construction
        obj = object.__new__(cls)
        object.__setattr__(obj, "u_vertices", tuple(u_vertices))
        object.__setattr__(obj, "v_vertices", tuple(v_vertices))
        object.__setattr__(obj, "capacity", capacity)
        object.__setattr__(obj, "lists", lists)
        return obj

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.capacity))

    @cached_property
    def vertices(self) -> tuple[Vertex, ...]:
        return tuple(sorted((U, i) for i in self.u_vertices)) + tuple(
            sorted((V, j) for j in self.v_vertices)
        )

    @cached_property
    def incident(self) -> dict[Vertex, tuple[Edge, ...]]:
        inc: dict[Vertex, list[Edge]] = {x: [] for x in self.vertices}
        for e in self.edges:
            inc[(U, e[0])].append(e)
            inc[(V, e[1])].append(e)
        return {x: tuple(es) for x, es in inc.items()}

    def degree(self, x: Vertex) -> int:
        return len(self.incident[x])

    def capacity_degree(self, x: Vertex) -> int:
        """Sum of capacities of the edges at ``x``."""
        return sum(self.capacity[e] for e in self.incident[x])

    def neighbors(self, x: Vertex) -> tuple[Vertex, ...]:
        if x[0] == U:
            return tuple((V, e[1]) for e in self.incident[x])
        return tuple((U, e[0]) for e in self.incident[x])

    @property
    def k(self) -> int:
        return len(self.v_vertices)

    def is_dense(self) -> bool:
        """True if ids on both sides are exactly 1..m and 1..k."""
        return sorted(self.u_vertices) == list(range(1, len(self.u_vertices) + 1)) and sorted(
            self.v_vertices
        ) == list(range(1, len(self.v_vertices) + 1))

    def canonical(self) -> "Instance":
        return Instance(
            tuple(sorted(self.u_vertices)),
            tuple(sorted(self.v_vertices)),
            {e: self.capacity[e] for e in self.edges},
            {x: frozenset(self.lists[x]) for x in self.vertices},
        )

    def compact(self) -> tuple["Instance", dict[Vertex, Vertex]]:
        """Relabel to dense ids; returns the new instance and new->old vertex map."""
        umap = {old: new for new, old in enumerate(sorted(self.u_vertices), 1)}
        vmap = {old: new for new, old in enumerate(sorted(self.v_vertices), 1)}
        inst = Instance(
            tuple(umap.values()),
            tuple(vmap.values()),
            {(umap[i], vmap[j]): rho for (i, j), rho in self.capacity.items()},
            {(U, umap[i]) if s == U else (V, vmap[i]): lst for (s, i), lst in self.lists.items()},
        )
        back = {(U, n): (U, o) for o, n in umap.items()}
        back.update({(V, n): (V, o) for o, n in vmap.items()})
        return inst, back


def make_instance(
    m: int, k: int, capacity: Mapping[Edge, int], lists: Mapping[Vertex, Iterable[int]]
) -> Instance:
    """Build an instance on U = 1..m, V = 1..k."""
    return Instance(
        tuple(range(1, m + 1)),
        tuple(range(1, k + 1)),
        dict(capacity),
        {x: frozenset(lists[x]) for x in lists},
    )


def lift_unweighted(
    u_vertices: Iterable[int],
    v_vertices: Iterable[int],
    edges: Iterable[tuple[Vertex, Vertex]],
    lists: Mapping[Vertex, Iterable[int]],
) -> Instance:
    """Turn a simple bipartite graph into an instance with unit capacities.

    ``edges`` are pairs of vertices in either order; an edge with both ends on
    the same side, or a repeated edge, raises :class:`StructuralError`.
    """
    capacity: dict[Edge, int] = {}
    for a, b in edges:
        if a[0] == b[0]:
            raise StructuralError(f"edge {fmt_vertex(a)} - {fmt_vertex(b)} is not bipartite")
        if a[0] == V:
            a, b = b, a
        e = (a[1], b[1])
        if e in capacity:
            raise StructuralError(f"duplicate edge u {e[0]} v {e[1]}")
        capacity[e] = 1
    return Instance(
        tuple(u_vertices),
        tuple(v_vertices),
        capacity,
        {x: frozenset(lst) for x, lst in lists.items()},
    )


def weighted_degrees(inst: Instance, phi: Mapping[Edge, int]) -> dict[Vertex, int]:
    deg = {x: 0 for x in inst.vertices}
    for (i, j), w in phi.items():
        deg[(U, i)] += w
        deg[(V, j)] += w
    return deg


@dataclass(frozen=True)
class Verdict:
    """Outcome of :func:`verify_factor`; truthy iff the weighting is a factor."""

    ok: bool
    where: Optional[object] = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_factor(inst: Instance, phi: Mapping[Edge, int]) -> Verdict:
    """Check capacity bounds on every edge, then list membership at every vertex.

    The first violation in canonical order (edges before vertices) is reported.
    A weight on a pair that is not an edge is a structural error, not a ``False``.
    """
    for e in phi:
        if e not in inst.capacity:
            raise StructuralError(f"weighting references non-edge u {e[0]} v {e[1]}")
    for e in inst.edges:
        w = phi.get(e, 0)
        if w < 0 or w > inst.capacity[e]:
            return Verdict(False, e, f"edge u {e[0]} v {e[1]}: weight {w} outside [0, {inst.capacity[e]}]")
    deg = weighted_degrees(inst, phi)
    for x in inst.vertices:
        if deg[x] not in inst.lists[x]:
            return Verdict(
                False, x, f"vertex {fmt_vertex(x)}: degree {deg[x]} not in {{{fmt_list(inst.lists[x])}}}"
            )
    return Verdict(True)


@dataclass(frozen=True)
class Decision:
    """YES with a witness factor, or NO (``witness is None``)."""

    witness: Optional[Weighting] = None

    @property
    def yes(self) -> bool:
        return self.witness is not None

    def __bool__(self) -> bool:
        return self.yes


NO = Decision()


def normalize(inst: Instance) -> Optional[Instance]:
    """Drop ``{0}``-vertices and clamp lists to ``[0, d_rho]``; ``None`` means reject.

    Repeats until stable, since deleting a vertex lowers its neighbours'
    capacity degrees.  Deleted edges carry weight 0 in any certificate, so a
    factor of the result is a factor of ``inst`` after :func:`inflate`.
    """
    us, vs = set(inst.u_vertices), set(inst.v_vertices)
    capacity = dict(inst.capacity)
    lists = dict(inst.lists)
    while True:
        cdeg = {x: 0 for x in lists}
        for (i, j), rho in capacity.items():
            cdeg[(U, i)] += rho
            cdeg[(V, j)] += rho
        doomed = []
        for x, lst in lists.items():
            clamped = frozenset(c for c in lst if c <= cdeg[x])
            if not clamped:
                return None
            lists[x] = clamped
            if clamped == {0}:
                doomed.append(x)
        if not doomed:
            break
        for x in doomed:
            del lists[x]
            (us if x[0] == U else vs).discard(x[1])
        capacity = {e: r for e, r in capacity.items() if e[0] in us and e[1] in vs}
    return Instance._trusted(
        sorted(us), sorted(vs), capacity, lists
    )


def inflate(original: Instance, phi: Mapping[Edge, int]) -> Weighting:
    """Extend a weighting on a reduced instance to every edge of ``original``."""
    return {e: phi.get(e, 0) for e in original.edges}


def restrict(phi: Mapping[Edge, int], edges: Iterable[Edge]) -> Weighting:
    return {e: phi.get(e, 0) for e in edges}


def skeleton(inst: Instance, phi: Mapping[Edge, int]) -> list[Edge]:
    """Edges that are neither full nor empty."""
    return [e for e in inst.edges if 0 < phi.get(e, 0) < inst.capacity[e]]


def full_skeleton(inst: Instance, phi: Mapping[Edge, int]) -> list[Edge]:
    return [e for e in inst.edges if phi.get(e, 0) > 0]


def full_edges(inst: Instance, phi: Mapping[Edge, int]) -> list[Edge]:
    return [e for e in inst.edges if 0 < phi.get(e, 0) == inst.capacity[e]]


def is_forest(edges: Iterable[Edge]) -> bool:
    parent: dict[Vertex, Vertex] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        a, b = find((U, i)), find((V, j))
        if a == b:
            return False
        parent[a] = b
    return True


# ---------------------------------------------------------------- file formats


def _parse_list(token: str, lineno: int) -> frozenset[int]:
    if token == "-":
        return frozenset()
    try:
        values = [int(t) for t in token.split(",")]
    except ValueError:
        raise ParseError(lineno, f"bad degree list {token!r}") from None
    if any(c < 0 for c in values):
        raise ParseError(lineno, "negative entry in degree list")
    return frozenset(values)


def _int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(lineno, f"expected integer, got {token!r}") from None


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line.split()


def parse_instance(text: str) -> Instance:
    """Parse the ``p genfactor`` line format (see README)."""
    header = None
    lists: dict[Vertex, frozenset[int]] = {}
    capacity: dict[Edge, int] = {}
    for lineno, tok in _lines(text):
        kind = tok[0]
        if header is None:
            if kind != "p" or len(tok) != 5 or tok[1] != "genfactor":
                raise ParseError(lineno, "expected header 'p genfactor <m> <k> <nedges>'")
            header = tuple(_int(t, lineno) for t in tok[2:])
            if min(header) < 0:
                raise ParseError(lineno, "negative count in header")
            m, k, nedges = header
            continue
        if kind in (U, V):
            if len(tok) != 3:
                raise ParseError(lineno, f"expected '{kind} <index> <list>'")
            idx = _int(tok[1], lineno)
            if not 1 <= idx <= (m if kind == U else k):
                raise ParseError(lineno, f"vertex {kind} {idx} out of range")
            if (kind, idx) in lists:
                raise ParseError(lineno, f"vertex {kind} {idx} declared twice")
            lists[(kind, idx)] = _parse_list(tok[2], lineno)
        elif kind == "e":
            if len(tok) != 4:
                raise ParseError(lineno, "expected 'e <i> <j> <rho>'")
            i, j, rho = (_int(t, lineno) for t in tok[1:])
            if (U, i) not in lists or (V, j) not in lists:
                raise ParseError(lineno, f"edge u {i} v {j} references an undeclared vertex")
            if rho < 0:
                raise ParseError(lineno, "negative capacity")
            if (i, j) in capacity:
                raise ParseError(lineno, f"duplicate edge u {i} v {j}")
            capacity[(i, j)] = rho
        else:
            raise ParseError(lineno, f"unknown line type {kind!r}")
    if header is None:
        raise ParseError(0, "missing header")
    if len(lists) != m + k:
        raise ParseError(0, f"expected {m + k} vertex lines, got {len(lists)}")
    if len(capacity) != nedges:
        raise ParseError(0, f"header announces {nedges} edges, found {len(capacity)}")
    return make_instance(m, k, capacity, lists)


def serialize_instance(inst: Instance) -> str:
    if not inst.is_dense():
        raise StructuralError("serialize requires dense vertex ids; call compact() first")
    out = [f"p genfactor {len(inst.u_vertices)} {len(inst.v_vertices)} {len(inst.capacity)}"]
    out += [f"{x[0]} {x[1]} {fmt_list(inst.lists[x])}" for x in inst.vertices]
    out += [f"e {i} {j} {inst.capacity[(i, j)]}" for i, j in inst.edges]
    return "\n".join(out) + "\n"


def parse_factor(text: str) -> Weighting:
    phi: Weighting = {}
    header = None
    for lineno, tok in _lines(text):
        if header is None:
            if tok[0] != "f" or len(tok) != 3 or tok[1] != "genfactor":
                raise ParseError(lineno, "expected header 'f genfactor <nedges>'")
            header = _int(tok[2], lineno)
            continue
        if tok[0] != "w" or len(tok) != 4:
            raise ParseError(lineno, "expected 'w <i> <j> <phi>'")
        i, j, w = (_int(t, lineno) for t in tok[1:])
        if (i, j) in phi:
            raise ParseError(lineno, f"duplicate weight for u {i} v {j}")
        if w < 0:
            raise ParseError(lineno, "negative weight")
        phi[(i, j)] = w
    if header is None:
        raise ParseError(0, "missing header")
    if header != len(phi):
        raise ParseError(0, f"header announces {header} weights, found {len(phi)}")
    return phi


def serialize_factor(phi: Mapping[Edge, int]) -> str:
    """Write the nonzero weights; omitted edges mean weight 0."""
    items = sorted((e, w) for e, w in phi.items() if w)
    out = [f"f genfactor {len(items)}"] + [f"w {i} {j} {w}" for (i, j), w in items]
    return "\n".join(out) + "\n"
