"""Selection gadgets and the PARTITIONED CLIQUE reduction built from them.

Vertex numbering is deterministic.  A selection gadget ``G_{A,r}`` has
U = 1..M and V = 1..r+1 with the hub first.  A double selection gadget
lays out V as: lower hub, lower outputs, upper hub, upper outputs, shared
vertex ``q``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import comb
from typing import Iterable, Optional, Sequence

from .instance import U, V, Instance, ParseError, StructuralError, Vertex, make_instance


class GadgetError(ValueError):
    pass


class _Builder:
    """Accumulates a unit-capacity bipartite instance with fresh vertex ids."""

    def __init__(self):
        self.m = 0
        self.k = 0
        self.cap: dict[tuple[int, int], int] = {}
        self.lists: dict[Vertex, frozenset[int]] = {}

    def new_u(self, lst) -> int:
        self.m += 1
        self.lists[(U, self.m)] = frozenset(lst)
        return self.m

    def new_v(self, lst) -> int:
        self.k += 1
        self.lists[(V, self.k)] = frozenset(lst)
        return self.k

    def biclique(self, us: Iterable[int], vs: Iterable[int]) -> None:
        for i in us:
            for j in vs:
                self.cap[(i, j)] = 1

    def build(self) -> Instance:
        return make_instance(self.m, self.k, self.cap, self.lists)


@dataclass(frozen=True)
class SelectionGadget:
    instance: Instance
    A: frozenset[int]
    r: int
    hub: int
    outputs: tuple[int, ...]
    u_vertices: tuple[int, ...]

    @property
    def M(self) -> int:
        return max(self.A)


def _check_A(A) -> frozenset[int]:
    A = frozenset(A)
    if not A:
        raise GadgetError("A must be nonempty")
    if any(a < 0 for a in A):
        raise GadgetError("A must contain non-negative integers")
    return A


def _add_selection(b: _Builder, A: frozenset[int], r: int):
    M = max(A)
    us = [b.new_u({0, r + 1}) for _ in range(M)]
    hub = b.new_v(A)
    outs = [b.new_v(range(M + 1)) for _ in range(r)]
    b.biclique(us, [hub] + outs)
    return us, hub, outs


def selection_gadget(A: Iterable[int], r: int) -> SelectionGadget:
    """``G_{A,r}``: ``max(A)`` U-vertices, each either unused or joined to all r+1 V-vertices.

    ``r = 0`` is accepted for internal use (a gadget with only its hub).
    """
    A = _check_A(A)
    if r < 0:
        raise GadgetError("r must be non-negative")
    b = _Builder()
    us, hub, outs = _add_selection(b, A, r)
    return SelectionGadget(b.build(), A, r, hub, tuple(outs), tuple(us))


@dataclass(frozen=True)
class DoubleSelectionGadget:
    instance: Instance
    A: frozenset[int]
    r: int
    r_prime: int
    lower: tuple[int, ...]
    upper: tuple[int, ...]
    q: int

    @property
    def N(self) -> int:
        return max(self.A) + 1


def _add_double(b: _Builder, A: frozenset[int], r: int, r_prime: int):
    N = max(A) + 1
    A_up = frozenset(N * a for a in A)
    # The highest-indexed output of each half becomes q; build each half's
    # other outputs first and allocate q once at the end.
    M, M_up = max(A), max(A_up)
    lo_us = [b.new_u({0, r + 2}) for _ in range(M)]
    lo_hub = b.new_v(A)
    lower = [b.new_v(range(M + 1)) for _ in range(r)]
    up_us = [b.new_u({0, r_prime + 2}) for _ in range(M_up)]
    up_hub = b.new_v(A_up)
    upper = [b.new_v(range(M_up + 1)) for _ in range(r_prime)]
    q = b.new_v({a + N * a for a in A})
    b.biclique(lo_us, [lo_hub] + lower + [q])
    b.biclique(up_us, [up_hub] + upper + [q])
    return lower, upper, q


def double_selection_gadget(A: Iterable[int], r: int, r_prime: int) -> DoubleSelectionGadget:
    A = _check_A(A)
    if max(A) == 0:
        raise GadgetError("double selection gadget needs max(A) >= 1")
    if r < 0 or r_prime < 0:
        raise GadgetError("r and r' must be non-negative")
    b = _Builder()
    lower, upper, q = _add_double(b, A, r, r_prime)
    return DoubleSelectionGadget(b.build(), A, r, r_prime, tuple(lower), tuple(upper), q)


# ---------------------------------------------------------------- partitioned clique


@dataclass(frozen=True)
class PartitionedGraph:
    """k parts of n vertices; ``edges`` holds ``((i, a), (j, b))`` with ``i < j``."""

    k: int
    n: int
    edges: frozenset[tuple[tuple[int, int], tuple[int, int]]]

    def __post_init__(self):
        for (i, a), (j, b) in self.edges:
            if i == j:
                raise GadgetError(f"edge inside part {i}")
            if not (i < j and 1 <= i <= self.k and 1 <= j <= self.k):
                raise GadgetError(f"bad part indices {i}, {j}")
            if not (1 <= a <= self.n and 1 <= b <= self.n):
                raise GadgetError(f"vertex index out of range in edge {(i, a)}-{(j, b)}")

    def adjacent(self, x: tuple[int, int], y: tuple[int, int]) -> bool:
        if x[0] > y[0]:
            x, y = y, x
        return (x, y) in self.edges


def partitioned_graph(k: int, n: int, edges) -> PartitionedGraph:
    norm = set()
    for x, y in edges:
        if x[0] > y[0]:
            x, y = y, x
        norm.add((tuple(x), tuple(y)))
    return PartitionedGraph(k, n, frozenset(norm))


def random_partitioned_graph(rng: random.Random, k: int, n: int, p: float = 0.5) -> PartitionedGraph:
    edges = [
        ((i, a), (j, b))
        for i, j in itertools.combinations(range(1, k + 1), 2)
        for a in range(1, n + 1)
        for b in range(1, n + 1)
        if rng.random() < p
    ]
    return partitioned_graph(k, n, edges)


@dataclass(frozen=True)
class CliqueReduction:
    instance: Instance
    N: int
    shared: dict[tuple[int, int], int]  # (i, j) -> V id of h_{i,j}

    @property
    def u_count(self) -> int:
        return len(self.instance.u_vertices)


def reduce_clique(G: PartitionedGraph) -> CliqueReduction:
    """Build H: one double gadget per part, upper slot j of H_i glued to lower slot i of H_j.

    ``h_{i,j}`` must end with degree ``N*alpha + beta`` for an edge
    ``v^i_alpha v^j_beta`` of G.
    """
    k, n = G.k, G.n
    if n < 1 or k < 2:
        raise GadgetError("need n >= 1 and k >= 2")
    A = frozenset(range(1, n + 1))
    N = n + 1
    b = _Builder()
    lower: dict[int, list[int]] = {}
    upper: dict[int, list[int]] = {}
    for i in range(1, k + 1):
        lower[i], upper[i], _ = _add_double(b, A, i - 1, k - i)
    # merge each identified pair into the upper-side vertex, then renumber V
    merged: dict[int, int] = {}
    shared = {}
    for i, j in itertools.combinations(range(1, k + 1), 2):
        up = upper[i][j - i - 1]  # slots j = i+1..k
        low = lower[j][i - 1]  # slots i = 1..j-1
        merged[low] = up
        shared[(i, j)] = up
        b.lists[(V, up)] = frozenset(
            N * a + c for a in A for c in A if G.adjacent((i, a), (j, c))
        )
    keep = [j for j in range(1, b.k + 1) if j not in merged]
    renum = {old: new for new, old in enumerate(keep, 1)}
    cap = {(i, renum[merged.get(j, j)]): r for (i, j), r in b.cap.items()}
    lists = {(U, i): b.lists[(U, i)] for i in range(1, b.m + 1)}
    lists.update({(V, renum[j]): b.lists[(V, j)] for j in keep})
    inst = make_instance(b.m, len(keep), cap, lists)
    return CliqueReduction(inst, N, {ij: renum[v] for ij, v in shared.items()})


def expected_v_count(k: int) -> int:
    return comb(k, 2) + 3 * k


def constructed_u_count(k: int, n: int) -> int:
    """Lower halves contribute n U-vertices, upper halves n(n+1), per part."""
    return k * n * (n + 2)


def stated_u_count(k: int, n: int) -> int:
    return k * 2 * n * (n + 2)


def find_clique_bruteforce(G: PartitionedGraph) -> Optional[tuple[int, ...]]:
    """First transversal ``(a_1, ..., a_k)`` (lexicographic) that is a clique."""
    for choice in itertools.product(range(1, G.n + 1), repeat=G.k):
        if all(
            G.adjacent((i + 1, choice[i]), (j + 1, choice[j]))
            for i, j in itertools.combinations(range(G.k), 2)
        ):
            return choice
    return None


def _ints(tokens, lineno) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(lineno, "expected integers") from None


def parse_pclique(text: str) -> PartitionedGraph:
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if not tok or tok[0].startswith("#"):
            continue
        if header is None:
            if tok[0] != "p" or len(tok) != 5 or tok[1] != "pclique":
                raise ParseError(lineno, "expected header 'p pclique <k> <n> <m>'")
            header = _ints(tok[2:], lineno)
            continue
        nums = _ints(tok[1:], lineno)
        if tok[0] != "e" or len(nums) != 4:
            raise ParseError(lineno, "expected 'e <i> <a> <j> <b>'")
        i, a, j, c = nums
        if i >= j:
            raise ParseError(lineno, "edge lines need i < j")
        edges.append(((i, a), (j, c)))
    if header is None:
        raise ParseError(0, "missing header")
    k, n, m = header
    if len(edges) != m or len(set(edges)) != m:
        raise ParseError(0, f"header announces {m} distinct edges, found {len(set(edges))}")
    try:
        return partitioned_graph(k, n, edges)
    except GadgetError as exc:
        raise StructuralError(str(exc)) from None


def serialize_pclique(G: PartitionedGraph) -> str:
    out = [f"p pclique {G.k} {G.n} {len(G.edges)}"]
    out += [f"e {i} {a} {j} {b}" for (i, a), (j, b) in sorted(G.edges)]
    return "\n".join(out) + "\n"


def output_degrees(phi, outputs: Sequence[int]) -> list[int]:
    deg = {j: 0 for j in outputs}
    for (_, j), w in phi.items():
        if j in deg:
            deg[j] += w
    return [deg[j] for j in outputs]
