"""Extended global cardinality constraints via their value graph.

A model has variables with finite domains and, per value, a set of allowed
usage counts.  It is consistent iff its value graph (variables on the U
side with list ``{1}``, values on the V side) has a general factor, which
the fast-path solver decides.

Model files are JSON objects with two members::

    {"variables": {"x": ["a", "b"], "y": ["b"]},
     "cards":     {"a": [0, 1], "b": [1, 2]}}

Key order is irrelevant; duplicate keys anywhere are rejected.  Values with
no ``cards`` entry may be used any number of times.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Optional

from .fpt import SolveStats, solve_singleton_ones
from .instance import U, V, Instance, Weighting, make_instance
from .transforms import PreconditionError


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class EgccModel:
    variables: Mapping[str, frozenset[str]]
    cards: Mapping[str, frozenset[int]]

    def __post_init__(self):
        for x, dom in self.variables.items():
            if not dom:
                raise ModelError(f"variable {x!r} has an empty domain")
        clash = set(self.variables) & set(self.values)
        if clash:
            raise ModelError(f"names used both as variable and value: {sorted(clash)}")
        for d, lst in self.cards.items():
            if any(c < 0 for c in lst):
                raise ModelError(f"negative cardinality for value {d!r}")

    @property
    def values(self) -> list[str]:
        """Every value in some domain or with a cardinality list, sorted."""
        vals = set(self.cards)
        for dom in self.variables.values():
            vals |= dom
        return sorted(vals)

    def cardinality(self, d: str) -> frozenset[int]:
        if d in self.cards:
            return self.cards[d]
        return frozenset(range(len(self.variables) + 1))


def model(variables: Mapping[str, object], cards: Mapping[str, object] = ()) -> EgccModel:
    return EgccModel(
        {x: frozenset(dom) for x, dom in variables.items()},
        {d: frozenset(lst) for d, lst in dict(cards).items()},
    )


@dataclass(frozen=True)
class ValueGraph:
    instance: Instance
    variables: tuple[str, ...]  # variables[i - 1] is U-vertex i
    values: tuple[str, ...]  # values[j - 1] is V-vertex j


def build_value_graph(m: EgccModel) -> ValueGraph:
    xs = tuple(sorted(m.variables))
    ds = tuple(m.values)
    vid = {d: j for j, d in enumerate(ds, 1)}
    cap = {(i, vid[d]): 1 for i, x in enumerate(xs, 1) for d in m.variables[x]}
    lists = {(U, i): {1} for i in range(1, len(xs) + 1)}
    lists.update({(V, vid[d]): m.cardinality(d) for d in ds})
    return ValueGraph(make_instance(len(xs), len(ds), cap, lists), xs, ds)


def factor_to_assignment(vg: ValueGraph, phi: Mapping[tuple[int, int], int]) -> dict[str, str]:
    chosen: dict[int, list[int]] = {i: [] for i in range(1, len(vg.variables) + 1)}
    for (i, j), w in phi.items():
        chosen[i].extend([j] * w)
    alpha = {}
    for i, js in chosen.items():
        if len(js) != 1:
            raise PreconditionError(
                f"variable {vg.variables[i - 1]!r} has weighted degree {len(js)}, expected 1"
            )
        alpha[vg.variables[i - 1]] = vg.values[js[0] - 1]
    return alpha


def assignment_to_factor(vg: ValueGraph, alpha: Mapping[str, str]) -> Weighting:
    vid = {d: j for j, d in enumerate(vg.values, 1)}
    phi = {e: 0 for e in vg.instance.edges}
    for i, x in enumerate(vg.variables, 1):
        phi[(i, vid[alpha[x]])] = 1
    return phi


def is_satisfying(m: EgccModel, alpha: Mapping[str, str]) -> bool:
    if set(alpha) != set(m.variables):
        return False
    if any(alpha[x] not in m.variables[x] for x in m.variables):
        return False
    counts = {d: 0 for d in m.values}
    for d in alpha.values():
        counts[d] += 1
    return all(counts[d] in m.cardinality(d) for d in m.values)


def check_consistency(m: EgccModel) -> tuple[Optional[dict[str, str]], SolveStats]:
    """A satisfying assignment, or ``None`` when the constraint is inconsistent."""
    vg = build_value_graph(m)
    dec, stats = solve_singleton_ones(vg.instance)
    if not dec:
        return None, stats
    return factor_to_assignment(vg, dec.witness), stats


def _no_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise ModelError(f"duplicate key {key!r}")
        out[key] = value
    return out


def parse_model(text: str) -> EgccModel:
    try:
        doc = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise ModelError(f"invalid model file: {exc}") from None
    if not isinstance(doc, dict) or set(doc) - {"variables", "cards"} or "variables" not in doc:
        raise ModelError('model must be an object with "variables" and optional "cards"')
    variables, cards = doc["variables"], doc.get("cards", {})
    if not isinstance(variables, dict) or not isinstance(cards, dict):
        raise ModelError('"variables" and "cards" must be objects')
    for x, dom in variables.items():
        if not isinstance(dom, list) or not all(isinstance(d, str) for d in dom):
            raise ModelError(f"domain of {x!r} must be a list of value names")
        if len(set(dom)) != len(dom):
            raise ModelError(f"domain of {x!r} repeats a value")
    for d, lst in cards.items():
        if not isinstance(lst, list) or not all(isinstance(c, int) and c >= 0 for c in lst):
            raise ModelError(f"cards of {d!r} must be a list of non-negative integers")
    return model(variables, cards)


def serialize_model(m: EgccModel) -> str:
    doc = {
        "variables": {x: sorted(m.variables[x]) for x in sorted(m.variables)},
        "cards": {d: sorted(m.cards[d]) for d in sorted(m.cards)},
    }
    return json.dumps(doc, indent=2) + "\n"
