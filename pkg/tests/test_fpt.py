import random
from math import comb

import pytest
from hypothesis import given, settings

from conftest import singleton_instances
from genfactor.families import exhaustive_family, random_instance
from genfactor.fpt import (
    enumerate_full_edge_sets,
    enumerate_spanning_forests,
    solve,
    solve_singleton_ones,
)
from genfactor.instance import U, V, is_forest, make_instance, verify_factor
from genfactor.oracle import solve_bruteforce
from genfactor.transforms import PreconditionError


def complete(m, k):
    return [(i, j) for i in range(1, m + 1) for j in range(1, k + 1)]


# ---------------------------------------------------------------- enumerators


def test_full_edge_sets_no_edges():
    inst = make_instance(0, 1, {}, {(V, 1): {0}})
    assert list(enumerate_full_edge_sets(inst)) == [()]


def test_full_edge_sets_pruned_by_max_list():
    inst = make_instance(2, 1, {(1, 1): 1, (2, 1): 1}, {(U, 1): {1}, (U, 2): {1}, (V, 1): {1}})
    assert list(enumerate_full_edge_sets(inst)) == [(), ((1, 1),), ((2, 1),)]


@given(singleton_instances(max_u=4, max_v=2, max_rho=2))
@settings(deadline=None)
def test_full_edge_sets_bounded_and_ordered(inst):
    xs = list(enumerate_full_edge_sets(inst))
    assert len(xs) <= 2 ** len(inst.edges)
    assert xs == sorted(xs, key=lambda X: (len(X), X))
    assert len(set(xs)) == len(xs)


def brute_maximal_forests(edges):
    """All edge subsets that are forests with as many edges as a spanning forest."""
    from itertools import combinations

    def rank(es):
        parent = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                x = parent[x]
            return x

        r = 0
        for i, j in es:
            a, b = find((U, i)), find((V, j))
            if a != b:
                parent[a] = b
                r += 1
        return r

    full = rank(edges)
    return sorted(
        c for c in combinations(edges, full) if is_forest(c)
    ) if edges else [()]


def test_forests_of_a_tree():
    tree = [(1, 1), (2, 1), (2, 2)]
    assert list(enumerate_spanning_forests(tree)) == [tuple(tree)]


def test_forests_of_four_cycle():
    cycle = [(1, 1), (1, 2), (2, 1), (2, 2)]
    forests = list(enumerate_spanning_forests(cycle))
    assert len(forests) == 4
    assert sorted(forests) == sorted(tuple(e for e in cycle if e != d) for d in cycle)


def test_forests_of_k23_matrix_tree_count():
    forests = list(enumerate_spanning_forests(complete(2, 3)))
    # spanning trees of K_{m,n}: m^(n-1) n^(m-1)
    assert len(forests) == 2 ** 2 * 3 ** 1 == 12
    assert sorted(forests) == brute_maximal_forests(complete(2, 3))


@pytest.mark.parametrize("m,k", [(1, 1), (2, 2), (3, 2), (3, 3), (4, 2)])
def test_forests_complete_bipartite(m, k):
    forests = list(enumerate_spanning_forests(complete(m, k)))
    assert len(forests) == m ** (k - 1) * k ** (m - 1)
    assert len(set(forests)) == len(forests)


def test_forests_match_brute_force_on_random_graphs():
    rng = random.Random(5)
    for _ in range(60):
        m, k = rng.randint(1, 4), rng.randint(1, 3)
        edges = [e for e in complete(m, k) if rng.random() < 0.6]
        assert sorted(enumerate_spanning_forests(edges)) == brute_maximal_forests(edges)


# ---------------------------------------------------------------- solve


def star_instance(m, kv):
    cap = {(i, 1): 1 for i in range(1, m + 1)}
    lists = {(U, i): {1} for i in range(1, m + 1)}
    lists[(V, 1)] = set(kv)
    return make_instance(m, 1, cap, lists)


def test_solve_three_on_one():
    dec, stats = solve(star_instance(3, {0, 3}))
    assert dec.witness == {(1, 1): 1, (2, 1): 1, (3, 1): 1}
    assert stats.outcome == "YES" and not stats.bound_violations()


def test_solve_two_on_one_is_no():
    dec, stats = solve(star_instance(2, {0, 3}))
    assert not dec and stats.outcome == "NO"


def test_solve_needs_singletons():
    inst = make_instance(1, 1, {(1, 1): 1}, {(U, 1): {0, 1}, (V, 1): {1}})
    with pytest.raises(PreconditionError):
        solve(inst)


def test_solve_matches_oracle_on_small_family():
    for inst in exhaustive_family(max_u=2, max_v=2):
        dec, stats = solve(inst)
        assert dec.yes == solve_bruteforce(inst).yes
        if dec:
            assert verify_factor(inst, dec.witness)
        assert not stats.bound_violations()


def test_solve_weighted_random():
    rng = random.Random(11)
    for _ in range(200):
        inst = random_instance(rng)
        dec, stats = solve(inst)
        assert dec.yes == solve_bruteforce(inst).yes
        if dec:
            assert verify_factor(inst, dec.witness)
        assert stats.x_subsets_explored <= 2 ** stats.contracted_edge_count


def test_count_all_explores_at_least_as_much():
    inst = star_instance(3, {0, 3})
    _, first = solve(inst)
    _, every = solve(inst, count_all=True)
    assert every.x_subsets_explored >= first.x_subsets_explored
    assert every.x_subsets_explored <= 2 ** every.contracted_edge_count


def test_parallel_same_decision_and_witness():
    rng = random.Random(3)
    for _ in range(8):
        inst = random_instance(rng, max_u=5, max_v=3)
        seq, _ = solve(inst)
        par, _ = solve(inst, workers=2, deterministic=True)
        assert par.yes == seq.yes
        assert par.witness == seq.witness


# ---------------------------------------------------------------- fast path


def test_fast_path_empty_U():
    inst = make_instance(0, 2, {}, {(V, 1): {0, 1}, (V, 2): {0}})
    assert solve_singleton_ones(inst)[0]
    inst = make_instance(0, 1, {}, {(V, 1): {1}})
    assert not solve_singleton_ones(inst)[0]


def test_fast_path_rejects_other_lists():
    with pytest.raises(PreconditionError):
        solve_singleton_ones(make_instance(1, 1, {(1, 1): 1}, {(U, 1): {2}, (V, 1): {2}}))


def test_fast_path_sample_model():
    from conftest import SAMPLE_CARDS, SAMPLE_DOMAINS
    from genfactor.egcc import build_value_graph, model

    inst = build_value_graph(model(SAMPLE_DOMAINS, SAMPLE_CARDS)).instance
    dec, stats = solve_singleton_ones(inst)
    assert dec and solve_bruteforce(inst)
    assert verify_factor(inst, dec.witness)
    assert stats.x_subsets_explored == 1


@given(singleton_instances(max_u=6, max_v=3, ones=True))
@settings(max_examples=150, deadline=None)
def test_fast_path_agrees_with_general(inst):
    fast, fs = solve_singleton_ones(inst)
    slow, _ = solve(inst)
    assert fast.yes == slow.yes
    assert fs.x_subsets_explored == 1
    if fast:
        assert verify_factor(inst, fast.witness)


def test_module_bound_on_unit_inputs():
    rng = random.Random(9)
    for _ in range(100):
        inst = random_instance(rng, max_u=12, max_v=3, ones=True)
        _, stats = solve_singleton_ones(inst)
        assert stats.modules_found <= stats.k * (2**stats.k - 1)
        # a module is a (list value, nonempty neighbourhood) class
        assert stats.modules_found <= comb(stats.k, 1) * (2**stats.k - 1)
