from fractions import Fraction

import pytest

from efkx.fairness import envy_graph, min_pair_threshold, sources, value_of
from efkx.graph_ops import (MODIFIED, PLAIN, all_cycles_resolution,
                            cycle_resolution, envy_cycle_elimination,
                            find_cycle, path_resolution, path_resolution_star)
from efkx.model import Allocation, Instance


def two_cycle():
    # agents 0 and 1 each strictly prefer the other's good
    inst = Instance.from_rows([[1, 5], [5, 1]])
    alloc = Allocation.make([{0}, {1}], 2)
    return inst, alloc


def test_find_cycle_returns_lowest_rooted_cycle():
    inst, alloc = two_cycle()
    g = envy_graph(inst, alloc)
    assert find_cycle(g) == [0, 1]


def test_find_cycle_none_on_acyclic():
    inst = Instance.from_rows([[1, 5], [1, 5]])
    alloc = Allocation.make([{0}, {1}], 2)
    assert find_cycle(envy_graph(inst, alloc)) is None


def test_cycle_resolution_swaps_bundles():
    inst, alloc = two_cycle()
    resolved = cycle_resolution(alloc, envy_graph(inst, alloc), [0, 1])
    assert resolved.bundles[0] == frozenset({1})
    assert resolved.bundles[1] == frozenset({0})


def test_cycle_resolution_weakly_improves_everyone():
    inst, alloc = two_cycle()
    resolved = cycle_resolution(alloc, envy_graph(inst, alloc), [0, 1])
    for i in range(inst.n):
        assert value_of(inst, i, resolved.bundles[i]) >= \
            value_of(inst, i, alloc.bundles[i])


def test_all_cycles_resolution_leaves_acyclic_graph():
    inst = Instance.from_rows([[1, 5, 2], [5, 1, 2], [2, 2, 9]])
    alloc = Allocation.make([{0}, {1}, {2}], 3)
    resolved = all_cycles_resolution(inst, alloc, PLAIN)
    assert find_cycle(envy_graph(inst, resolved)) is None
    assert sources(envy_graph(inst, resolved))


def test_all_cycles_resolution_modified_variant_needs_alpha():
    inst, alloc = two_cycle()
    with pytest.raises(Exception):
        all_cycles_resolution(inst, alloc, MODIFIED)
    resolved = all_cycles_resolution(inst, alloc, MODIFIED, alpha=Fraction(2, 3))
    assert resolved.bundles[0] == frozenset({1})


def test_path_resolution_shifts_bundles_down_the_path():
    # 0 envies 1, 1 envies 2; path [2] <- ... resolution moves bundles toward
    # the tail and frees the head's bundle
    inst = Instance.from_rows([[1, 5, 9], [1, 5, 9], [1, 5, 9]])
    alloc = Allocation.make([{0}, {1}, {2}], 3)
    g = envy_graph(inst, alloc)
    updates, freed = path_resolution(alloc, g, [0, 1, 2])
    assert freed == frozenset({0})
    assert updates[0] == frozenset({1})
    assert updates[1] == frozenset({2})
    assert 2 not in updates


def test_path_resolution_star_head_retakes_and_frees_leftovers():
    # the source itself (a one-node path) swaps its 2-good bundle for Y,
    # returning the leftovers to the pool
    inst = Instance.from_rows([[5, 5, 1, 1], [1, 6, 1, 6]])
    alloc = Allocation.make([{0, 1}, {2}], 4)
    y = frozenset({1, 3})
    g = envy_graph(inst, alloc)
    result = path_resolution_star(inst, alloc, g, [0], y, 1)
    assert result.bundles[0] == y
    assert result.bundles[1] == frozenset({2})
    assert result.pool == frozenset({0})


def test_envy_cycle_elimination_completes_and_holds_guarantee():
    inst = Instance.from_rows([[9, 1, 4, 4], [1, 9, 4, 4]])
    alloc = Allocation.make([{0}, {1}], 4)
    done = envy_cycle_elimination(inst, alloc)
    assert done.is_full()
    # starting from an exact-EFX partial, the finish preserves EFX here
    assert min_pair_threshold(inst, done, 1) >= 1


def test_envy_cycle_elimination_from_empty():
    inst = Instance.from_rows([[3, 2, 1], [1, 2, 3]])
    done = envy_cycle_elimination(inst, Allocation.empty(2, 3))
    assert done.is_full()
