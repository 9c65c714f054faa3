from fractions import Fraction

import pytest

from efkx.errors import InputError
from efkx.fairness import (check_g3pa_properties, critical_goods,
                           min_pair_threshold, modified_envy_graph, sources,
                           verify_alpha_efkx)
from efkx.generate import gen_random
from efkx.model import Allocation, Instance
from efkx.solver import (SolveTrace, allocate_and_eliminate_critical,
                         approximate_efkx, g3pa, k_round_robin_ece,
                         seed_allocation)


def test_seed_allocation_gives_good_i_to_agent_i():
    inst = gen_random(3, 7, 10, seed=1)
    seed = seed_allocation(inst)
    assert seed.bundles == (frozenset({0}), frozenset({1}), frozenset({2}))
    assert seed.pool == frozenset({3, 4, 5, 6})


def test_seed_allocation_with_scarce_goods():
    inst = gen_random(4, 2, 10, seed=1)
    seed = seed_allocation(inst)
    assert seed.bundles[2] == frozenset() and seed.bundles[3] == frozenset()


def test_g3pa_hand_traced_two_agents():
    # agent 0 loves good 0; agent 1 loves good 1.  After the phased loop
    # agent 0 (a modified-graph source) absorbs the pool.
    inst = Instance.from_rows([[10, 1, 1, 1], [1, 10, 1, 1]])
    alloc, _ = g3pa(inst, 2)
    assert alloc.bundles == (frozenset({0, 2, 3}), frozenset({1}))
    assert alloc.is_full()


def test_g3pa_partial_exit_properties_and_source_sizes():
    # with m > n(k+1) the pool cannot empty, so every run exits partial
    hits = 0
    for seed in range(40):
        inst = gen_random(4, 20, 100, seed=seed)
        alloc, _ = g3pa(inst, 2)
        if not alloc.pool:
            continue
        hits += 1
        report = check_g3pa_properties(inst, alloc, 2)
        assert report.overall, (seed, report.property_verdicts)
        graph = modified_envy_graph(inst, alloc, Fraction(3, 4))
        for s in sources(graph):
            assert len(alloc.bundles[s]) == 3
    assert hits > 0  # the sweep must actually exercise partial exits


def test_g3pa_trace_no_repetition_and_iteration_bound():
    for seed in (0, 3, 11):
        inst = gen_random(4, 10, 50, seed=seed)
        trace = SolveTrace(k=2)
        g3pa(inst, 2, trace=trace)
        assert not trace.bundles_repeat()
        assert trace.iterations <= inst.n * inst.m ** 3 + 1


def test_g3pa_proxy_values_monotone():
    inst = gen_random(4, 12, 60, seed=5)
    trace = SolveTrace(k=2)
    g3pa(inst, 2, trace=trace)
    assert trace.proxy_monotone(inst, Fraction(3, 4))


def test_g3pa_rejects_k_below_one():
    inst = gen_random(2, 4, 5, seed=0)
    with pytest.raises(InputError):
        g3pa(inst, 0)


def test_critical_elimination_clears_strict_criticals():
    for seed in range(30):
        inst = gen_random(4, 12, 100, seed=seed)
        part, _ = g3pa(inst, 2)
        done = allocate_and_eliminate_critical(inst, part, 2)
        beta = Fraction(1, 3)
        for i in range(inst.n):
            assert critical_goods(inst, done, i, beta, strict=True) == frozenset()


def test_approximate_efkx_meets_guarantee():
    for k in (2, 3):
        for seed in range(25):
            inst = gen_random(4, 11, 100, seed=seed)
            alloc, trace = approximate_efkx(inst, k)
            assert alloc.is_full()
            report = verify_alpha_efkx(inst, alloc, Fraction(k + 1, k + 2), k)
            assert report.overall, (k, seed, report.witness)
            assert "final" in trace.snapshots


def test_approximate_efkx_rejects_k_one():
    inst = gen_random(2, 4, 5, seed=0)
    with pytest.raises(InputError):
        approximate_efkx(inst, 1)


def test_round_robin_deterministic_and_guaranteed():
    inst = gen_random(6, 18, 100, seed=9)
    a1, _ = k_round_robin_ece(inst, 2)
    a2, _ = k_round_robin_ece(inst, 2)
    assert a1 == a2
    assert a1.is_full()
    assert min_pair_threshold(inst, a1, 2) >= Fraction(2, 3)


def test_round_robin_first_round_takes_favorites():
    inst = Instance.from_rows([[9, 1, 1, 1], [1, 9, 1, 1]])
    alloc, _ = k_round_robin_ece(inst, 1)
    assert 0 in alloc.bundles[0] and 1 in alloc.bundles[1]


def test_round_robin_guarantee_sweep():
    for k in (1, 2, 3):
        for seed in range(20):
            inst = gen_random(5, 12, 100, seed=seed)
            alloc, _ = k_round_robin_ece(inst, k)
            assert min_pair_threshold(inst, alloc, k) >= Fraction(k, k + 1), \
                (k, seed)


def test_allocation_never_uses_float_arithmetic():
    inst = gen_random(3, 9, 100, seed=2)
    alloc, _ = approximate_efkx(inst, 2)
    t = min_pair_threshold(inst, alloc, 2)
    assert isinstance(t, Fraction) or t == float("inf")
