"""The k = 1 pipeline: a 2/3-EFX allocation for up to eight agents.

The pipeline extends the generic greedy phased allocation with one extra
path step, then places critical pool goods in two stages — contested
goods (wanted badly by two or more agents) via a five-case dispatch, and
uncontested ones via source augmentation — and finally hands out the rest
through envy cycle elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from .fairness import (
    bundle_threshold,
    check_g3pa_properties,
    contested_criticals,
    critical_goods,
    envy_graph,
    modified_envy_graph,
    sources,
)
from .graph_ops import all_cycles_resolution, envy_cycle_elimination, find_cycle, path_resolution
from .model import Allocation, Instance, top_subset, value_of
from .solver import SolveTrace, _bfs_path, g3pa

ALPHA = Fraction(2, 3)
BETA = Fraction(1, 2)  # criticality threshold at k = 1


@dataclass
class ContestedState:
    """Snapshot of the quantities driving the contested-good dispatch."""
    source_agents: tuple[int, ...]
    contested: tuple[int, ...]
    s: int | None = None
    j: int | None = None

    @property
    def n_s(self) -> int:
        return len(self.source_agents)

    @property
    def m_c(self) -> int:
        return len(self.contested)


def contested_state(inst: Instance, alloc: Allocation) -> ContestedState:
    graph = modified_envy_graph(inst, alloc, ALPHA)
    srcs = tuple(sources(graph))
    crit = tuple(sorted(contested_criticals(inst, alloc, BETA, strict=True)))
    state = ContestedState(srcs, crit)
    if len(srcs) == 1:
        state.s = srcs[0]
        twos = [i for i in range(inst.n)
                if i != state.s and len(alloc.bundles[i]) == 2]
        if twos:
            state.j = twos[0]
    return state


def g3pa_plus(inst: Instance, alloc: Allocation | None = None,
              trace: SolveTrace | None = None) -> tuple[Allocation, SolveTrace]:
    """Greedy phased allocation at k = 1 with the extra path step.

    The extra step lets a 2-good agent reachable from a source retake the
    two best goods of the source's bundle plus the pool.  At a partial
    exit the three pool-value inequalities of ``exit_inequalities`` hold.
    """
    return g3pa(inst, 1, alloc=alloc, trace=trace, plus=True)


def exit_inequalities(inst: Instance, alloc: Allocation) -> dict[str, bool]:
    """The three pool-value bounds guaranteed at a partial exit.

    (1) a singleton agent values any two pool goods at most 2/3 of her own
    bundle; (2) an agent with a critical pool good values any three pool
    goods strictly below 5/6 of her own; (3) a 2-good agent reachable from
    a modified-graph source s values any two goods of X_s plus the pool at
    most her own bundle.  Vacuous clauses count as satisfied.
    """
    ok1 = ok2 = ok3 = True
    for i in range(inst.n):
        own = value_of(inst, i, alloc.bundles[i])
        if len(alloc.bundles[i]) == 1 and len(alloc.pool) >= 2:
            pair = value_of(inst, i, top_subset(inst, i, alloc.pool, 2))
            ok1 = ok1 and pair <= ALPHA * own
        if critical_goods(inst, alloc, i, BETA, strict=True) and len(alloc.pool) >= 3:
            triple = value_of(inst, i, top_subset(inst, i, alloc.pool, 3))
            ok2 = ok2 and triple < Fraction(5, 6) * own
    graph = modified_envy_graph(inst, alloc, ALPHA)
    for s in sources(graph):
        reach = _reachable(graph, s)
        for i in reach:
            if i == s or len(alloc.bundles[i]) != 2:
                continue
            cand = alloc.bundles[s] | alloc.pool
            if len(cand) >= 2:
                own = value_of(inst, i, alloc.bundles[i])
                pair = value_of(inst, i, top_subset(inst, i, cand, 2))
                ok3 = ok3 and pair <= own
    return {"1": ok1, "2": ok2, "3": ok3}


def _reachable(graph, start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        node = stack.pop()
        for nxt in graph.successors(node):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def _pairs(goods: tuple[int, ...]) -> list[frozenset[int]]:
    from itertools import combinations
    return [frozenset(p) for p in combinations(sorted(goods), 2)]


def _is_efx_toward(inst: Instance, i: int, own: frozenset[int],
                   other: frozenset[int]) -> bool:
    return bundle_threshold(inst, i, own, other, 1) >= ALPHA


def _give(alloc: Allocation, agent: int, goods: frozenset[int]) -> Allocation:
    return alloc.replace({agent: alloc.bundles[agent] | goods}, pool=alloc.pool - goods)


def _record(trace: SolveTrace | None, step: str, before: Allocation, after: Allocation,
            agents: tuple[int, ...] = (), goods: tuple[int, ...] = ()) -> None:
    if trace is not None:
        trace.record(step, before, after, agents, goods)


def contested_critical(inst: Instance, alloc: Allocation,
                       trace: SolveTrace | None = None) -> Allocation:
    """Place every contested critical pool good, keeping 2/3-EFX.

    Dispatches on the number of modified-graph sources (n_s) and contested
    goods (m_c <= 3): one-per-source when sources suffice, otherwise
    source-loading variants, delegating the hardest shape (one source,
    three goods, a 2-good non-source) to ``last_allocate_contested``.
    """
    if inst.n > 8:
        raise InputError("the contested-good dispatch is designed for n <= 8")
    state = contested_state(inst, alloc)
    if state.m_c == 0:
        raise InputError("no contested critical good to place")
    assert state.n_s >= 1 and state.m_c <= 3

    if state.n_s >= state.m_c:
        # Case 1: one contested good per source, both taken in ascending order.
        before = alloc
        for s_t, g_t in zip(state.source_agents, state.contested):
            alloc = _give(alloc, s_t, frozenset({g_t}))
        _record(trace, "contested.case1", before, alloc,
                state.source_agents[:state.m_c], state.contested)
        return alloc

    if state.n_s == 1 and state.m_c == 2:
        # Case 2: both contested goods go to the sole source.
        before = alloc
        alloc = _give(alloc, state.s, frozenset(state.contested))
        _record(trace, "contested.case2", before, alloc, (state.s,), state.contested)
        return alloc

    if state.n_s == 2 and state.m_c == 3:
        # Case 3: one good to each source, resolve plain cycles, and the
        # last good to a source of the plain envy graph.
        before = alloc
        s1, s2 = state.source_agents
        g1, g2, g3 = state.contested
        alloc = _give(alloc, s1, frozenset({g1}))
        alloc = _give(alloc, s2, frozenset({g2}))
        alloc = all_cycles_resolution(inst, alloc)
        sp = sources(envy_graph(inst, alloc))[0]
        alloc = _give(alloc, sp, frozenset({g3}))
        _record(trace, "contested.case3", before, alloc, (s1, s2, sp), state.contested)
        return alloc

    non_source_sizes = [len(alloc.bundles[i]) for i in range(inst.n)
                        if i != state.s]
    if state.n_s == 1 and state.m_c == 3 and all(sz == 1 for sz in non_source_sizes):
        # Case 4: two goods to the source, resolve plain cycles, last good
        # to a plain-graph source.
        before = alloc
        g1, g2, g3 = state.contested
        alloc = _give(alloc, state.s, frozenset({g1, g2}))
        alloc = all_cycles_resolution(inst, alloc)
        sp = sources(envy_graph(inst, alloc))[0]
        alloc = _give(alloc, sp, frozenset({g3}))
        _record(trace, "contested.case4", before, alloc, (state.s, sp), state.contested)
        return alloc

    # Case 5: one source, three contested goods and a 2-good non-source.
    return last_allocate_contested(inst, alloc, trace=trace)


def last_allocate_contested(inst: Instance, alloc: Allocation,
                            trace: SolveTrace | None = None) -> Allocation:
    """The hardest contested shape: one source, three goods, 2-good agent j.

    Five sub-cases tried in order; the first whose guard holds fires.
    """
    state = contested_state(inst, alloc)
    if state.n_s != 1 or state.m_c != 3 or state.j is None:
        raise InputError("expects one source, three contested goods and a 2-good non-source")
    s, j = state.s, state.j
    M_c = frozenset(state.contested)
    X_j = alloc.bundles[j]

    # Case 5.1: some pair Y given to s lets cycle resolution expose a plain
    # source with 1 or 4 goods, which then takes the remaining good.
    for Y in _pairs(state.contested):
        scratch = _give(alloc, s, Y)
        scratch = all_cycles_resolution(inst, scratch)
        cands = [t for t in sources(envy_graph(inst, scratch))
                 if len(scratch.bundles[t]) in (1, 4)]
        if cands:
            g_rest = frozenset(M_c - Y)
            after = _give(scratch, cands[0], g_rest)
            _record(trace, "contested.case5.1", alloc, after,
                    (s, cands[0]), tuple(sorted(M_c)))
            return after

    # Case 5.2: some agent finds one contested good g critical yet stays
    # 2/3-EFX toward X_j plus g.  The other two goods go to s, cycles are
    # resolved, g goes to the 2-good plain source; if somebody still fails
    # 2/3-EFX toward that bundle, she takes it via a path swap.
    for a in range(inst.n):
        crits = sorted(critical_goods(inst, alloc, a, BETA, strict=True) & M_c)
        hit = next((g for g in crits
                    if _is_efx_toward(inst, a, alloc.bundles[a], X_j | {g})), None)
        if hit is None:
            continue
        g = hit
        after = _give(alloc, s, M_c - {g})
        after = all_cycles_resolution(inst, after)
        two_sources = [t for t in sources(envy_graph(inst, after))
                       if len(after.bundles[t]) == 2]
        sp = two_sources[0]
        after = _give(after, sp, frozenset({g}))
        bad = [t for t in range(inst.n) if t != sp
               and not _is_efx_toward(inst, t, after.bundles[t], after.bundles[sp])]
        if bad:
            t = bad[0]
            graph = envy_graph(inst, after)
            path = _bfs_path(graph, sp, lambda x: x == t)
            assert path is not None, "the pre-placement source must reach t"
            updates, freed = path_resolution(after, graph, path)
            updates[t] = freed
            after = after.replace(updates)
        _record(trace, "contested.case5.2", alloc, after, (a, s, sp), (g,))
        return after

    # Case 5.3: a singleton agent a, unenvied outside {s, j}, such that s
    # does not value a's bundle above 3/2 of her own bundle plus some pair
    # Y.  Y goes to s, the leftover good to a.
    for Y in _pairs(state.contested):
        with_Y = value_of(inst, s, alloc.bundles[s] | Y)
        for a in range(inst.n):
            if a in (s, j) or len(alloc.bundles[a]) != 1:
                continue
            envied = any(t not in (s, j, a)
                         and value_of(inst, t, alloc.bundles[a]) > value_of(inst, t, alloc.bundles[t])
                         for t in range(inst.n))
            if envied:
                continue
            if value_of(inst, s, alloc.bundles[a]) <= Fraction(3, 2) * with_Y:
                after = _give(alloc, s, Y)
                after = _give(after, a, M_c - Y)
                _record(trace, "contested.case5.3", alloc, after, (s, a), tuple(sorted(M_c)))
                return after

    # Case 5.4: j would not prefer s's bundle plus some pair Y to her own;
    # then all three goods go to s.
    for Y in _pairs(state.contested):
        if value_of(inst, j, alloc.bundles[s] | Y) <= value_of(inst, j, X_j):
            after = _give(alloc, s, M_c)
            _record(trace, "contested.case5.4", alloc, after, (s,), tuple(sorted(M_c)))
            return after

    # Case 5.5: three-way rotation.  Pick the lowest agent a outside {s, j}
    # unenvied within that set, her critical contested good g, and split
    # X_j = {g1, g2} with g1 the good a prefers.
    rest = [a for a in range(inst.n) if a not in (s, j)]
    unenvied = [a for a in rest
                if not any(t != a
                           and value_of(inst, t, alloc.bundles[a]) > value_of(inst, t, alloc.bundles[t])
                           for t in rest)]
    a = unenvied[0]
    crit = sorted(critical_goods(inst, alloc, a, BETA, strict=True) & M_c)
    g = crit[0]
    Y = M_c - {g}
    g1, g2 = sorted(X_j, key=lambda x: (-inst.value(a, x), x))
    after = alloc.replace({j: alloc.bundles[s] | Y,
                           s: alloc.bundles[a] | {g2},
                           a: frozenset({g1, g})},
                          pool=alloc.pool - M_c)
    _record(trace, "contested.case5.5", alloc, after, (s, j, a), tuple(sorted(M_c)))
    return after


def uncontested_critical(inst: Instance, alloc: Allocation,
                         trace: SolveTrace | None = None) -> Allocation:
    """Place every remaining (uncontested) critical pool good.

    Resolves plain envy cycles, then repeatedly takes an agent i with a
    critical pool good g_i and a source s reaching i: if i prefers her own
    bundle plus g_i over the source's bundle, the path is resolved and i
    takes the source's old bundle plus g_i; otherwise the source absorbs
    g_i.  Cycles are re-resolved after each placement.
    """
    if contested_criticals(inst, alloc, BETA, strict=True):
        raise InputError("contested critical goods must be placed first")
    for i in range(inst.n):
        if len(critical_goods(inst, alloc, i, BETA, strict=True)) > 1:
            raise InputError(f"agent {i} has more than one critical pool good")
    before_all = alloc
    alloc = all_cycles_resolution(inst, alloc)
    placements = 0
    while True:
        hit = None
        for i in range(inst.n):
            crit = sorted(critical_goods(inst, alloc, i, BETA, strict=True))
            if crit:
                hit = (i, crit[0])
                break
        if hit is None:
            break
        i, g_i = hit
        graph = envy_graph(inst, alloc)
        s = next(t for t in sources(graph) if _bfs_path(graph, t, lambda x: x == i))
        if s == i:
            alloc = _give(alloc, i, frozenset({g_i}))
        elif value_of(inst, i, alloc.bundles[i] | {g_i}) > value_of(inst, i, alloc.bundles[s]):
            path = _bfs_path(graph, s, lambda x: x == i)
            updates, freed = path_resolution(alloc, graph, path)
            updates[i] = freed | {g_i}
            alloc = alloc.replace(updates, pool=alloc.pool - {g_i})
        else:
            alloc = _give(alloc, s, frozenset({g_i}))
        alloc = all_cycles_resolution(inst, alloc)
        placements += 1
        assert placements <= inst.m
    _record(trace, "uncontested", before_all, alloc)
    return alloc


def improved_few_agents(inst: Instance) -> tuple[Allocation, SolveTrace]:
    """Full 2/3-EFX allocation for instances with at most eight agents.

    Pipeline: seeded greedy phased allocation with the extra path step,
    contested critical placement (if needed), uncontested critical
    placement, envy cycle elimination.
    """
    if inst.n > 8:
        raise InputError("only up to eight agents; use approximate_efkx with k >= 2")
    trace = SolveTrace(k=1)
    alloc, trace = g3pa_plus(inst, trace=trace)
    trace.snapshots["after_g3pa_plus"] = alloc
    if contested_criticals(inst, alloc, BETA, strict=True):
        alloc = contested_critical(inst, alloc, trace=trace)
    trace.snapshots["after_contested"] = alloc
    alloc = uncontested_critical(inst, alloc, trace=trace)
    trace.snapshots["after_uncontested"] = alloc
    before = alloc
    alloc = envy_cycle_elimination(inst, alloc)
    if alloc != before:
        trace.record("ece", before, alloc)
    trace.snapshots["final"] = alloc
    return alloc, trace
