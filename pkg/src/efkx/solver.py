"""Solvers for approximately envy-free (up to k goods) allocations.

The centerpiece is a greedy phased allocation routine (``g3pa``) that, for
any k >= 2, yields a partial allocation whose every pair of agents meets
the (k+1)/(k+2) envy threshold and which satisfies several structural
properties.  Composed with critical-good elimination and envy cycle
elimination it gives a complete (k+1)/(k+2)-EFkX allocation.  A simpler
round-robin baseline achieving k/(k+1)-EFkX is also provided.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError
from .fairness import (
    EnvyDigraph,
    check_g3pa_properties,
    critical_goods,
    modified_envy_graph,
    proxy_value,
    sources,
)
from .graph_ops import (
    MODIFIED,
    all_cycles_resolution,
    envy_cycle_elimination,
    path_resolution_star,
)
from .model import Allocation, Instance, top_subset, value_of


@dataclass
class TraceEvent:
    iteration: int
    step: str
    agents: tuple[int, ...]
    goods: tuple[int, ...]


@dataclass
class SolveTrace:
    """Step-by-step record of a solver run.

    ``history[i]`` lists every bundle agent i has held, in order, including
    the initial one.  Consecutive duplicates are not recorded.
    """
    k: int
    events: list[TraceEvent] = field(default_factory=list)
    history: list[list[frozenset[int]]] = field(default_factory=list)
    iterations: int = 0
    snapshots: dict[str, Allocation] = field(default_factory=dict)

    def start(self, alloc: Allocation) -> None:
        self.history = [[b] for b in alloc.bundles]

    def record(self, step: str, before: Allocation, after: Allocation,
               agents: tuple[int, ...] = (), goods: tuple[int, ...] = ()) -> None:
        self.events.append(TraceEvent(self.iterations, step, agents, goods))
        for i, bundle in enumerate(after.bundles):
            if bundle != before.bundles[i]:
                self.history[i].append(bundle)

    def bundles_repeat(self) -> bool:
        """Whether some agent ever returned to a bundle she held before."""
        for hist in self.history:
            if len(set(hist)) != len(hist):
                return True
        return False

    def proxy_monotone(self, inst: Instance, alpha: Fraction) -> bool:
        """Whether each agent's proxy value never decreased along the run."""
        for i, hist in enumerate(self.history):
            vals = [proxy_value(inst, i, b, alpha) for b in hist]
            if any(a > b for a, b in zip(vals, vals[1:])):
                return False
        return True


def seed_allocation(inst: Instance) -> Allocation:
    """Give good i to agent i for i < min(n, m); the rest stays pooled."""
    n, m = inst.n, inst.m
    bundles = [frozenset({i}) if i < m else frozenset() for i in range(n)]
    return Allocation.make(bundles, m)


def _validate_seed(inst: Instance, alloc: Allocation, k: int) -> None:
    for i, bundle in enumerate(alloc.bundles):
        if len(bundle) not in (0, 1, k + 1):
            raise InputError(f"agent {i} holds {len(bundle)} goods; expected 0, 1 or {k + 1}")
    rep = check_g3pa_properties(inst, alloc, k)
    for key in ("b", "c"):
        if not rep.property_verdicts[key]:
            raise InputError(f"starting allocation violates property ({key})")


def _singletons(alloc: Allocation) -> list[int]:
    return [i for i, b in enumerate(alloc.bundles) if len(b) == 1]


def _big_agents(alloc: Allocation, k: int) -> list[int]:
    return [i for i, b in enumerate(alloc.bundles) if len(b) == k + 1]


def _bfs_path(graph: EnvyDigraph, start: int, accept) -> list[int] | None:
    """Shortest path from start to an accepted node, lexicographically least.

    Neighbours are expanded in ascending order and the first accepted node
    popped wins, so among shortest paths the smallest one is returned.
    """
    from collections import deque

    if accept(start):
        return [start]
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for nxt in graph.successors(node):
            if nxt in parent:
                continue
            parent[nxt] = node
            if accept(nxt):
                path = [nxt]
                while path[-1] != start:
                    path.append(parent[path[-1]])
                return path[::-1]
            queue.append(nxt)
    return None


def g3pa(inst: Instance, k: int, alloc: Allocation | None = None,
         trace: SolveTrace | None = None, plus: bool = False) -> tuple[Allocation, SolveTrace]:
    """Greedy phased allocation for alpha = (k+1)/(k+2).

    Repeatedly fires the first applicable of eight (nine with ``plus``)
    steps until the pool empties or no step applies.  Returns a partial or
    full allocation in which every bundle has 0, 1 or k+1 goods, singleton
    agents envy nobody, and all pairs meet the (k+1)/(k+2) threshold.
    """
    if k < 1:
        raise InputError("k must be at least 1")
    alpha = Fraction(k + 1, k + 2)
    if alloc is None:
        alloc = seed_allocation(inst)
    _validate_seed(inst, alloc, k)
    if trace is None:
        trace = SolveTrace(k=k)
    trace.start(alloc)
    trace.snapshots["seed"] = alloc
    n, m = inst.n, inst.m
    bound = n * m ** k + 1

    while alloc.pool:
        trace.iterations += 1
        assert trace.iterations <= bound, "iteration bound exceeded"
        pool = sorted(alloc.pool)
        fired = False

        # Step 1: a singleton agent prefers a single pool good outright.
        for i in _singletons(alloc):
            own = value_of(inst, i, alloc.bundles[i])
            for g in pool:
                if inst.value(i, g) > own:
                    after = alloc.replace({i: frozenset({g})},
                                          pool=(alloc.pool | alloc.bundles[i]) - {g})
                    trace.record("1", alloc, after, (i,), (g,))
                    alloc = after
                    fired = True
                    break
            if fired:
                break
        if fired:
            continue

        # Step 2: a (k+1)-agent prefers one pool good to (k+2)/(k+1) times
        # her whole bundle; she releases the bundle and takes the good.
        for i in _big_agents(alloc, k):
            bar = Fraction(k + 2, k + 1) * value_of(inst, i, alloc.bundles[i])
            for g in pool:
                if inst.value(i, g) > bar:
                    after = alloc.replace({i: frozenset({g})},
                                          pool=(alloc.pool | alloc.bundles[i]) - {g})
                    trace.record("2", alloc, after, (i,), (g,))
                    alloc = after
                    fired = True
                    break
            if fired:
                break
        if fired:
            continue

        # Step 3: a singleton agent values the k+1 best pool goods above
        # (k+1)/(k+2) of her own bundle; she swaps for them.
        if len(alloc.pool) >= k + 1:
            for i in _singletons(alloc):
                Y = top_subset(inst, i, alloc.pool, k + 1)
                if value_of(inst, i, Y) > alpha * value_of(inst, i, alloc.bundles[i]):
                    after = alloc.replace({i: Y}, pool=(alloc.pool | alloc.bundles[i]) - Y)
                    trace.record("3", alloc, after, (i,), tuple(sorted(Y)))
                    alloc = after
                    fired = True
                    break
        if fired:
            continue

        # Step 4: a (k+1)-agent swaps her worst good for a better pool good.
        for i in _big_agents(alloc, k):
            worst = min(alloc.bundles[i], key=lambda g: (inst.value(i, g), g))
            for g in pool:
                if inst.value(i, g) > inst.value(i, worst):
                    after = alloc.replace({i: (alloc.bundles[i] - {worst}) | {g}},
                                          pool=(alloc.pool | {worst}) - {g})
                    trace.record("4", alloc, after, (i,), (worst, g))
                    alloc = after
                    fired = True
                    break
            if fired:
                break
        if fired:
            continue

        # Step 5: resolve all cycles of the modified envy graph.
        graph = modified_envy_graph(inst, alloc, alpha)
        from .graph_ops import find_cycle
        if find_cycle(graph) is not None:
            after = all_cycles_resolution(inst, alloc, MODIFIED, alpha)
            trace.record("5", alloc, after)
            alloc = after
            continue

        # Step 6: a singleton source of the modified graph absorbs pool goods.
        singleton_sources = [s for s in sources(graph) if len(alloc.bundles[s]) == 1]
        if singleton_sources:
            s = singleton_sources[0]
            if len(alloc.pool) >= k:
                Y = top_subset(inst, s, alloc.pool, k)
                after = alloc.replace({s: alloc.bundles[s] | Y}, pool=alloc.pool - Y)
                trace.record("6.1", alloc, after, (s,), tuple(sorted(Y)))
            else:
                after = alloc.replace({s: alloc.bundles[s] | alloc.pool}, pool=frozenset())
                trace.record("6.2", alloc, after, (s,), tuple(sorted(alloc.pool)))
            alloc = after
            continue

        # Step 7: every modified-graph source now holds k+1 goods.  Look for
        # a path from a source to a singleton agent who would profitably
        # take the best k+1 goods of the source's bundle plus the pool.
        for s in sources(graph):
            def accept(i: int, s: int = s) -> bool:
                if len(alloc.bundles[i]) != 1:
                    return False
                Y = top_subset(inst, i, alloc.bundles[s] | alloc.pool, k + 1)
                return value_of(inst, i, Y) > alpha * value_of(inst, i, alloc.bundles[i])

            path = _bfs_path(graph, s, accept)
            if path is not None:
                i = path[-1]
                Y = top_subset(inst, i, alloc.bundles[s] | alloc.pool, k + 1)
                after = path_resolution_star(inst, alloc, graph, path, Y, k)
                trace.record("7", alloc, after, tuple(path), tuple(sorted(Y)))
                alloc = after
                fired = True
                break
        if fired:
            continue

        # Step 8 (extended variant only): a (k+1)-agent reachable from a
        # source would profitably retake the best k+1 goods of the source's
        # bundle plus the pool.
        if plus:
            for s in sources(graph):
                def accept(i: int, s: int = s) -> bool:
                    if i == s or len(alloc.bundles[i]) != k + 1:
                        return False
                    Y = top_subset(inst, i, alloc.bundles[s] | alloc.pool, k + 1)
                    return value_of(inst, i, Y) > value_of(inst, i, alloc.bundles[i])

                path = _bfs_path(graph, s, accept)
                if path is not None:
                    i = path[-1]
                    Y = top_subset(inst, i, alloc.bundles[s] | alloc.pool, k + 1)
                    after = path_resolution_star(inst, alloc, graph, path, Y, k)
                    trace.record("8", alloc, after, tuple(path), tuple(sorted(Y)))
                    alloc = after
                    fired = True
                    break
            if fired:
                continue

        break  # no step applies: stop with a partial allocation

    return alloc, trace


def allocate_and_eliminate_critical(inst: Instance, alloc: Allocation, k: int,
                                    trace: SolveTrace | None = None) -> Allocation:
    """Hand top pool goods to agents who see a strictly critical pool good.

    While some agent values a pool good strictly above 1/(k+1) of her own
    bundle, she receives her k-1 favourite pool goods (the whole pool if it
    is smaller).  Each agent is augmented at most once.  Requires k >= 2.
    """
    if k < 2:
        raise InputError("critical elimination needs k >= 2")
    beta = Fraction(1, k + 1)
    augmented: set[int] = set()
    while True:
        hit = None
        for i in range(inst.n):
            if i in augmented:
                continue
            if critical_goods(inst, alloc, i, beta, strict=True):
                hit = i
                break
        if hit is None:
            return alloc
        Y = top_subset(inst, hit, alloc.pool, min(k - 1, len(alloc.pool)))
        after = alloc.replace({hit: alloc.bundles[hit] | Y}, pool=alloc.pool - Y)
        if trace is not None:
            trace.record("aec", alloc, after, (hit,), tuple(sorted(Y)))
        alloc = after
        augmented.add(hit)
        assert len(augmented) <= inst.n


def approximate_efkx(inst: Instance, k: int) -> tuple[Allocation, SolveTrace]:
    """Complete (k+1)/(k+2)-EFkX allocation for k >= 2.

    Pipeline: greedy phased allocation, then critical-good elimination,
    then envy cycle elimination on the remaining pool.
    """
    if k < 2:
        raise InputError("this pipeline needs k >= 2")
    trace = SolveTrace(k=k)
    alloc, trace = g3pa(inst, k, trace=trace)
    trace.snapshots["after_g3pa"] = alloc
    alloc = allocate_and_eliminate_critical(inst, alloc, k, trace=trace)
    trace.snapshots["after_aec"] = alloc
    before = alloc
    alloc = envy_cycle_elimination(inst, alloc)
    if trace is not None and alloc != before:
        trace.record("ece", before, alloc)
    trace.snapshots["final"] = alloc
    return alloc, trace


def k_round_robin_ece(inst: Instance, k: int) -> tuple[Allocation, SolveTrace]:
    """k rounds of round-robin picking, then envy cycle elimination.

    In each round every agent in index order takes her favourite remaining
    pool good (ties to the lowest index).  Yields a k/(k+1)-EFkX allocation.
    """
    if k < 1:
        raise InputError("k must be at least 1")
    alloc = Allocation.empty(inst.n, inst.m)
    trace = SolveTrace(k=k)
    trace.start(alloc)
    for _ in range(k):
        for i in range(inst.n):
            if not alloc.pool:
                break
            g = max(sorted(alloc.pool), key=lambda g: (inst.value(i, g), -g))
            after = alloc.replace({i: alloc.bundles[i] | {g}}, pool=alloc.pool - {g})
            trace.record("rr", alloc, after, (i,), (g,))
            alloc = after
        if not alloc.pool:
            break
    before = alloc
    alloc = envy_cycle_elimination(inst, alloc)
    if alloc != before:
        trace.record("ece", before, alloc)
    trace.snapshots["final"] = alloc
    return alloc, trace
