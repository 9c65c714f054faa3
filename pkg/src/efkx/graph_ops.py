"""Bundle-exchange subroutines on envy graphs, and envy cycle elimination.

All operations are pure: they take an Allocation and return a fresh one.
Cycle discovery, source selection and pool iteration are deterministic
(lowest index first), so repeated runs produce identical outputs.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError
from .fairness import EnvyDigraph, envy_graph, modified_envy_graph, sources
from .model import Allocation, Instance

PLAIN = "plain"
MODIFIED = "modified"


def find_cycle(graph: EnvyDigraph) -> list[int] | None:
    """First directed cycle by DFS from the lowest node with out-edges.

    Adjacency is explored in ascending order and the first back-edge closes
    the reported cycle, so the result is deterministic.
    """
    succ = {i: graph.successors(i) for i in range(graph.n)}
    visited: set[int] = set()
    for start in range(graph.n):
        if start in visited or not succ[start]:
            continue
        stack = [(start, iter(succ[start]))]
        on_path = {start}
        path = [start]
        visited.add(start)
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt in on_path:
                    return path[path.index(nxt):]
                if nxt not in visited:
                    visited.add(nxt)
                    on_path.add(nxt)
                    path.append(nxt)
                    stack.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                on_path.discard(node)
                path.pop()
    return None


def _check_cycle(graph: EnvyDigraph, cycle: list[int]) -> None:
    if not cycle:
        raise InputError("cycle must be non-empty")
    for h, i in enumerate(cycle):
        j = cycle[(h + 1) % len(cycle)]
        if not graph.has_edge(i, j):
            raise InputError(f"({i}, {j}) is not an edge of the graph")


def cycle_resolution(alloc: Allocation, graph: EnvyDigraph, cycle: list[int]) -> Allocation:
    """Each agent on the cycle receives her successor's former bundle."""
    _check_cycle(graph, cycle)
    updates = {}
    for h, i in enumerate(cycle):
        j = cycle[(h + 1) % len(cycle)]
        updates[i] = alloc.bundles[j]
    return alloc.replace(updates)


def _build_graph(inst: Instance, alloc: Allocation, variant: str, alpha: Fraction | None) -> EnvyDigraph:
    if variant == PLAIN:
        return envy_graph(inst, alloc)
    if variant == MODIFIED:
        if alpha is None:
            raise InputError("the modified graph needs an alpha")
        return modified_envy_graph(inst, alloc, alpha)
    raise InputError(f"unknown graph variant {variant!r}")


def all_cycles_resolution(inst: Instance, alloc: Allocation, variant: str = PLAIN,
                          alpha: Fraction | None = None) -> Allocation:
    """Resolve cycles, rebuilding the graph each time, until it is acyclic.

    Under strict edges every resolution strictly decreases the edge count,
    so at most n^2 resolutions happen; this is asserted.
    """
    n = inst.n
    resolutions = 0
    graph = _build_graph(inst, alloc, variant, alpha)
    prev_edges = len(graph.edges)
    while True:
        cycle = find_cycle(graph)
        if cycle is None:
            return alloc
        alloc = cycle_resolution(alloc, graph, cycle)
        resolutions += 1
        graph = _build_graph(inst, alloc, variant, alpha)
        assert len(graph.edges) < prev_edges, "cycle resolution must shed an edge"
        prev_edges = len(graph.edges)
        assert resolutions <= n * n, "too many cycle resolutions"


def path_resolution(alloc: Allocation, graph: EnvyDigraph,
                    path: list[int]) -> tuple[dict[int, frozenset[int]], frozenset[int]]:
    """Shift bundles backwards along a directed path.

    Agents path[0..l-2] each receive their successor's former bundle. The
    head's former bundle ends up unowned and the last agent's slot is left
    for the caller to fill; both are returned as (updates, freed_bundle).
    The raw outcome is deliberately not an Allocation.
    """
    if not path:
        raise InputError("path must be non-empty")
    for h in range(len(path) - 1):
        if not graph.has_edge(path[h], path[h + 1]):
            raise InputError(f"({path[h]}, {path[h + 1]}) is not an edge of the graph")
    if len(set(path)) != len(path):
        raise InputError("path revisits a node")
    updates = {path[h]: alloc.bundles[path[h + 1]] for h in range(len(path) - 1)}
    return updates, alloc.bundles[path[0]]


def path_resolution_star(inst: Instance, alloc: Allocation, graph: EnvyDigraph,
                         path: list[int], Y: frozenset[int], k: int) -> Allocation:
    """Path resolution from a (k+1)-bundle source, then hand the last agent Y.

    Y must have k+1 goods drawn from the source's bundle and the pool; the
    source's leftover goods return to the pool, restoring the partition.
    """
    s, i = path[0], path[-1]
    if len(alloc.bundles[s]) != k + 1:
        raise InputError("the path head must hold exactly k+1 goods")
    if len(Y) != k + 1:
        raise InputError("Y must have exactly k+1 goods")
    if not Y <= (alloc.bundles[s] | alloc.pool):
        raise InputError("Y must come from the head's bundle and the pool")
    updates, freed = path_resolution(alloc, graph, path)
    updates[i] = Y
    pool = (alloc.pool | freed) - Y
    return alloc.replace(updates, pool=pool)


def envy_cycle_elimination(inst: Instance, alloc: Allocation) -> Allocation:
    """Allocate every pool good to a current source of the plain envy graph.

    Pool goods are handed out in ascending index order; whenever the graph
    has no source, cycles are resolved first. No agent's value ever drops.
    """
    n = inst.n
    total_resolutions = 0
    budget = n * n * max(1, len(alloc.pool))
    for g in sorted(alloc.pool):
        graph = envy_graph(inst, alloc)
        while True:
            srcs = sources(graph)
            if srcs:
                break
            cycle = find_cycle(graph)
            assert cycle is not None, "no source implies a cycle"
            alloc = cycle_resolution(alloc, graph, cycle)
            total_resolutions += 1
            assert total_resolutions <= budget, "cycle resolution budget exceeded"
            graph = envy_graph(inst, alloc)
        s = srcs[0]
        alloc = alloc.replace({s: alloc.bundles[s] | {g}}, pool=alloc.pool - {g})
    return alloc
