"""Fairness predicates: EFkX thresholds, critical goods, envy graphs.

The "threshold" of an ordered agent pair is the largest alpha for which
agent i is alpha-EFkX towards agent j. Under additive values the binding
removal set is the k cheapest goods of the envied bundle, so the threshold
is a single exact division (or infinity when the remainder is worthless).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError
from .model import Allocation, Instance, cheapest_subset, top_subset, value_of

INFINITY = math.inf

# Edge kinds in the modified graph, by bundle-size pattern of (envier, envied).
EXACT = "exact"
WEAK = "weak"
STRONG = "strong"


@dataclass(frozen=True)
class EnvyDigraph:
    """Directed envy graph over agents; edges carry a kind label."""

    n: int
    edges: frozenset[tuple[int, int]]
    kinds: dict[tuple[int, int], str] = field(default_factory=dict, compare=False)

    def successors(self, i: int) -> list[int]:
        return sorted(j for (a, j) in self.edges if a == i)

    def predecessors(self, j: int) -> list[int]:
        return sorted(i for (i, b) in self.edges if b == j)

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self.edges


@dataclass
class FairnessReport:
    """Outcome of a verification run: threshold matrix and/or property verdicts."""

    alpha: Fraction | None = None
    k: int | None = None
    overall: bool = True
    # thresholds[i][j] is the pair threshold; None on the diagonal.
    thresholds: list[list[Fraction | float | None]] | None = None
    # (envier, envied, removal set) for the first failing pair, if any.
    witness: tuple[int, int, frozenset[int]] | None = None
    property_verdicts: dict[str, bool] | None = None
    critical: list[frozenset[int]] | None = None


def bundle_threshold(inst: Instance, agent: int, own, other, k: int) -> Fraction | float:
    """Largest alpha with v(own) >= alpha * v(other \\ Y) over all |Y| = k removals."""
    own_v = value_of(inst, agent, own)
    removed = cheapest_subset(inst, agent, other, k)
    rest_v = value_of(inst, agent, set(other) - removed)
    if rest_v == 0:
        return INFINITY
    return own_v / rest_v


def efkx_threshold(inst: Instance, alloc: Allocation, i: int, j: int, k: int) -> Fraction | float:
    """Threshold of agent i towards agent j; infinity when |X_j| <= k or the remainder is worthless."""
    if i == j:
        raise InputError("threshold is defined for distinct agents")
    return bundle_threshold(inst, i, alloc.bundles[i], alloc.bundles[j], k)


def verify_alpha_efkx(inst: Instance, alloc: Allocation, alpha: Fraction, k: int) -> FairnessReport:
    """Check alpha-EFkX for every ordered pair; carries the full threshold matrix."""
    if not 0 < alpha <= 1:
        raise InputError("alpha must lie in (0, 1]")
    if k < 0:
        raise InputError("k must be non-negative")
    n = inst.n
    thresholds: list[list[Fraction | float | None]] = [[None] * n for _ in range(n)]
    witness = None
    overall = True
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            t = efkx_threshold(inst, alloc, i, j, k)
            thresholds[i][j] = t
            if t < alpha and witness is None:
                overall = False
                witness = (i, j, cheapest_subset(inst, i, alloc.bundles[j], k))
    return FairnessReport(alpha=alpha, k=k, overall=overall, thresholds=thresholds, witness=witness)


def min_pair_threshold(inst: Instance, alloc: Allocation, k: int) -> Fraction | float:
    """The allocation's guarantee: min over ordered pairs (infinity for a single agent)."""
    best = INFINITY
    for i in range(inst.n):
        for j in range(inst.n):
            if i != j:
                t = efkx_threshold(inst, alloc, i, j, k)
                if t < best:
                    best = t
    return best


def critical_goods(inst: Instance, alloc: Allocation, i: int, beta: Fraction,
                   strict: bool = False) -> frozenset[int]:
    """Pool goods g with v_i(g) >= beta * v_i(X_i) (or > when strict).

    The non-strict form follows the definition of a beta-critical good; the
    strict form is the variant the property checker and the k=1 pipeline use.
    """
    if beta <= 0:
        raise InputError("beta must be positive")
    own = value_of(inst, i, alloc.bundles[i])
    bound = beta * own
    row = inst.values[i]
    if strict:
        return frozenset(g for g in alloc.pool if row[g] > bound)
    return frozenset(g for g in alloc.pool if row[g] >= bound)


def contested_criticals(inst: Instance, alloc: Allocation, beta: Fraction,
                        strict: bool = False) -> frozenset[int]:
    """Pool goods critical for at least two agents simultaneously."""
    count: dict[int, int] = {}
    for i in range(inst.n):
        for g in critical_goods(inst, alloc, i, beta, strict=strict):
            count[g] = count.get(g, 0) + 1
    return frozenset(g for g, c in count.items() if c >= 2)


def envy_graph(inst: Instance, alloc: Allocation) -> EnvyDigraph:
    """Edge (i, j) iff agent i strictly prefers X_j to X_i."""
    n = inst.n
    own = [value_of(inst, i, alloc.bundles[i]) for i in range(n)]
    edges = set()
    kinds = {}
    for i in range(n):
        for j in range(n):
            if i != j and value_of(inst, i, alloc.bundles[j]) > own[i]:
                edges.add((i, j))
                kinds[(i, j)] = EXACT
    return EnvyDigraph(n, frozenset(edges), kinds)


def proxy_value(inst: Instance, agent: int, goods, alpha: Fraction) -> Fraction:
    """Proxy valuation: plain value for bundles of size <= 1, inflated by 1/alpha above."""
    goods = tuple(goods)
    v = value_of(inst, agent, goods)
    if len(goods) > 1:
        return v / alpha
    return v


def modified_envy_graph(inst: Instance, alloc: Allocation, alpha: Fraction) -> EnvyDigraph:
    """Envy graph under proxy valuations; reduces to the plain graph at alpha = 1.

    Edges are strict (proxy value of the envied bundle strictly exceeds the
    envier's own proxy value); the cycle-resolution progress measure needs
    strictness.
    """
    if not 0 < alpha <= 1:
        raise InputError("alpha must lie in (0, 1]")
    n = inst.n
    sizes = [len(b) for b in alloc.bundles]
    own = [proxy_value(inst, i, alloc.bundles[i], alpha) for i in range(n)]
    edges = set()
    kinds = {}
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if proxy_value(inst, i, alloc.bundles[j], alpha) > own[i]:
                edges.add((i, j))
                if sizes[i] <= 1 < sizes[j]:
                    kinds[(i, j)] = WEAK
                elif sizes[i] > 1 >= sizes[j]:
                    kinds[(i, j)] = STRONG
                else:
                    kinds[(i, j)] = EXACT
    return EnvyDigraph(n, frozenset(edges), kinds)


def sources(graph: EnvyDigraph) -> list[int]:
    """Nodes with in-degree 0, ascending; isolated nodes count."""
    targets = {j for (_, j) in graph.edges}
    return [i for i in range(graph.n) if i not in targets]


def check_g3pa_properties(inst: Instance, alloc: Allocation, k: int) -> FairnessReport:
    """Verdicts for the six structural properties of a preserved partial allocation.

    (a) bundle sizes are 1 or k+1 (empty bundles are tolerated: they arise
        only when goods are scarcer than agents, with an empty pool);
    (b) singleton-bundle agents are EFkX towards everyone;
    (c) every ordered pair meets (k+1)/(k+2);
    (d) nobody prefers a single pool good to her bundle;
    (e) (k+1)-bundle agents have no strictly 1/(k+1)-critical pool goods;
    (f) a singleton agent's strictly critical pool goods number at most k
        and are jointly worth at most (k+1)/(k+2) of her bundle.
    """
    if k < 1:
        raise InputError("k must be at least 1")
    n = inst.n
    beta = Fraction(1, k + 1)
    guarantee = Fraction(k + 1, k + 2)
    verdicts = {key: True for key in "abcdef"}
    criticals: list[frozenset[int]] = []

    for i in range(n):
        size = len(alloc.bundles[i])
        if size not in (0, 1, k + 1):
            verdicts["a"] = False
        own = value_of(inst, i, alloc.bundles[i])
        crit = critical_goods(inst, alloc, i, beta, strict=True)
        criticals.append(crit)
        for j in range(n):
            if i == j:
                continue
            t = efkx_threshold(inst, alloc, i, j, k)
            if t < guarantee:
                verdicts["c"] = False
            if size == 1 and t < 1:
                verdicts["b"] = False
        row = inst.values[i]
        if any(row[g] > own for g in alloc.pool):
            verdicts["d"] = False
        if size == k + 1 and crit:
            verdicts["e"] = False
        if size == 1:
            if len(crit) > k or value_of(inst, i, crit) > guarantee * own:
                verdicts["f"] = False

    return FairnessReport(
        k=k,
        overall=all(verdicts.values()),
        property_verdicts=verdicts,
        critical=criticals,
    )
