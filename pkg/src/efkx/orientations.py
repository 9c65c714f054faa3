"""Fair division on graphs: orienting each edge-good to one endpoint.

Each good is an edge of an undirected graph and is valued positively by
exactly its two endpoints; an orientation gives every edge to one of them.
The module decides whether an approximately envy-free orientation exists
(pruned exhaustive search), builds the complete-graph family that admits no
such orientation, checks the pigeonhole core of that argument, and emits
the gadget instance behind the NP-hardness reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import CapabilityError, ConstructionError, InputError
from .fairness import bundle_threshold
from .model import Allocation, Instance, Rational, as_rational


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    wu: Fraction
    wv: Fraction
    label: str | None = None

    def weight(self, node: int) -> Fraction:
        if node == self.u:
            return self.wu
        if node == self.v:
            return self.wv
        return Fraction(0)


@dataclass(frozen=True)
class GraphInstance:
    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.n < 1:
            raise InputError("need at least one node")
        for e in self.edges:
            if not (0 <= e.u < self.n and 0 <= e.v < self.n) or e.u == e.v:
                raise InputError(f"bad edge ({e.u}, {e.v})")
            if e.wu <= 0 or e.wv <= 0:
                raise InputError("edge goods must be valued positively by both endpoints")

    @classmethod
    def make(cls, n: int, edges) -> "GraphInstance":
        out = []
        for e in edges:
            u, v, wu, wv = e[0], e[1], as_rational(e[2]), as_rational(e[3])
            label = e[4] if len(e) > 4 else None
            out.append(Edge(u, v, wu, wv, label))
        return cls(n, tuple(out))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, node: int) -> int:
        return sum(1 for e in self.edges if node in (e.u, e.v))


@dataclass(frozen=True)
class Orientation:
    receivers: tuple[int, ...]


def to_instance(ginst: GraphInstance) -> Instance:
    """The allocation instance induced by a graph: goods are the edges."""
    rows = [[ginst.edges[g].weight(i) for g in range(ginst.m)]
            for i in range(ginst.n)]
    return Instance.from_rows(rows)


def to_allocation(ginst: GraphInstance, orientation: Orientation) -> Allocation:
    if len(orientation.receivers) != ginst.m:
        raise InputError("one receiver per edge required")
    bundles = [set() for _ in range(ginst.n)]
    for g, r in enumerate(orientation.receivers):
        if r not in (ginst.edges[g].u, ginst.edges[g].v):
            raise InputError(f"receiver of edge {g} must be an endpoint")
        bundles[r].add(g)
    return Allocation.make(bundles, ginst.m)


def _search_order(ginst: GraphInstance) -> list[int]:
    """Order edges so vertex neighborhoods close as early as possible.

    Greedy: repeatedly pick the undecided edge minimizing the number of
    undecided incident edges left at its endpoints, ties by index.  Early
    closure lets the pair-wise pruning test fire sooner.
    """
    remaining = {i: ginst.degree(i) for i in range(ginst.n)}
    undecided = set(range(ginst.m))
    order = []
    while undecided:
        g = min(undecided,
                key=lambda g: (remaining[ginst.edges[g].u] + remaining[ginst.edges[g].v], g))
        order.append(g)
        undecided.discard(g)
        remaining[ginst.edges[g].u] -= 1
        remaining[ginst.edges[g].v] -= 1
    return order


def exists_efkx_orientation(ginst: GraphInstance, k: int,
                            alpha: Rational) -> Orientation | None:
    """First orientation whose induced allocation is alpha-EFkX, or None.

    Depth-first over edges in neighborhood-closing order; a branch dies as
    soon as an ordered pair of nodes with all incident edges decided fails
    the alpha-EFkX test (bundles of decided nodes can no longer change, so
    the failure is permanent).  Exhaustive, hence "None" is a proof.
    """
    alpha = as_rational(alpha)
    if not 1 <= k <= max(1, ginst.n - 1):
        raise InputError("k must be between 1 and n-1")
    inst = to_instance(ginst)
    order = _search_order(ginst)
    incident = [[] for _ in range(ginst.n)]
    for g, e in enumerate(ginst.edges):
        incident[e.u].append(g)
        incident[e.v].append(g)
    # step at which each node's neighborhood is fully decided
    pos = {g: t for t, g in enumerate(order)}
    closed_at = [max((pos[g] for g in incident[i]), default=-1) for i in range(ginst.n)]
    checks_at: list[list[tuple[int, int]]] = [[] for _ in range(ginst.m)]
    for i in range(ginst.n):
        for j in range(ginst.n):
            if i != j:
                step = max(closed_at[i], closed_at[j])
                if step >= 0:
                    checks_at[step].append((i, j))

    bundles = [set() for _ in range(ginst.n)]
    receivers = [0] * ginst.m

    def ok(i: int, j: int) -> bool:
        return bundle_threshold(inst, i, frozenset(bundles[i]),
                                frozenset(bundles[j]), k) >= alpha

    def dfs(t: int) -> bool:
        if t == ginst.m:
            return True
        g = order[t]
        e = ginst.edges[g]
        for r in (e.u, e.v):
            receivers[g] = r
            bundles[r].add(g)
            if all(ok(i, j) for i, j in checks_at[t]):
                if dfs(t + 1):
                    return True
            bundles[r].discard(g)
        return False

    if dfs(0):
        return Orientation(tuple(receivers))
    return None


def exists_efkx_orientation_naive(ginst: GraphInstance, k: int,
                                  alpha: Rational) -> Orientation | None:
    """Unpruned 2^m enumeration; the independent check for the pruned search."""
    from itertools import product

    alpha = as_rational(alpha)
    inst = to_instance(ginst)
    for bits in product((0, 1), repeat=ginst.m):
        receivers = tuple(ginst.edges[g].u if b == 0 else ginst.edges[g].v
                          for g, b in enumerate(bits))
        alloc = to_allocation(ginst, Orientation(receivers))
        if all(bundle_threshold(inst, i, alloc.bundles[i], alloc.bundles[j], k) >= alpha
               for i in range(ginst.n) for j in range(ginst.n) if i != j):
            return Orientation(receivers)
    return None


def counterexample_family(k: int) -> GraphInstance:
    """Complete graph on 4k+2 nodes with no alpha-EFkX orientation.

    A perfect matching of heavy edges (value 4k+2, the smallest integer
    above 4k+1) sits on the Hamiltonian cycle 1..n,1 at the odd positions;
    all other edges are light (value 1).
    """
    if k < 1:
        raise InputError("k must be at least 1")
    n = 4 * k + 2
    heavy = Fraction(4 * k + 2)
    heavy_pairs = set()
    for i in range(1, n + 1):  # 1-based cycle positions
        if i % 2 == 0:
            j = i + 1 if i < n else 1
            heavy_pairs.add(frozenset({i - 1, j - 1}))
    heavy_pairs.add(frozenset({n - 1, 0}))
    edges = []
    for u, v in combinations(range(n), 2):
        if frozenset({u, v}) in heavy_pairs:
            edges.append(Edge(u, v, heavy, heavy, "heavy"))
        else:
            edges.append(Edge(u, v, Fraction(1), Fraction(1), "light"))
    return GraphInstance(n, tuple(edges))


def pigeonhole_check(k: int) -> tuple[bool, Orientation]:
    """Whether every orientation of K_{2k+1} pushes in-degree k onto someone.

    Enumerates all 2^C(2k+1,2) orientations; returns the verdict together
    with an orientation minimizing the maximum in-degree.  Limited to
    k <= 3 (2^21 orientations).
    """
    if k < 1:
        raise InputError("k must be at least 1")
    if k > 3:
        raise CapabilityError("pigeonhole enumeration practical only up to k = 3")
    import numpy as np

    n = 2 * k + 1
    pairs = list(combinations(range(n), 2))
    m = len(pairs)
    total = 1 << m
    best_max = None
    best_code = 0
    all_hit = True
    chunk = 1 << 16
    codes_template = np.arange(chunk, dtype=np.uint32)
    for start in range(0, total, chunk):
        codes = codes_template[: min(chunk, total - start)] + start
        indeg = np.zeros((len(codes), n), dtype=np.uint8)
        for b, (u, v) in enumerate(pairs):
            bit = (codes >> b) & 1
            indeg[:, v] += (bit == 0)
            indeg[:, u] += (bit == 1).astype(np.uint8)
        maxes = indeg.max(axis=1)
        if maxes.min() < k:
            all_hit = False
        idx = int(maxes.argmin())
        if best_max is None or maxes[idx] < best_max:
            best_max = int(maxes[idx])
            best_code = int(codes[idx])
    receivers = tuple(pairs[b][1] if (best_code >> b) & 1 == 0 else pairs[b][0]
                      for b in range(m))
    return all_hit, Orientation(receivers)


def pigeonhole_complete_graph(k: int) -> GraphInstance:
    """K_{2k+1} with unit weights, the graph pigeonhole_check enumerates."""
    n = 2 * k + 1
    return GraphInstance(n, tuple(Edge(u, v, Fraction(1), Fraction(1))
                                  for u, v in combinations(range(n), 2)))


def compute_delta(base: GraphInstance) -> Fraction:
    """Half the smallest positive slack between an edge and a cheap edge set.

    For every base edge e = (i, j) and every subset J of the other edges
    with v_i(J) <= v_i(e) and v_j(J) <= v_j(e), the gaps v_i(e) - v_i(J)
    and v_j(e) - v_j(J) are collected; the result is half the minimum
    strictly positive gap.  A comparison where both gaps vanish admits no
    positive margin and is surfaced as an error.
    """
    gaps = []
    for idx, e in enumerate(base.edges):
        others = [f for t, f in enumerate(base.edges) if t != idx]
        for r in range(len(others) + 1):
            for J in combinations(others, r):
                vi = sum((f.weight(e.u) for f in J), Fraction(0))
                vj = sum((f.weight(e.v) for f in J), Fraction(0))
                if vi <= e.wu and vj <= e.wv:
                    gap_i, gap_j = e.wu - vi, e.wv - vj
                    if gap_i == 0 and gap_j == 0:
                        raise ConstructionError(
                            f"edge ({e.u}, {e.v}) is exactly matched by a rival "
                            "edge set at both endpoints; no positive margin exists")
                    gaps.extend(g for g in (gap_i, gap_j) if g > 0)
    if not gaps:
        raise ConstructionError("base has no edges to take a margin from")
    return min(gaps) / 2


def gadget_only(k: int) -> GraphInstance:
    """The enhancer-plus-funnel subgraph of the reduction, without a base."""
    if k < 2:
        raise InputError("the reduction is defined for k >= 2")
    enhancer = counterexample_family(k - 1)
    ne = enhancer.n
    beta = Fraction(ne + 2)
    heavy = Fraction(ne) + beta + 1
    solid = k * beta + 1
    edges = []
    for e in enhancer.edges:
        w = heavy if e.label == "heavy" else e.wu
        edges.append(Edge(e.u, e.v, w, w, e.label))
    funnel_off = ne
    s = funnel_off + k
    window = list(range(2 * k))
    for t in range(k):
        v_t = funnel_off + t
        edges.append(Edge(v_t, s, solid, solid, "solid"))
        for w_node in window:
            edges.append(Edge(v_t, w_node, beta, beta, "transit"))
    return GraphInstance(s + 1, tuple(edges))


def forced_orientation_check(ginst: GraphInstance, k: int, alpha: Rational,
                             predicate, node_budget: int = 50_000_000) -> tuple[bool, bool, int]:
    """Whether every alpha-EFkX orientation satisfies a predicate.

    Runs the pruned depth-first enumeration of ``exists_efkx_orientation``
    but visits every witness instead of stopping at the first.  Returns
    (all witnesses satisfy predicate, search exhausted, witness count);
    when the search-node budget runs out the verdict covers only the
    witnesses seen so far and ``exhausted`` is False.
    """
    alpha = as_rational(alpha)
    inst = to_instance(ginst)
    order = _search_order(ginst)
    incident = [[] for _ in range(ginst.n)]
    for g, e in enumerate(ginst.edges):
        incident[e.u].append(g)
        incident[e.v].append(g)
    pos = {g: t for t, g in enumerate(order)}
    closed_at = [max((pos[g] for g in incident[i]), default=-1) for i in range(ginst.n)]
    checks_at: list[list[tuple[int, int]]] = [[] for _ in range(ginst.m)]
    for i in range(ginst.n):
        for j in range(ginst.n):
            if i != j:
                step = max(closed_at[i], closed_at[j])
                if step >= 0:
                    checks_at[step].append((i, j))

    bundles = [set() for _ in range(ginst.n)]
    receivers = [0] * ginst.m
    state = {"nodes": 0, "witnesses": 0, "all_ok": True, "exhausted": True}

    def ok(i: int, j: int) -> bool:
        return bundle_threshold(inst, i, frozenset(bundles[i]),
                                frozenset(bundles[j]), k) >= alpha

    def dfs(t: int) -> bool:
        state["nodes"] += 1
        if state["nodes"] > node_budget:
            state["exhausted"] = False
            return False
        if t == ginst.m:
            state["witnesses"] += 1
            if not predicate(Orientation(tuple(receivers))):
                state["all_ok"] = False
                return False
            return True
        g = order[t]
        e = ginst.edges[g]
        for r in (e.u, e.v):
            receivers[g] = r
            bundles[r].add(g)
            keep = True
            if all(ok(i, j) for i, j in checks_at[t]):
                keep = dfs(t + 1)
            bundles[r].discard(g)
            if not keep:
                return False
        return True

    dfs(0)
    return state["all_ok"], state["exhausted"], state["witnesses"]


def hardness_reduce(base: GraphInstance, k: int) -> GraphInstance:
    """Attach the envy-enhancer and funnel gadgets to a base graph.

    The enhancer is the heavy/light complete graph on 4(k-1)+2 nodes with
    heavy value raised to |N_e| + beta + 1; the funnel adds nodes v_1..v_k
    plus a hub s, solid edges (v_i, s) of value k*beta + 1, and transit
    edges of value beta from every v_i to a shared window of the first 2k
    enhancer cycle nodes; connecting edges of value delta run from s to
    every base node of degree above k-1.
    """
    if k < 2:
        raise InputError("the reduction is defined for k >= 2")
    delta = compute_delta(base)
    enhancer = counterexample_family(k - 1)
    ne = enhancer.n  # 4(k-1)+2
    beta = Fraction(ne + 2)  # smallest integer above |N_e| + 1
    heavy = Fraction(ne) + beta + 1
    solid = k * beta + 1

    off = base.n  # enhancer nodes shifted past the base
    edges = list(base.edges)
    for e in enhancer.edges:
        w = heavy if e.label == "heavy" else e.wu
        edges.append(Edge(e.u + off, e.v + off, w, w, e.label))
    funnel_off = off + ne
    s = funnel_off + k
    window = [off + t for t in range(2 * k)]  # first 2k enhancer cycle nodes
    for t in range(k):
        v_t = funnel_off + t
        edges.append(Edge(v_t, s, solid, solid, "solid"))
        for w_node in window:
            edges.append(Edge(v_t, w_node, beta, beta, "transit"))
    for i in range(base.n):
        if base.degree(i) > k - 1:
            edges.append(Edge(s, i, delta, delta, "connecting"))
    return GraphInstance(s + 1, tuple(edges))
