"""Brute-force ground truth for small instances.

Exhaustively enumerates every full allocation of an instance to compute
the best achievable envy-free-up-to-k factor.  This is deliberately
simple -- its only job is to be an independent check on the fast
algorithms, so it must not share any machinery with them beyond the
data model and the verifier.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterator

from .errors import CapabilityError
from .fairness import min_pair_threshold
from .model import Allocation, Instance

DEFAULT_BUDGET = 10**7


def enumerate_full_allocations(inst: Instance,
                               budget: int = DEFAULT_BUDGET) -> Iterator[Allocation]:
    """Yield all n^m full allocations, lexicographic by owner digits.

    The owner string assigns good 0 first; good g's owner is the g-th
    digit.  The pool is always empty.  Raises CapabilityError when the
    count n^m exceeds ``budget``.
    """
    total = inst.n ** inst.m
    if total > budget:
        raise CapabilityError(
            f"{inst.n}^{inst.m} = {total} allocations exceeds budget {budget}")
    for owners in itertools.product(range(inst.n), repeat=inst.m):
        bundles = [[] for _ in range(inst.n)]
        for good, agent in enumerate(owners):
            bundles[agent].append(good)
        yield Allocation.make(bundles, inst.m)


def best_alpha_efkx(inst: Instance, k: int, budget: int = DEFAULT_BUDGET):
    """Max over full allocations of the min pairwise EFkX threshold.

    Returns infinity when some allocation has no binding pair (in
    particular for a single agent).
    """
    best = None
    for alloc in enumerate_full_allocations(inst, budget=budget):
        score = min_pair_threshold(inst, alloc, k)
        if best is None or score > best:
            best = score
        if best == math.inf:
            break
    assert best is not None
    return best


def exists_exact_efkx(inst: Instance, k: int, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff some full allocation is exactly EFkX (factor >= 1)."""
    for alloc in enumerate_full_allocations(inst, budget=budget):
        if min_pair_threshold(inst, alloc, k) >= 1:
            return True
    return False
