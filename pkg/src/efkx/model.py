"""Fair-division instances and (partial) allocations with exact arithmetic.

All values are `fractions.Fraction`; the algorithms branch on strict
inequalities, so floating point is never used in the core.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError

Rational = Fraction


def as_rational(x) -> Fraction:
    """Promote an int, "p/q" string or Fraction to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise InputError("floating-point values are not admitted; use ints or 'p/q' strings")
    raise InputError(f"cannot interpret {x!r} as a rational value")


@dataclass(frozen=True)
class Instance:
    """n agents, m goods, and an n-by-m matrix of non-negative exact values."""

    values: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.values:
            raise InputError("instance needs at least one agent")
        widths = {len(row) for row in self.values}
        if len(widths) > 1:
            raise InputError("value rows have unequal lengths")
        for row in self.values:
            for v in row:
                if v < 0:
                    raise InputError("good values must be non-negative")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "Instance":
        return cls(tuple(tuple(as_rational(v) for v in row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def m(self) -> int:
        return len(self.values[0])

    def value(self, agent: int, good: int) -> Fraction:
        return self.values[agent][good]


@dataclass(frozen=True)
class Allocation:
    """Pairwise-disjoint bundles plus the pool of unallocated goods.

    The partition invariant (bundles disjoint, bundles + pool = all goods)
    is checked on construction, so every algorithm step that builds a new
    Allocation re-certifies it.
    """

    bundles: tuple[frozenset[int], ...]
    pool: frozenset[int]

    def __post_init__(self):
        seen: set[int] = set()
        total = 0
        for b in self.bundles:
            total += len(b)
            seen |= b
        if len(seen) != total:
            raise InputError("bundles are not pairwise disjoint")
        if seen & self.pool:
            raise InputError("pool overlaps an allocated bundle")

    @classmethod
    def make(cls, bundles: Sequence[Iterable[int]], m: int) -> "Allocation":
        """Build an allocation over goods 0..m-1, deriving the pool."""
        bs = tuple(frozenset(b) for b in bundles)
        allocated = frozenset().union(*bs) if bs else frozenset()
        if allocated and (min(allocated) < 0 or max(allocated) >= m):
            raise InputError("good index out of range")
        return cls(bs, frozenset(range(m)) - allocated)

    @classmethod
    def empty(cls, n: int, m: int) -> "Allocation":
        return cls(tuple(frozenset() for _ in range(n)), frozenset(range(m)))

    @property
    def n(self) -> int:
        return len(self.bundles)

    def goods_count(self) -> int:
        return sum(len(b) for b in self.bundles) + len(self.pool)

    def is_full(self) -> bool:
        return not self.pool

    def replace(self, updates: dict[int, frozenset[int]], pool: frozenset[int] | None = None) -> "Allocation":
        """Return a copy with some bundles (and optionally the pool) swapped out."""
        bundles = tuple(updates.get(i, b) for i, b in enumerate(self.bundles))
        return Allocation(bundles, self.pool if pool is None else pool)


def _check_agent(inst: Instance, agent: int) -> None:
    if not 0 <= agent < inst.n:
        raise InputError(f"agent index {agent} out of range")


def _check_goods(inst: Instance, goods: Iterable[int]) -> None:
    for g in goods:
        if not 0 <= g < inst.m:
            raise InputError(f"good index {g} out of range")


def value_of(inst: Instance, agent: int, goods: Iterable[int]) -> Fraction:
    """Exact additive value of a good set for an agent; empty set is 0."""
    _check_agent(inst, agent)
    goods = tuple(goods)
    _check_goods(inst, goods)
    row = inst.values[agent]
    return sum((row[g] for g in goods), Fraction(0))


def cheapest_subset(inst: Instance, agent: int, goods: Iterable[int], k: int) -> frozenset[int]:
    """The min(k, |goods|) goods of minimum value for `agent`.

    Ties break toward the lower good index, so the result is deterministic.
    """
    _check_agent(inst, agent)
    if k < 0:
        raise InputError("k must be non-negative")
    goods = sorted(goods)
    _check_goods(inst, goods)
    row = inst.values[agent]
    ranked = sorted(goods, key=lambda g: (row[g], g))
    return frozenset(ranked[: min(k, len(ranked))])


def top_subset(inst: Instance, agent: int, goods: Iterable[int], k: int) -> frozenset[int]:
    """The min(k, |goods|) goods of maximum value; ties toward lower index."""
    _check_agent(inst, agent)
    if k < 0:
        raise InputError("k must be non-negative")
    goods = sorted(goods)
    _check_goods(inst, goods)
    row = inst.values[agent]
    ranked = sorted(goods, key=lambda g: (-row[g], g))
    return frozenset(ranked[: min(k, len(ranked))])
