from fractions import Fraction

import pytest

from efkx.errors import InputError
from efkx.model import (Allocation, Instance, as_rational, cheapest_subset,
                        top_subset, value_of)


def test_as_rational_accepts_ints_and_strings():
    assert as_rational(3) == Fraction(3)
    assert as_rational("2/5") == Fraction(2, 5)
    assert as_rational(Fraction(1, 7)) == Fraction(1, 7)


def test_as_rational_rejects_floats():
    with pytest.raises(InputError):
        as_rational(0.5)


def test_instance_shape_and_values():
    inst = Instance.from_rows([[1, 2, 3], [4, 5, 6]])
    assert (inst.n, inst.m) == (2, 3)
    assert inst.value(1, 2) == 6


def test_instance_rejects_ragged_rows():
    with pytest.raises(InputError):
        Instance.from_rows([[1, 2], [3]])


def test_instance_rejects_negative_values():
    with pytest.raises(InputError):
        Instance.from_rows([[1, -2]])


def test_allocation_partition_invariant():
    with pytest.raises(InputError):
        Allocation((frozenset({0, 1}), frozenset({1})), frozenset())
    with pytest.raises(InputError):
        Allocation((frozenset({0}),), frozenset({0}))


def test_allocation_make_derives_pool():
    alloc = Allocation.make([{0}, {2}], 4)
    assert alloc.pool == frozenset({1, 3})
    assert not alloc.is_full()
    assert Allocation.make([{0, 1}, {2, 3}], 4).is_full()


def test_allocation_replace_swaps_bundles():
    alloc = Allocation.make([{0}, {1}], 3)
    swapped = alloc.replace({0: frozenset({2})}, pool=frozenset({0}))
    assert swapped.bundles[0] == frozenset({2})
    assert swapped.pool == frozenset({0})


def test_value_of_is_additive():
    inst = Instance.from_rows([[1, 2, 4]])
    assert value_of(inst, 0, {0, 2}) == 5
    assert value_of(inst, 0, ()) == 0


def test_cheapest_and_top_subsets_break_ties_by_index():
    inst = Instance.from_rows([[5, 1, 1, 5]])
    assert cheapest_subset(inst, 0, {0, 1, 2, 3}, 2) == frozenset({1, 2})
    assert top_subset(inst, 0, {0, 1, 2, 3}, 2) == frozenset({0, 3})
    # k larger than the set takes everything
    assert cheapest_subset(inst, 0, {1, 2}, 5) == frozenset({1, 2})
