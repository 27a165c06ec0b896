"""
Unit tests for multisets, pointed multisets and the submultiset / partition / arrangement
enumerations (modules/galois/multisets.py).
"""
import itertools
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from modules.galois.domain_core import FiniteDomain, Matrix, rank
from modules.galois.errors import InputError
from modules.galois.multisets import (
    Multiset,
    PointedMultiset,
    bounded_count,
    columns_multiset,
    difference,
    enumerate_arrangements,
    enumerate_bounded,
    enumerate_partitions,
    enumerate_submultisets,
    is_submultiset,
    join,
    pointed_decompositions,
)

BOOL = FiniteDomain(2)


def ms(*points, arity=1):
    return Multiset.from_points(arity, points)


EPS = Multiset.empty(1)


# ---------------------------------------------------------------------------
# Values
# ---------------------------------------------------------------------------
def test_multiset_counts_and_points():
    s = ms(1, 0, 1)
    assert s.entries == ((0, 1), (1, 2))
    assert s.cardinality == len(s) == 3
    assert s.points() == (0, 1, 1)
    assert s.support == (0, 1)
    assert s.multiplicity(1) == 2 and s.multiplicity(5) == 0
    assert not EPS and s


def test_multiset_entries_must_be_ascending_and_positive():
    with pytest.raises(InputError):
        Multiset(1, ((1, 1), (0, 1)))
    with pytest.raises(InputError):
        Multiset(1, ((0, 0),))


def test_equal_multisets_hash_alike():
    assert ms(0, 1, 1) == ms(1, 0, 1)
    assert len({ms(0, 1, 1), ms(1, 1, 0)}) == 1


def test_pointed_multiset_underlying():
    pm = PointedMultiset(1, ms(0, 1))
    assert pm.cardinality == 3
    assert pm.underlying() == ms(0, 1, 1)
    assert PointedMultiset(0, EPS).underlying() == ms(0)


# ---------------------------------------------------------------------------
# Join, difference, inclusion
# ---------------------------------------------------------------------------
def test_join():
    assert join(ms(0), EPS) == ms(0)
    assert join(ms(0), ms(0)) == ms(0, 0)
    assert join(ms(0, 1), ms(1, 2)) == ms(0, 1, 1, 2)


def test_difference_truncates_at_zero():
    assert difference(ms(0, 0, 1), ms(0)) == ms(0, 1)
    assert difference(ms(0), ms(0, 0)) == EPS
    assert difference(ms(0, 1), EPS) == ms(0, 1)


def test_is_submultiset():
    assert is_submultiset(EPS, ms(0, 1))
    assert not is_submultiset(ms(0, 0), ms(0))
    assert is_submultiset(ms(0, 1), ms(0, 1, 1))


def test_universe_mismatch_is_an_input_error():
    with pytest.raises(InputError):
        join(ms(0), ms(0, arity=2))
    with pytest.raises(InputError):
        is_submultiset(ms(0), ms(0, arity=2))


SMALL = list(enumerate_bounded(2, range(3), 2))


def test_join_is_commutative_and_associative():
    for s, t in itertools.product(SMALL, repeat=2):
        assert join(s, t) == join(t, s)
    for s, t, u in itertools.product(SMALL, repeat=3):
        assert join(join(s, t), u) == join(s, join(t, u))


def test_difference_cancels_join():
    for s, t in itertools.product(SMALL, repeat=2):
        assert difference(join(s, t), t) == s
        assert is_submultiset(t, join(s, t))


def test_submultiset_is_a_partial_order():
    for s in SMALL:
        assert is_submultiset(s, s)
    for s, t in itertools.product(SMALL, repeat=2):
        if is_submultiset(s, t) and is_submultiset(t, s):
            assert s == t
    for s, t, u in itertools.product(SMALL, repeat=3):
        if is_submultiset(s, t) and is_submultiset(t, u):
            assert is_submultiset(s, u)


def test_columns_multiset():
    assert columns_multiset(Matrix(BOOL, 2)) == Multiset.empty(2)
    assert columns_multiset(Matrix(BOOL, 2, ((0, 1), (0, 1)))) == Multiset(2, ((1, 2),))
    m = columns_multiset(Matrix(BOOL, 2, ((0, 0), (1, 1), (0, 0))))
    assert m.multiplicity(rank((0, 0), BOOL)) == 2
    assert m.multiplicity(rank((1, 1), BOOL)) == 1


# ---------------------------------------------------------------------------
# Enumerations
# ---------------------------------------------------------------------------
def test_enumerate_submultisets():
    assert enumerate_submultisets(EPS) == [EPS]
    assert enumerate_submultisets(ms(0, 0)) == [EPS, ms(0), ms(0, 0)]
    assert len(enumerate_submultisets(ms(0, 1))) == 4
    assert len(enumerate_submultisets(ms(0, 1, 1))) == 6


def test_enumerate_bounded_matches_count():
    members = list(enumerate_bounded(1, [0, 1], 2))
    assert len(members) == bounded_count(2, 2) == 6
    assert members[0] == EPS
    assert len(set(members)) == len(members)
    assert bounded_count(0, 3) == 1


def test_partitions_of_small_multisets():
    assert enumerate_partitions(EPS) == [()]
    assert enumerate_partitions(ms(0, 1)) == [(ms(0), ms(1)), (ms(0, 1),)]
    assert len(enumerate_partitions(ms(0, 0))) == 2


def test_partitions_of_four_distinct_points_give_bell_number():
    s = ms(0, 1, 2, 3, arity=2)
    parts = enumerate_partitions(s)
    assert len(parts) == 15
    for part in parts:
        assert sum(b.cardinality for b in part) == 4


def test_partitions_with_minimum_block_size():
    # the whole set plus the three pairings
    assert len(enumerate_partitions(ms(0, 1, 2, 3, arity=2), min_block=2)) == 4
    with pytest.raises(InputError):
        enumerate_partitions(ms(0), min_block=0)


def test_arrangements_of_distinct_points():
    assert enumerate_arrangements(ms(0, 1), 1) == [((0,), ms(1)), ((1,), ms(0))]
    assert enumerate_arrangements(ms(0, 1), 2) == [((0, 1), EPS), ((1, 0), EPS)]


def test_arrangements_collapse_identical_columns():
    assert enumerate_arrangements(ms(0, 0), 2) == [((0, 0), EPS)]
    found = enumerate_arrangements(ms(0, 0, 1), 2)
    assert [cols for cols, _ in found] == [(0, 0), (0, 1), (1, 0)]
    assert [rest for _, rest in found] == [ms(1), ms(0), ms(0)]


def test_arrangement_edge_cases():
    assert enumerate_arrangements(ms(0), 2) == []
    assert enumerate_arrangements(ms(0, 1), 0) == [((), ms(0, 1))]
    with pytest.raises(InputError):
        enumerate_arrangements(ms(0), -1)


def test_pointed_decompositions():
    found = pointed_decompositions(ms(0, 0, 1))
    assert found == [PointedMultiset(0, ms(0, 1)), PointedMultiset(1, ms(0, 0))]
    assert pointed_decompositions(EPS) == []


# ---------------------------------------------------------------------------
# Enumerations against brute force, multiplicities <= 2
# ---------------------------------------------------------------------------
def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _partition_oracle(s, min_block=1):
    found = set()
    for part in _set_partitions(list(s.points())):
        if all(len(block) >= min_block for block in part):
            blocks = (Multiset.from_points(s.arity, block) for block in part)
            found.add(tuple(sorted(blocks, key=Multiset.sort_key)))
    return found


LOW_MULTIPLICITY = [
    Multiset.from_counter(2, {0: a, 1: b, 2: c})
    for a, b, c in itertools.product(range(3), repeat=3)
]


@pytest.mark.parametrize("min_block", [1, 2])
def test_partitions_match_brute_force(min_block):
    for s in LOW_MULTIPLICITY:
        parts = enumerate_partitions(s, min_block)
        assert len(parts) == len(set(parts))
        if s:
            assert set(parts) == _partition_oracle(s, min_block)
        for part in parts:
            joined = Multiset.empty(2)
            for block in part:
                assert block.cardinality >= min_block
                joined = join(joined, block)
            assert joined == s


def test_arrangements_rejoin_to_the_multiset():
    for s in LOW_MULTIPLICITY:
        for n in range(s.cardinality + 1):
            found = enumerate_arrangements(s, n)
            assert {cols for cols, _ in found} == set(itertools.permutations(s.points(), n))
            for cols, rest in found:
                assert join(Multiset.from_points(2, cols), rest) == s
