"""
Unit tests for relation and system preservation, violation witnesses, the characterization
queries and the dividend decomposition (modules/galois/preservation.py).
"""
import itertools
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from modules.galois.caps import Caps
from modules.galois.closure import is_closed
from modules.galois.domain_core import FiniteDomain, Operation, enumerate_operations, projection, projections
from modules.galois.errors import InputError, ResourceCapError
from modules.galois.multisets import Multiset, PointedMultiset
from modules.galois.preservation import (
    Relation,
    all_preserve,
    characterized_ops,
    characterizing_family,
    preserves_relation,
    preserves_system,
    preserves_via_quotients,
    violation,
)
from modules.galois.systems import (
    arity_floor_system,
    empty_system,
    enumerate_systems,
    equality_system,
    from_relation,
    trivial,
)

BOOL = FiniteDomain(2)
AND = Operation.from_values(BOOL, 2, [0, 0, 0, 1])
OR = Operation.from_values(BOOL, 2, [0, 1, 1, 1])
NOT = Operation.from_values(BOOL, 1, [1, 0])
IDENTITY = projection(1, 1, BOOL)
LE = Relation.from_tuples(BOOL, 2, [(0, 0), (0, 1), (1, 1)])
NEQ = Relation.from_tuples(BOOL, 2, [(0, 1), (1, 0)])
EXAMPLE_1 = arity_floor_system(2, BOOL)


def small_ops(max_arity=2):
    return [f for n in range(1, max_arity + 1) for f in enumerate_operations(BOOL, n)]


# ---------------------------------------------------------------------------
# Relations
# ---------------------------------------------------------------------------
def test_relation_from_tuples():
    assert LE.sorted_tuples() == [(0, 0), (0, 1), (1, 1)]
    with pytest.raises(InputError):
        Relation.from_tuples(BOOL, 2, [(0, 1, 1)])


def test_projections_preserve_every_relation():
    for r in (LE, NEQ, Relation(BOOL, 2)):
        assert all(preserves_relation(e, r) for e in projections(3, BOOL))


def test_and_against_small_relations():
    # rows (0,1),(1,0) -> AND gives (0,0)
    assert not preserves_relation(AND, NEQ)
    assert preserves_relation(AND, LE)
    assert preserves_relation(NOT, NEQ)
    assert not preserves_relation(NOT, LE)


def test_relation_matrix_cap():
    with pytest.raises(ResourceCapError):
        preserves_relation(AND, LE, Caps(relation_matrices=8))


# ---------------------------------------------------------------------------
# Systems
# ---------------------------------------------------------------------------
def test_arity_floor_separates_unary_from_binary():
    assert not preserves_system(IDENTITY, EXAMPLE_1)
    assert all(preserves_system(f, EXAMPLE_1) for f in enumerate_operations(BOOL, 2))


def test_violation_witness():
    witness = violation(IDENTITY, EXAMPLE_1)
    assert witness is not None
    assert witness.member == Multiset.from_points(1, [0])
    assert witness.columns == (0,) and witness.image == 0
    assert witness.remainder == Multiset.empty(1)
    assert violation(AND, EXAMPLE_1) is None


def test_empty_system_is_preserved_by_everything():
    for m in (1, 2):
        assert all_preserve(small_ops(), empty_system(m, BOOL, 3))


def test_trivial_is_preserved_up_to_its_breadth():
    assert all_preserve(small_ops(), trivial(1, 2, BOOL))
    assert all_preserve(small_ops(), trivial(2, 2, BOOL))


def test_projections_preserve_equality():
    for m in (1, 2):
        for breadth in (0, 1, 2, 3):
            assert all_preserve(projections(1, BOOL) + projections(2, BOOL),
                                equality_system(m, breadth, BOOL))


def test_all_preserve_edge_cases():
    assert all_preserve([], EXAMPLE_1)
    assert all_preserve([AND], EXAMPLE_1)
    assert not all_preserve([AND, IDENTITY], EXAMPLE_1)


def test_relation_system_agrees_with_relation():
    for r in (LE, NEQ, Relation.from_tuples(BOOL, 2, [(1, 1)])):
        system = from_relation(r, 3)
        for f in small_ops():
            assert preserves_relation(f, r) == preserves_system(f, system)


def test_domain_mismatch():
    with pytest.raises(InputError):
        preserves_system(projection(1, 1, FiniteDomain(3)), EXAMPLE_1)


# ---------------------------------------------------------------------------
# Characterization
# ---------------------------------------------------------------------------
def test_characterize_empty_system_gives_everything():
    assert len(characterized_ops([empty_system(1, BOOL)], 2)) == 4 + 16


def test_characterize_example_1():
    found = characterized_ops([EXAMPLE_1], 2)
    assert len(found) == 16
    assert {f.arity for f in found} == {2}
    assert found == sorted(found, key=Operation.sort_key)


def test_characterize_relation_system_matches_polymorphisms():
    found = characterized_ops([from_relation(LE, 3)], 2)
    assert found == [f for f in small_ops() if preserves_relation(f, LE)]


def test_characterize_needs_a_domain():
    with pytest.raises(InputError):
        characterized_ops([], 2)
    assert len(characterized_ops([], 1, BOOL)) == 4


def test_characterizing_family_gives_monotone_binary_operations():
    family = characterizing_family([LE], 2, 3)
    assert len(family) == 2
    found = characterized_ops(family, 2)
    # the six monotone binary Boolean functions
    assert len(found) == 6
    assert all(f.arity == 2 for f in found)
    assert AND in found and OR in found


# ---------------------------------------------------------------------------
# Dividend decomposition
# ---------------------------------------------------------------------------
def test_preservation_through_quotients_agrees():
    for system in (trivial(1, 2, BOOL), from_relation(Relation(BOOL, 1, frozenset([0, 1])), 3)):
        for f in small_ops():
            for p in (0, 1, 2):
                assert preserves_via_quotients(f, system, p) == preserves_system(f, system)


def test_quotient_decomposition_requires_trivial_part():
    with pytest.raises(InputError):
        preserves_via_quotients(AND, empty_system(1, BOOL, 1), 1)


# ---------------------------------------------------------------------------
# Monotonicity and closure of characterized sets
# ---------------------------------------------------------------------------
@pytest.mark.parametrize("breadth", [1, 2])
def test_shrinking_ante_and_growing_cons_keeps_preservation(breadth):
    ops = small_ops()
    systems = list(enumerate_systems(1, breadth, BOOL))
    verdicts = {s: frozenset(f for f in ops if preserves_system(f, s)) for s in systems}
    for s, t in itertools.product(systems, repeat=2):
        if t.ante <= s.ante and t.cons >= s.cons:
            assert verdicts[s] <= verdicts[t]


def test_violation_pointed_member_is_missing():
    witness = violation(IDENTITY, EXAMPLE_1)
    assert witness.pointed == PointedMultiset(0, Multiset.empty(1))
    assert witness.pointed not in EXAMPLE_1.cons


@pytest.mark.parametrize("systems", [
    [arity_floor_system(2, BOOL)],
    [arity_floor_system(3, BOOL)],
    [from_relation(LE, 4)],
])
def test_characterized_sets_are_closed(systems):
    ops = characterized_ops(systems, 3)
    assert ops
    report = is_closed(ops, 3)
    assert report.closed, report.reason
