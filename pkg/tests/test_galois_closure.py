"""
Unit tests for arity-bounded closure generation, membership, image sets, closure checks and
the separating-system construction (modules/galois/closure.py).
"""
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from modules.galois.caps import Caps
from modules.galois.closure import (
    contains,
    fragment_from_ops,
    generate,
    image_set,
    is_closed,
    min_arity,
    separating_system,
)
from modules.galois.domain_core import FiniteDomain, Matrix, Operation, all_rows_matrix, projection, projections
from modules.galois.errors import InputError, LogicError, ResourceCapError
from modules.galois.linear_terms import mu
from modules.galois.preservation import preserves_system
from modules.galois.systems import is_valid

BOOL = FiniteDomain(2)
AND = Operation.from_values(BOOL, 2, [0, 0, 0, 1])
XOR = Operation.from_values(BOOL, 2, [0, 1, 1, 0])
MU3 = mu(3, BOOL)
MU4 = mu(4, BOOL)


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------
def test_projections_alone_are_closed():
    fragment = generate({}, 3, BOOL)
    for n in (1, 2, 3):
        assert fragment.members_of_arity(n) == frozenset(projections(n, BOOL))
    assert len(fragment) == 6


def test_no_generators_no_projections_is_empty():
    fragment = generate({}, 3, BOOL, with_projections=False)
    assert len(fragment) == 0
    with pytest.raises(LogicError):
        min_arity(fragment)


def test_mu3_adds_no_binary_operation_without_delta():
    fragment = generate({"mu3": MU3}, 2, BOOL)
    assert fragment.members_of_arity(2) == frozenset(projections(2, BOOL))
    assert fragment.members_of_arity(1) == frozenset(projections(1, BOOL))


def test_delta_reaches_xor_from_mu3():
    fragment = generate({"mu3": MU3}, 3, BOOL, with_delta=True)
    assert XOR in fragment.members_of_arity(2)


def test_mu3_fragment_of_arity_three():
    fragment = generate({"mu3": MU3}, 3, BOOL)
    assert fragment.members_of_arity(3) == frozenset(projections(3, BOOL)) | {MU3}


def test_generators_above_the_bound_are_dropped_without_delta():
    fragment = generate({"mu3": MU3}, 2, BOOL, with_projections=False)
    assert len(fragment) == 0
    with_wide = generate({"mu3": MU3, "and": AND}, 2, BOOL)
    assert with_wide.members == generate({"and": AND}, 2, BOOL).members


def test_generators_are_checked():
    with pytest.raises(InputError):
        generate({"mu3": MU3}, 2, BOOL, with_delta=True)
    with pytest.raises(InputError):
        generate([projection(1, 1, FiniteDomain(3))], 2, BOOL)
    with pytest.raises(InputError):
        generate({}, 0, BOOL)


def test_closure_member_cap():
    with pytest.raises(ResourceCapError):
        generate({"and": AND}, 4, BOOL, caps=Caps(closure_members=5))


def test_sequence_generators_get_default_names():
    fragment = generate([AND], 2, BOOL)
    assert fragment.name_of(AND) == "g0"
    assert fragment.name_of(projection(2, 2, BOOL)) == "e2_2"


def test_generated_fragment_is_closed():
    fragment = generate({"and": AND}, 3, BOOL)
    assert is_closed(fragment.all_members(), 3).closed


@pytest.mark.parametrize("generators", [{}, {"and": AND}, {"xor": XOR}, {"mu3": MU3}])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_bound_n_is_the_slice_of_bound_n_plus_one(generators, n):
    low = generate(generators, n, BOOL)
    high = generate(generators, n + 1, BOOL)
    for a in range(1, n + 1):
        assert low.members_of_arity(a) == high.members_of_arity(a)


def test_generate_is_monotone_in_the_generators():
    small = generate({"and": AND}, 3, BOOL)
    large = generate({"and": AND, "xor": XOR}, 3, BOOL)
    for a in (1, 2, 3):
        assert small.members_of_arity(a) <= large.members_of_arity(a)
    assert XOR in large.members_of_arity(2) and XOR not in small.members_of_arity(2)


# ---------------------------------------------------------------------------
# Membership and minimal arity
# ---------------------------------------------------------------------------
def test_mu4_is_not_generated_by_mu3():
    without = generate({"mu3": MU3}, 4, BOOL)
    assert not contains(without, MU4)
    both = generate({"mu3": MU3, "mu4": MU4}, 4, BOOL)
    assert contains(both, MU3) and contains(both, MU4)


def test_contains_generator_and_arity_bound():
    fragment = generate({"and": AND}, 2, BOOL)
    assert contains(fragment, AND)
    with pytest.raises(InputError):
        contains(fragment, MU3)


@pytest.mark.parametrize("generators,projections_on,expected", [
    ({}, True, 1),
    ({"mu3": MU3}, False, 3),
    ({"and": AND}, False, 2),
])
def test_min_arity(generators, projections_on, expected):
    assert min_arity(generate(generators, 3, BOOL, with_projections=projections_on)) == expected


# ---------------------------------------------------------------------------
# Image sets
# ---------------------------------------------------------------------------
def test_projection_images_are_the_columns():
    fragment = generate({}, 3, BOOL)
    matrix = Matrix(BOOL, 2, ((0, 1), (1, 1), (0, 0)))
    assert image_set(fragment, matrix) == frozenset(matrix.columns)
    single = Matrix(BOOL, 2, ((1, 0),))
    assert image_set(fragment, single) == {(1, 0)}


def test_mu3_images_over_all_rows():
    fragment = generate({"mu3": MU3}, 3, BOOL)
    images = image_set(fragment, all_rows_matrix(3, BOOL))
    assert (0, 1, 1, 1, 1, 1, 1, 0) in images
    assert set(all_rows_matrix(3, BOOL).columns) <= images
    assert len(images) == 4


def test_image_set_column_bound():
    fragment = generate({}, 2, BOOL)
    with pytest.raises(InputError):
        image_set(fragment, all_rows_matrix(3, BOOL))


# ---------------------------------------------------------------------------
# Closure checks
# ---------------------------------------------------------------------------
def test_is_closed_reports_missing_derivation():
    report = is_closed([projection(2, 1, BOOL)], 2)
    assert not report.closed
    assert report.witness == projection(2, 2, BOOL)
    assert is_closed([], 3).closed


def test_fragment_from_ops():
    ops = list(projections(1, BOOL)) + list(projections(2, BOOL))
    fragment = fragment_from_ops(ops, 2)
    assert fragment.with_projections
    assert len(fragment) == 3
    with pytest.raises(LogicError):
        fragment_from_ops([projection(2, 1, BOOL)], 2)


# ---------------------------------------------------------------------------
# Separating systems
# ---------------------------------------------------------------------------
def test_separating_and_from_projections():
    fragment = generate({}, 3, BOOL)
    system = separating_system(fragment, AND)
    assert system.arity == 4 and system.breadth == 2
    assert is_valid(system)
    assert all(preserves_system(f, system) for f in fragment.all_members())
    assert not preserves_system(AND, system)


def test_separating_xor_from_and_clone():
    fragment = generate({"and": AND}, 2, BOOL)
    system = separating_system(fragment, XOR)
    assert not preserves_system(XOR, system)
    assert preserves_system(AND, system)


def test_separating_from_empty_fragment():
    fragment = generate({}, 2, BOOL, with_projections=False)
    system = separating_system(fragment, projection(1, 1, BOOL))
    assert not preserves_system(projection(1, 1, BOOL), system)


def test_separating_a_member_is_a_logic_error():
    with pytest.raises(LogicError):
        separating_system(generate({}, 3, BOOL), projection(2, 1, BOOL))


def test_separating_respects_arity_and_row_caps():
    with pytest.raises(InputError):
        separating_system(generate({}, 2, BOOL), MU3)
    with pytest.raises(ResourceCapError):
        separating_system(generate({}, 3, BOOL), MU3, caps=Caps(separation_rows=4))


@pytest.mark.slow
def test_separating_mu4_from_mu3_clone():
    fragment = generate({"mu3": MU3}, 4, BOOL)
    system = separating_system(fragment, MU4)
    assert system.arity == 16 and system.breadth == 4
    assert not preserves_system(MU4, system)
