"""
Unit tests for terms, linearity, evaluation, linear term enumeration, saturation and the
mu_n family (modules/galois/linear_terms.py).
"""
import itertools
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from modules.galois.caps import Caps
from modules.galois.closure import contains, generate
from modules.galois.domain_core import FiniteDomain, Operation, all_tuples, nabla, projection, projections
from modules.galois.errors import InputError, ResourceCapError
from modules.galois.linear_terms import (
    Apply,
    Signature,
    Var,
    complexity,
    eval_term,
    format_term,
    is_linear,
    linear_term_ops,
    linear_term_witnesses,
    linear_terms,
    mu,
    parse_term,
    saturate,
    variables,
)

BOOL = FiniteDomain(2)
MU3 = mu(3, BOOL)
AND = Operation.from_values(BOOL, 2, [0, 0, 0, 1])


def f(*args):
    return Apply("f", tuple(args))


# ---------------------------------------------------------------------------
# mu_n
# ---------------------------------------------------------------------------
def test_mu3_table():
    assert MU3.table_string() == "01111110"


def test_mu4_table_matches_popcount():
    table = mu(4, BOOL).table_string()
    assert table == "0110100110010110"
    expected = "".join("1" if sum(t) in (1, 3) else "0" for t in all_tuples(4, BOOL))
    assert table == expected


def test_mu_is_zero_off_the_boolean_cube():
    mu3 = mu(3, FiniteDomain(3))
    for t in all_tuples(3, FiniteDomain(3)):
        if 2 in t:
            assert mu3(*t) == 0
    assert mu3(1, 0, 0) == 1 and mu3(1, 1, 0) == 1 and mu3(1, 1, 1) == 0


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_mu_on_unit_vectors(n):
    f = mu(n, BOOL)
    assert f(*([0] * n)) == 0
    assert f(*([1] + [0] * (n - 1))) == 1


def test_mu4_is_totally_symmetric():
    mu4 = mu(4, BOOL)
    for t in all_tuples(4, BOOL):
        for perm in itertools.permutations(range(4)):
            assert mu4(*(t[i] for i in perm)) == mu4(*t)


@pytest.mark.parametrize("included", [(3,), (4,), (3, 4)])
def test_mu_family_membership_at_arity_four(included):
    fragment = generate({f"mu{i}": mu(i, BOOL) for i in included}, 4, BOOL)
    for k in (3, 4):
        assert contains(fragment, mu(k, BOOL)) == (k in included)


def test_mu_argument_checks():
    with pytest.raises(InputError):
        mu(2, BOOL)
    with pytest.raises(InputError):
        mu(3, FiniteDomain(1))


# ---------------------------------------------------------------------------
# Term predicates and text form
# ---------------------------------------------------------------------------
def test_linearity():
    assert is_linear(Var(1))
    assert is_linear(f(Var(1), Var(2), Var(3)))
    assert not is_linear(f(Var(1), Var(1), Var(2)))
    assert variables(f(Var(2), Apply("g", (Var(1),)))) == [2, 1]


def test_complexity():
    assert complexity(Var(1)) == 0
    assert complexity(f(Var(1), Var(2))) == 1
    assert complexity(f(Apply("g", (Var(1),)), Var(2))) == 2


def test_variable_indices_start_at_one():
    with pytest.raises(InputError):
        Var(0)


def test_parse_and_format_terms():
    text = "f(x1,g(x2),x3)"
    term = parse_term(text)
    assert term == f(Var(1), Apply("g", (Var(2),)), Var(3))
    assert format_term(term) == text
    assert parse_term(" f( x1 , x2 ) ") == f(Var(1), Var(2))


@pytest.mark.parametrize("text", ["f(x1", "y", "f(x1))", "x0", "f(,x1)"])
def test_parse_term_rejects_malformed_text(text):
    with pytest.raises(InputError):
        parse_term(text)


def test_signature_checks():
    with pytest.raises(InputError):
        Signature((("f", 2), ("f", 3)))
    with pytest.raises(InputError):
        Signature((("f", 0),))
    assert Signature.from_assignment({"and": AND}).arity_of("and") == 2


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------
def test_variable_evaluates_to_projection():
    for i in (1, 2, 3):
        assert eval_term(Var(i), {}, 3, BOOL) == projection(3, i, BOOL)


def test_symbol_evaluates_to_its_operation():
    assert eval_term(f(Var(1), Var(2), Var(3)), {"f": MU3}, 3, BOOL) == MU3
    assert eval_term(f(Var(2), Var(3), Var(4)), {"f": MU3}, 4, BOOL) == nabla(MU3)


def test_nested_evaluation():
    term = Apply("and", (Apply("and", (Var(1), Var(2))), Var(3)))
    result = eval_term(term, {"and": AND}, 3, BOOL)
    assert result.table_string() == "00000001"


def test_eval_checks_arities():
    with pytest.raises(InputError):
        eval_term(Var(4), {}, 3, BOOL)
    with pytest.raises(InputError):
        eval_term(f(Var(1), Var(2)), {"f": MU3}, 3, BOOL)
    with pytest.raises(InputError):
        eval_term(Apply("g", (Var(1),)), {"f": MU3}, 3, BOOL)


# ---------------------------------------------------------------------------
# Linear term enumeration
# ---------------------------------------------------------------------------
def test_complexity_zero_gives_the_projections():
    signature = Signature((("f", 3),))
    assert list(linear_terms(signature, 3, 0)) == [Var(1), Var(2), Var(3)]
    assert linear_term_ops({"f": MU3}, 3, 0, BOOL) == frozenset(projections(3, BOOL))


def test_enumerated_terms_are_linear():
    signature = Signature((("f", 2), ("g", 1)))
    terms = list(linear_terms(signature, 3, 3))
    assert terms
    assert all(is_linear(t) for t in terms)
    assert all(complexity(t) <= 3 for t in terms)
    assert len(set(terms)) == len(terms)


def test_mu3_complexity_one_adds_only_mu3():
    assert linear_term_ops({"mu3": MU3}, 3, 1, BOOL) == frozenset(projections(3, BOOL)) | {MU3}


@pytest.mark.parametrize("n,expected", [(1, 1), (2, 2), (3, 4)])
def test_linear_term_ops_equal_generated_fragment(n, expected):
    fragment = generate({"mu3": MU3}, 3, BOOL)
    ops = linear_term_ops({"mu3": MU3}, n, 4, BOOL)
    assert ops == fragment.members_of_arity(n)
    assert len(ops) == expected


def test_witnesses_keep_the_first_term():
    witnesses = linear_term_witnesses({"mu3": MU3}, 3, 1, BOOL)
    assert witnesses[MU3] == Apply("mu3", (Var(1), Var(2), Var(3)))
    assert witnesses[projection(3, 2, BOOL)] == Var(2)


def test_saturation():
    c, ops = saturate({"mu3": MU3}, 3, BOOL)
    assert c == 1
    assert ops == frozenset(projections(3, BOOL)) | {MU3}


def test_saturation_for_and():
    c, ops = saturate({"and": AND}, 3, BOOL)
    assert ops == generate({"and": AND}, 3, BOOL).members_of_arity(3)


def test_term_caps():
    with pytest.raises(ResourceCapError):
        list(linear_terms(Signature((("f", 3),)), 3, 0, Caps(term_enumeration=2)))
    with pytest.raises(ResourceCapError):
        saturate({"and": AND}, 3, BOOL, caps=Caps(term_complexity=0))
