"""
Breadth-bounded fragments of systems of pointed multisets and the structural operators on them.

A ``System`` IS the fragment (Φ, Φ′)^(B) of a conceptual system: ``ante`` holds every member of Φ
of cardinality <= B and ``cons`` every member of Φ′ of cardinality <= B. Each operator states the
breadth bound of its output. Construction only checks the structure (arities, rank ranges);
``validate`` checks the two defining conditions and reports the first one that fails.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, FrozenSet, Iterable, Iterator, List, Optional, Sequence

import numpy as np

from .caps import Caps, resolve
from .domain_core import FiniteDomain, rank
from .errors import InputError, InvariantViolation
from .multisets import (
    Multiset,
    PointedMultiset,
    bounded_count,
    difference,
    enumerate_bounded,
    enumerate_submultisets,
    is_submultiset,
    pointed_decompositions,
)

if TYPE_CHECKING:
    from .preservation import Relation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class System:
    domain: FiniteDomain
    arity: int
    breadth: int
    ante: FrozenSet[Multiset] = frozenset()
    cons: FrozenSet[PointedMultiset] = frozenset()

    def __post_init__(self):
        if self.arity < 1:
            raise InputError(f"system arity must be >= 1, got {self.arity}")
        if self.breadth < 0:
            raise InputError(f"breadth bound must be >= 0, got {self.breadth}")
        object.__setattr__(self, "ante", frozenset(self.ante))
        object.__setattr__(self, "cons", frozenset(self.cons))
        limit = self.domain.size ** self.arity
        for s in self.ante:
            _check_multiset(s, self.arity, limit)
        for pm in self.cons:
            _check_multiset(pm.rest, self.arity, limit)
            if not 0 <= pm.point < limit:
                raise InputError(f"point rank {pm.point} out of range for m={self.arity}")

    @property
    def points(self) -> int:
        """|A^m|."""
        return self.domain.size ** self.arity

    def sorted_ante(self) -> List[Multiset]:
        return sorted(self.ante, key=Multiset.sort_key)

    def sorted_cons(self) -> List[PointedMultiset]:
        return sorted(self.cons, key=PointedMultiset.sort_key)

    def __repr__(self) -> str:
        return (f"System(k={self.domain.size}, m={self.arity}, B={self.breadth}, "
                f"|ante|={len(self.ante)}, |cons|={len(self.cons)})")


def _check_multiset(s: Multiset, arity: int, limit: int) -> None:
    if s.arity != arity:
        raise InputError(f"member over A^{s.arity} in a system over A^{arity}")
    if s.entries and s.entries[-1][0] >= limit:
        raise InputError(f"point rank {s.entries[-1][0]} out of range for m={arity}")


@dataclass
class SystemCheck:
    """Outcome of ``validate`` and the closure conditions. ``reason`` names the first failure."""
    valid: bool
    reason: str = ""
    offender: Optional[object] = field(default=None, repr=False)

    def __bool__(self) -> bool:
        return self.valid


def validate(system: System) -> SystemCheck:
    for s in system.sorted_ante():
        if s.cardinality > system.breadth:
            return SystemCheck(False, f"breadth: antecedent member of cardinality "
                                      f"{s.cardinality} exceeds B={system.breadth}", s)
    for pm in system.sorted_cons():
        if pm.cardinality > system.breadth:
            return SystemCheck(False, f"breadth: consequent member of cardinality "
                                      f"{pm.cardinality} exceeds B={system.breadth}", pm)
        if pm.underlying() not in system.ante:
            return SystemCheck(False, "grounding: underlying multiset of a consequent member "
                                      "is not in the antecedent", pm)
        # one removal at a time is enough: the shorter members are checked in turn
        for p in pm.rest.support:
            smaller = PointedMultiset(pm.point, difference(pm.rest, Multiset.from_points(system.arity, [p])))
            if smaller not in system.cons:
                return SystemCheck(False, "downward closure: a consequent member's "
                                          "sub-pointed-multiset is missing", smaller)
    return SystemCheck(True, "ok")


def is_valid(system: System) -> bool:
    return validate(system).valid


def require_valid(system: System) -> System:
    check = validate(system)
    if not check.valid:
        raise InvariantViolation(check.reason, check.offender)
    return system


# ---------------------------------------------------------------------------
# Named constructors
# ---------------------------------------------------------------------------
def _full_over_support(domain: FiniteDomain, m: int, breadth: int, support: Sequence[int],
                       caps: Optional[Caps]) -> System:
    """Every multiset on ``support`` up to the bound, with all of its pointed decompositions."""
    caps = resolve(caps)
    if breadth < 0:
        raise InputError(f"breadth bound must be >= 0, got {breadth}")
    caps.require("fragment_members", bounded_count(len(set(support)), breadth))
    ante = set()
    cons = set()
    for u in enumerate_bounded(m, support, breadth):
        ante.add(u)
        cons.update(pointed_decompositions(u))
    logger.debug("fragment over %d support points at B=%d: |ante|=%d |cons|=%d",
                 len(set(support)), breadth, len(ante), len(cons))
    return System(domain, m, breadth, frozenset(ante), frozenset(cons))


def trivial(m: int, breadth: int, domain: FiniteDomain, caps: Optional[Caps] = None) -> System:
    """Ω_m^(B): every multiset and every pointed multiset of cardinality <= B."""
    if m < 1:
        raise InputError(f"system arity must be >= 1, got {m}")
    return _full_over_support(domain, m, breadth, range(domain.size ** m), caps)


def empty_system(m: int, domain: FiniteDomain, breadth: int = 0) -> System:
    """(∅, ∅); preserved by every operation since no matrix satisfies M ≺ ∅."""
    return System(domain, m, breadth)


def equality_system(m: int, breadth: int, domain: FiniteDomain,
                    caps: Optional[Caps] = None) -> System:
    """E_m: only constant tuples (a, ..., a) may appear."""
    if m < 1:
        raise InputError(f"system arity must be >= 1, got {m}")
    constants = [rank((a,) * m, domain) for a in domain.elements]
    return _full_over_support(domain, m, breadth, constants, caps)


def from_relation(relation: "Relation", breadth: int, caps: Optional[Caps] = None) -> System:
    """(Φ_R, Φ′_R): multisets supported on R, and R × Φ_R, up to the bound.

    ``f ▷ R`` iff ``f`` preserves this system once ``breadth >= arity(f) + 1``.
    """
    return _full_over_support(relation.domain, relation.arity, breadth,
                              sorted(relation.tuples), caps)


def arity_floor_system(p: int, domain: FiniteDomain, breadth: Optional[int] = None) -> System:
    """The unary system ({S}, ∅) with |S| = p-1, characterizing the operations of arity >= p.

    An n-ary f with n <= p-1 can pick n columns out of S and has nowhere to send them; with
    n >= p no M1 fits inside S and the condition is vacuous.
    """
    if p < 1:
        raise InputError(f"arity floor must be >= 1, got {p}")
    bound = p - 1 if breadth is None else max(breadth, p - 1)
    witness = Multiset.from_points(1, [0] * (p - 1))
    return System(domain, 1, bound, frozenset([witness]), frozenset())


# ---------------------------------------------------------------------------
# Structural operators
# ---------------------------------------------------------------------------
def _same_shape(a: System, b: System) -> None:
    if a.domain != b.domain:
        raise InputError(f"systems over k={a.domain.size} and k={b.domain.size} cannot be combined")
    if a.arity != b.arity:
        raise InputError(f"systems of arity {a.arity} and {b.arity} cannot be combined")


def quotient(system: System, s: Multiset) -> System:
    """Φ/S and Φ′/S at breadth B - |S|.

    With |S| > B the fragment cannot witness any member, so the result is (∅, ∅) at breadth 0.
    """
    if s.arity != system.arity:
        raise InputError(f"cannot divide a system over A^{system.arity} by a multiset over A^{s.arity}")
    bound = system.breadth - s.cardinality
    if bound < 0:
        return System(system.domain, system.arity, 0)
    ante = frozenset(difference(u, s) for u in system.ante if is_submultiset(s, u))
    cons = frozenset(PointedMultiset(pm.point, difference(pm.rest, s))
                     for pm in system.cons if is_submultiset(s, pm.rest))
    return System(system.domain, system.arity, bound, ante, cons)


def breadth_restrict(system: System, p: int) -> System:
    """(Φ, Φ′)^(p), at breadth min(B, p)."""
    if p < 0:
        raise InputError(f"breadth must be >= 0, got {p}")
    if p >= system.breadth:
        return system
    ante = frozenset(u for u in system.ante if u.cardinality <= p)
    cons = frozenset(pm for pm in system.cons if pm.cardinality <= p)
    return System(system.domain, system.arity, p, ante, cons)


def union(systems: Sequence[System]) -> System:
    """Componentwise union, at the largest input breadth."""
    systems = list(systems)
    if not systems:
        raise InputError("union needs at least one system")
    first = systems[0]
    for other in systems[1:]:
        _same_shape(first, other)
    ante = frozenset().union(*(s.ante for s in systems))
    cons = frozenset().union(*(s.cons for s in systems))
    return System(first.domain, first.arity, max(s.breadth for s in systems), ante, cons)


def restrict_antecedent(system: System, ante: Iterable[Multiset]) -> System:
    ante = frozenset(ante)
    extra = ante - system.ante
    if extra:
        raise InputError("restricted antecedent must be a subset of the antecedent")
    for pm in system.sorted_cons():
        if pm.underlying() not in ante:
            raise InvariantViolation("grounding: restricted antecedent drops the underlying "
                                     "multiset of a consequent member", pm)
    return System(system.domain, system.arity, system.breadth, ante, system.cons)


def extend_consequent(system: System, cons: Iterable[PointedMultiset]) -> System:
    cons = frozenset(cons)
    if not system.cons <= cons:
        raise InputError("extended consequent must contain the consequent")
    result = System(system.domain, system.arity, system.breadth, system.ante, cons)
    check = validate(result)
    if not check.valid:
        raise InvariantViolation(check.reason, check.offender)
    return result


def contains_trivial_breadth(system: System, p: int) -> bool:
    """Ω_m^(p) ⊆ (Φ, Φ′), decided by counting the members of cardinality <= p."""
    if p < 0:
        raise InputError(f"breadth must be >= 0, got {p}")
    if p > system.breadth:
        raise InputError(f"a fragment of breadth {system.breadth} cannot witness Ω^({p})")
    points = system.points
    ante_needed = bounded_count(points, p)
    cons_needed = points * bounded_count(points, p - 1) if p >= 1 else 0
    ante_have = sum(1 for u in system.ante if u.cardinality <= p)
    cons_have = sum(1 for pm in system.cons if pm.cardinality <= p)
    return ante_have == ante_needed and cons_have == cons_needed


# ---------------------------------------------------------------------------
# Enumeration and sampling (property suites)
# ---------------------------------------------------------------------------
def _candidates(domain: FiniteDomain, m: int, breadth: int):
    ante = list(enumerate_bounded(m, range(domain.size ** m), breadth))
    cons = sorted((pm for u in ante for pm in pointed_decompositions(u)),
                  key=PointedMultiset.sort_key)
    return ante, cons


def enumerate_systems(m: int, breadth: int, domain: FiniteDomain,
                      caps: Optional[Caps] = None) -> Iterator[System]:
    """Every valid fragment of arity m and breadth B, in a fixed order.

    Consequents are the downward-closed subsets of the pointed candidates; each is paired with
    every antecedent that grounds it.
    """
    caps = resolve(caps)
    ante_all, cons_all = _candidates(domain, m, breadth)
    caps.require("fragment_members", 2 ** (len(ante_all) + len(cons_all)))
    for bits in itertools.product((False, True), repeat=len(cons_all)):
        cons = frozenset(pm for pm, keep in zip(cons_all, bits) if keep)
        minimal = System(domain, m, breadth, frozenset(pm.underlying() for pm in cons), cons)
        if not validate(minimal).valid:
            continue
        optional = [u for u in ante_all if u not in minimal.ante]
        for extra in itertools.product((False, True), repeat=len(optional)):
            ante = minimal.ante | {u for u, keep in zip(optional, extra) if keep}
            yield System(domain, m, breadth, frozenset(ante), cons)


def random_system(m: int, breadth: int, domain: FiniteDomain, rng: np.random.Generator,
                  density: float = 0.5, caps: Optional[Caps] = None) -> System:
    """A random valid fragment: random consequent, downward-closed, grounded, plus random extras."""
    caps = resolve(caps)
    caps.require("fragment_members", bounded_count(domain.size ** m, breadth))
    ante_all, cons_all = _candidates(domain, m, breadth)
    picked = [pm for pm in cons_all if rng.random() < density]
    cons = set()
    for pm in picked:
        for sub in _sub_pointed(pm):
            cons.add(sub)
    ante = {pm.underlying() for pm in cons}
    ante.update(u for u in ante_all if rng.random() < density)
    return System(domain, m, breadth, frozenset(ante), frozenset(cons))


def _sub_pointed(pm: PointedMultiset) -> Iterator[PointedMultiset]:
    for rest in enumerate_submultisets(pm.rest):
        yield PointedMultiset(pm.point, rest)


# ---------------------------------------------------------------------------
# Closure conditions on finite sets of fragments
# ---------------------------------------------------------------------------
# Each predicate returns a SystemCheck whose offender is a missing fragment. Local closure needs
# no predicate: over a finite A every A^m is finite.
def closed_under_quotients(systems: Iterable[System], caps: Optional[Caps] = None) -> SystemCheck:
    """Every quotient of a member by a multiset of cardinality <= its breadth is a member."""
    caps = resolve(caps)
    pool = list(systems)
    members = frozenset(pool)
    for s in pool:
        caps.require("fragment_members", bounded_count(s.points, s.breadth))
        for d in enumerate_bounded(s.arity, range(s.points), s.breadth):
            q = quotient(s, d)
            if q not in members:
                return SystemCheck(False, f"quotient by a multiset of cardinality {d.cardinality} "
                                          f"is missing", q)
    return SystemCheck(True, "closed under quotients")


def closed_under_unions(systems: Iterable[System]) -> SystemCheck:
    """Pairwise unions of members of the same shape are members."""
    pool = list(systems)
    members = frozenset(pool)
    for a, b in itertools.combinations(pool, 2):
        if a.domain != b.domain or a.arity != b.arity:
            continue
        joined = union([a, b])
        if joined not in members:
            return SystemCheck(False, "union of two members is missing", joined)
    return SystemCheck(True, "closed under unions")


def closed_under_breadth_restriction(systems: Iterable[System]) -> SystemCheck:
    pool = list(systems)
    members = frozenset(pool)
    for s in pool:
        for p in range(s.breadth):
            restricted = breadth_restrict(s, p)
            if restricted not in members:
                return SystemCheck(False, f"restriction to breadth {p} is missing", restricted)
    return SystemCheck(True, "closed under breadth restriction")


def closed_under_dividends(systems: Iterable[System], universe: Iterable[System]) -> SystemCheck:
    """No fragment of ``universe`` outside the set is forced in by its quotients.

    A fragment X with Ω_m^(p) ⊆ X whose quotients X/S, |S| >= p, are all members must itself be
    a member. Only submultisets of antecedent members give nonempty quotients.
    """
    members = frozenset(systems)
    for x in universe:
        if x in members:
            continue
        for p in range(1, x.breadth + 1):
            if not contains_trivial_breadth(x, p):
                continue
            divisors = {d for u in x.ante for d in enumerate_submultisets(u) if d.cardinality >= p}
            if all(quotient(x, d) in members for d in divisors):
                return SystemCheck(False, f"contains Ω^({p}) and every quotient by a multiset of "
                                          f"cardinality >= {p} is a member, but is missing", x)
    return SystemCheck(True, "closed under dividends")
