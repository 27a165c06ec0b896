"""
Preservation predicates f ▷ R and f ▷ (Φ, Φ′), and the bounded characterization queries.

``preserves_system`` answers exactly "does f preserve (Φ, Φ′)^(B)". It walks every antecedent
member S with |S| >= n and every ordered choice of n columns out of S (the M1 block of
M = [M1 | M2]); the image point together with the leftover columns must be a consequent member.
Matrices with fewer than n columns impose no constraint. For ``from_relation`` systems the
fragment verdict equals f ▷ R once B >= arity(f) + 1.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .caps import Caps, resolve
from .domain_core import FiniteDomain, Operation, apply_to_points, enumerate_operations, rank, unrank
from .errors import InputError
from .multisets import Multiset, PointedMultiset, enumerate_arrangements, enumerate_submultisets
from .systems import System, arity_floor_system, contains_trivial_breadth, from_relation, quotient

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Relation:
    """R ⊆ A^m, kept as a frozenset of tuple ranks."""
    domain: FiniteDomain
    arity: int
    tuples: FrozenSet[int] = frozenset()

    def __post_init__(self):
        if self.arity < 1:
            raise InputError(f"relation arity must be >= 1, got {self.arity}")
        tuples = frozenset(int(t) for t in self.tuples)
        object.__setattr__(self, "tuples", tuples)
        limit = self.domain.size ** self.arity
        bad = [t for t in tuples if not 0 <= t < limit]
        if bad:
            raise InputError(f"relation tuple rank {min(bad)} out of range for m={self.arity}")

    @classmethod
    def from_tuples(cls, domain: FiniteDomain, arity: int, tuples: Iterable[Sequence[int]]) -> "Relation":
        ranks = []
        for t in tuples:
            if len(t) != arity:
                raise InputError(f"tuple {tuple(t)} does not have {arity} entries")
            ranks.append(rank(t, domain))
        return cls(domain, arity, frozenset(ranks))

    def sorted_tuples(self) -> List[Tuple[int, ...]]:
        return [unrank(r, self.arity, self.domain) for r in sorted(self.tuples)]


@dataclass
class Violation:
    """A matrix witnessing ¬(f ▷ sys): M* = ``member``, M1 = ``columns``, fM1 = ``image``."""
    member: Multiset
    columns: Tuple[int, ...]
    remainder: Multiset
    image: int

    @property
    def pointed(self) -> PointedMultiset:
        return PointedMultiset(self.image, self.remainder)


def _same_domain(f: Operation, domain: FiniteDomain) -> None:
    if f.domain != domain:
        raise InputError(f"operation on k={f.domain.size} tested against an object on k={domain.size}")


def preserves_relation(f: Operation, relation: Relation, caps: Optional[Caps] = None) -> bool:
    """f ▷ R: every matrix with columns in R is mapped into R."""
    caps = resolve(caps)
    _same_domain(f, relation.domain)
    members = sorted(relation.tuples)
    caps.require("relation_matrices", len(members) ** f.arity)
    if not members:
        return True
    m = relation.arity
    k = relation.domain.size
    # columns as a (|R|, m) array; each n-tuple of R-members is one matrix
    cols = np.array([unrank(r, m, relation.domain) for r in members], dtype=np.intp)
    weights = k ** np.arange(m - 1, -1, -1, dtype=np.int64)
    for choice in itertools.product(range(len(members)), repeat=f.arity):
        values = f.array[tuple(cols[list(choice)])]
        if int(np.dot(values.astype(np.int64), weights)) not in relation.tuples:
            return False
    return True


def violation(f: Operation, system: System) -> Optional[Violation]:
    """The first witness of ¬(f ▷ sys) in canonical order, or None."""
    _same_domain(f, system.domain)
    n = f.arity
    for s in system.sorted_ante():
        if s.cardinality < n:
            continue
        for columns, remainder in enumerate_arrangements(s, n):
            image = apply_to_points(f, columns, system.arity)
            if PointedMultiset(image, remainder) not in system.cons:
                return Violation(s, columns, remainder, image)
    return None


def preserves_system(f: Operation, system: System) -> bool:
    if f.arity > system.breadth and system.ante:
        logger.debug("arity %d exceeds breadth %d; the check is vacuous", f.arity, system.breadth)
    return violation(f, system) is None


def all_preserve(ops: Iterable[Operation], system: System) -> bool:
    return all(preserves_system(f, system) for f in ops)


def characterized_ops(systems: Sequence[System], max_arity: int,
                      domain: Optional[FiniteDomain] = None,
                      caps: Optional[Caps] = None) -> List[Operation]:
    """Every f of arity <= N preserving all of ``systems``, by ascending arity then table rank."""
    caps = resolve(caps)
    systems = list(systems)
    if domain is None:
        if not systems:
            raise InputError("characterized_ops needs a domain when no systems are given")
        domain = systems[0].domain
    for s in systems:
        if s.domain != domain:
            raise InputError("all systems must share the domain")
    result = []
    for n in range(1, max_arity + 1):
        found = 0
        for f in enumerate_operations(domain, n, caps):
            if all(preserves_system(f, s) for s in systems):
                result.append(f)
                found += 1
        logger.info("characterized: arity %d -> %d operations", n, found)
    return result


def characterizing_family(relations: Sequence[Relation], p: int, breadth: int,
                          caps: Optional[Caps] = None) -> List[System]:
    """Systems characterizing Pol(Q) ∩ O^(>=p): one per relation plus the arity floor."""
    relations = list(relations)
    if not relations:
        raise InputError("characterizing_family needs at least one relation")
    domain = relations[0].domain
    family = [from_relation(r, breadth, caps) for r in relations]
    family.append(arity_floor_system(p, domain))
    return family


def preserves_via_quotients(f: Operation, system: System, p: int) -> bool:
    """f ▷ sys through the dividend decomposition.

    Needs Ω_m^(p) ⊆ sys; then f ▷ sys iff f preserves every quotient sys/S with |S| >= p. Only
    submultisets of antecedent members give nonempty quotients.
    """
    _same_domain(f, system.domain)
    if not contains_trivial_breadth(system, p):
        raise InputError(f"the system does not contain the trivial system of breadth {p}")
    divisors = set()
    for u in system.ante:
        for s in enumerate_submultisets(u):
            if s.cardinality >= p:
                divisors.add(s)
    for s in sorted(divisors, key=Multiset.sort_key):
        if not preserves_system(f, quotient(system, s)):
            return False
    return True
