"""
Finite multisets of ranked points, pointed multisets, and the enumerations the preservation
checks and the separating-system construction are built on.

A point is the rank of an m-tuple over A (see ``domain_core.rank``); a multiset stores its
multiplicity function as ascending ``(point, multiplicity)`` pairs, so equal multisets are equal
values and hash alike. Partitions and ordered arrangements are produced with sympy's multiset
routines and then put into a fixed canonical order, so every listing is reproducible.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator, List, Sequence, Tuple

from sympy.utilities.iterables import multiset_partitions, multiset_permutations

from .domain_core import Matrix
from .errors import InputError


@dataclass(frozen=True)
class Multiset:
    """A finite multiset on A^m; ``entries`` are ascending (point-rank, multiplicity >= 1)."""
    arity: int
    entries: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        entries = tuple((int(p), int(c)) for p, c in self.entries)
        object.__setattr__(self, "entries", entries)
        previous = -1
        for point, count in entries:
            if point <= previous:
                raise InputError(f"multiset points must be strictly ascending: {entries}")
            if count < 1:
                raise InputError(f"multiplicity of {point} must be >= 1, got {count}")
            previous = point

    @classmethod
    def empty(cls, arity: int) -> "Multiset":
        return cls(arity, ())

    @classmethod
    def from_points(cls, arity: int, points: Iterable[int]) -> "Multiset":
        return cls.from_counter(arity, Counter(int(p) for p in points))

    @classmethod
    def from_counter(cls, arity: int, counter) -> "Multiset":
        return cls(arity, tuple(sorted((p, c) for p, c in counter.items() if c > 0)))

    @property
    def cardinality(self) -> int:
        return sum(c for _, c in self.entries)

    def __len__(self) -> int:
        return self.cardinality

    def __bool__(self) -> bool:
        return bool(self.entries)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.entries)

    def points(self) -> Tuple[int, ...]:
        """The members in ascending order, each repeated by its multiplicity."""
        return tuple(p for p, c in self.entries for _ in range(c))

    def multiplicity(self, point: int) -> int:
        for p, c in self.entries:
            if p == point:
                return c
        return 0

    def counter(self) -> Counter:
        return Counter(dict(self.entries))

    def sort_key(self):
        return (self.cardinality, self.entries)


@dataclass(frozen=True)
class PointedMultiset:
    """(x, S): a distinguished point plus the rest of the underlying multiset {x} ⊎ S."""
    point: int
    rest: Multiset

    @property
    def arity(self) -> int:
        return self.rest.arity

    @property
    def cardinality(self) -> int:
        return self.rest.cardinality + 1

    def underlying(self) -> Multiset:
        return join(Multiset.from_points(self.arity, [self.point]), self.rest)

    def sort_key(self):
        return (self.cardinality, self.point, self.rest.entries)


def _same_universe(s: Multiset, t: Multiset) -> None:
    if s.arity != t.arity:
        raise InputError(f"multisets over A^{s.arity} and A^{t.arity} cannot be combined")


def join(s: Multiset, t: Multiset) -> Multiset:
    """S ⊎ T: multiplicities add."""
    _same_universe(s, t)
    return Multiset.from_counter(s.arity, s.counter() + t.counter())


def difference(s: Multiset, t: Multiset) -> Multiset:
    """S ∖ T: pointwise subtraction truncated at zero."""
    _same_universe(s, t)
    return Multiset.from_counter(s.arity, s.counter() - t.counter())


def is_submultiset(s: Multiset, t: Multiset) -> bool:
    """S ⊆ T."""
    _same_universe(s, t)
    theirs = dict(t.entries)
    return all(c <= theirs.get(p, 0) for p, c in s.entries)


def columns_multiset(matrix: Matrix) -> Multiset:
    """M*: each column's rank counted by its multiplicity."""
    return Multiset.from_points(matrix.rows, matrix.column_ranks())


# ---------------------------------------------------------------------------
# Enumerations
# ---------------------------------------------------------------------------
def enumerate_submultisets(s: Multiset) -> List[Multiset]:
    """Every T ⊆ S exactly once, ordered by (cardinality, entries)."""
    points = [p for p, _ in s.entries]
    ranges = [range(c + 1) for _, c in s.entries]
    subs = [
        Multiset(s.arity, tuple((p, c) for p, c in zip(points, counts) if c))
        for counts in itertools.product(*ranges)
    ]
    return sorted(subs, key=Multiset.sort_key)


def enumerate_bounded(arity: int, support: Sequence[int], max_cardinality: int) -> Iterator[Multiset]:
    """All multisets on ``support`` of cardinality <= ``max_cardinality``, by cardinality."""
    support = sorted(set(int(p) for p in support))
    for size in range(max_cardinality + 1):
        for combo in itertools.combinations_with_replacement(support, size):
            yield Multiset.from_points(arity, combo)


def bounded_count(support_size: int, max_cardinality: int) -> int:
    """Number of multisets ``enumerate_bounded`` yields."""
    return sum(comb(support_size + size - 1, size) if support_size else int(size == 0)
               for size in range(max_cardinality + 1))


def enumerate_partitions(s: Multiset, min_block: int = 1) -> List[Tuple[Multiset, ...]]:
    """All partitions of S into nonempty blocks of cardinality >= ``min_block``.

    Each partition appears once up to block order; blocks are sorted by (cardinality, entries)
    and the partitions themselves by their block keys. ε has exactly one partition, the empty one.
    """
    if min_block < 1:
        raise InputError(f"min_block must be >= 1, got {min_block}")
    if not s:
        return [()]
    found = set()
    for blocks in multiset_partitions(list(s.points())):
        if any(len(block) < min_block for block in blocks):
            continue
        found.add(tuple(sorted((Multiset.from_points(s.arity, b) for b in blocks),
                               key=Multiset.sort_key)))
    return sorted(found, key=lambda part: tuple(b.sort_key() for b in part))


def enumerate_arrangements(s: Multiset, n: int) -> List[Tuple[Tuple[int, ...], Multiset]]:
    """Every ordered choice of n members of S (distinct as point tuples) with its remainder.

    Realises M = [M1 | M2] up to what the preservation predicate can see: the column order of M1
    and the multiset of M2's columns.
    """
    if n < 0:
        raise InputError(f"arrangement length must be >= 0, got {n}")
    if n > s.cardinality:
        return []
    if n == 0:
        return [((), s)]
    arrangements = []
    for chosen in multiset_permutations(list(s.points()), n):
        chosen = tuple(int(p) for p in chosen)
        arrangements.append((chosen, difference(s, Multiset.from_points(s.arity, chosen))))
    arrangements.sort(key=lambda item: item[0])
    return arrangements


def pointed_decompositions(u: Multiset) -> List[PointedMultiset]:
    """All (x, U ∖ {x}) for the distinct points x of U."""
    return [
        PointedMultiset(p, difference(u, Multiset.from_points(u.arity, [p])))
        for p in u.support
    ]
