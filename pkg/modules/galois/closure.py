"""
Arity-bounded generation of ⟨F⟩ under ζ, τ, ∇, ∗ (Δ optional), membership queries, and the
constructive separating system for a non-member.

Bounding the arity at N loses nothing: ζ and τ keep the arity, ∇ raises it and
arity(f ∗ g) = m + n - 1 >= max(m, n), so every member of arity <= N is derivable through
intermediates of arity <= N, and a generator of arity > N contributes nothing to the slice. With
Δ switched on that argument no longer holds (Δ lowers the arity): generators above N are
rejected and the fragment is the closure of the bounded slice only.
"""
from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import numpy as np

from .caps import Caps, resolve
from .domain_core import (
    FiniteDomain,
    Matrix,
    Operation,
    all_rows_matrix,
    delta,
    nabla,
    projections,
    star,
    tau,
    unrank,
    zeta,
)
from .errors import InputError, LogicError
from .multisets import Multiset, PointedMultiset, columns_multiset, difference, enumerate_partitions, enumerate_submultisets, join
from .preservation import preserves_system
from .systems import System, validate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClosedSetFragment:
    """The arity-<=N slice of ⟨generators (∪ projections)⟩."""
    domain: FiniteDomain
    max_arity: int
    generators: Tuple[Tuple[str, Operation], ...]
    with_projections: bool
    with_delta: bool
    members: Mapping[int, FrozenSet[Operation]] = field(default_factory=dict)

    def members_of_arity(self, n: int) -> FrozenSet[Operation]:
        return self.members.get(n, frozenset())

    def all_members(self) -> List[Operation]:
        """Canonical order: arity, then table rank."""
        return sorted((f for ops in self.members.values() for f in ops), key=Operation.sort_key)

    def __len__(self) -> int:
        return sum(len(ops) for ops in self.members.values())

    def name_of(self, f: Operation) -> str:
        """Generator name, e<i>_<n> for projections, t<n>_<index> otherwise."""
        for name, g in self.generators:
            if g == f:
                return name
        for i, e in enumerate(projections(f.arity, self.domain), start=1):
            if e == f:
                return f"e{i}_{f.arity}"
        ordered = sorted(self.members_of_arity(f.arity), key=Operation.sort_key)
        return f"t{f.arity}_{ordered.index(f)}"


@dataclass
class ClosureReport:
    closed: bool
    reason: str = ""
    witness: Optional[Operation] = None


def _derived(f: Operation, done: Iterable[Operation], max_arity: int, with_delta: bool):
    """Everything one step from f (and f with each finished member) within the arity bound."""
    yield zeta(f)
    yield tau(f)
    if with_delta and f.arity > 1:
        yield delta(f)
    if f.arity < max_arity:
        yield nabla(f)
    for g in done:
        if f.arity + g.arity - 1 <= max_arity:
            yield star(f, g)
            if g is not f:
                yield star(g, f)


def _check_generators(ops: Iterable[Operation], domain: FiniteDomain, max_arity: int) -> List[Operation]:
    ops = list(ops)
    for f in ops:
        if f.domain != domain:
            raise InputError(f"generator on k={f.domain.size} in a closure over k={domain.size}")
        if f.arity > max_arity:
            raise InputError(f"generator of arity {f.arity} exceeds the bound N={max_arity}")
    return ops


def generate(generators, max_arity: int, domain: FiniteDomain,
             with_projections: bool = True, with_delta: bool = False,
             caps: Optional[Caps] = None) -> ClosedSetFragment:
    """Least fixpoint containing the generators, restricted to arity <= N.

    ``generators`` is a mapping name -> Operation or a sequence of operations. The worklist pops
    candidates in (arity, table) order so the run is deterministic.
    """
    caps = resolve(caps)
    if max_arity < 1:
        raise InputError(f"arity bound must be >= 1, got {max_arity}")
    domain.check_arity(max_arity, caps)
    if isinstance(generators, Mapping):
        named = tuple(generators.items())
    else:
        named = tuple((f"g{i}", f) for i, f in enumerate(generators))
    if with_delta:
        seeds = _check_generators((f for _, f in named), domain, max_arity)
    else:
        # no derivation without Δ lowers the arity, so wider generators never reach the slice
        seeds = []
        for name, f in named:
            if f.arity > max_arity and f.domain == domain:
                logger.debug("generator %s of arity %d lies above N=%d; dropped", name, f.arity, max_arity)
                continue
            seeds.extend(_check_generators([f], domain, max_arity))
    if with_projections:
        seeds += [e for n in range(1, max_arity + 1) for e in projections(n, domain)]

    seen: Set[Operation] = set()
    heap: List[Tuple[Tuple[int, bytes], Operation]] = []

    def push(op: Operation) -> None:
        if op in seen:
            return
        seen.add(op)
        caps.require("closure_members", len(seen))
        heapq.heappush(heap, (op.sort_key(), op))

    for f in seeds:
        push(f)
    done: List[Operation] = []
    while heap:
        _, f = heapq.heappop(heap)
        done.append(f)
        for h in _derived(f, done, max_arity, with_delta):
            push(h)

    members: Dict[int, Set[Operation]] = {}
    for f in done:
        members.setdefault(f.arity, set()).add(f)
    frozen = {n: frozenset(members.get(n, ())) for n in range(1, max_arity + 1)}
    logger.info("closure over k=%d, N=%d: %s", domain.size, max_arity,
                ", ".join(f"{n}:{len(frozen[n])}" for n in frozen))
    return ClosedSetFragment(domain, max_arity, named, with_projections, with_delta, frozen)


def contains(fragment: ClosedSetFragment, g: Operation) -> bool:
    if g.domain != fragment.domain:
        raise InputError(f"operation on k={g.domain.size} tested against a fragment on k={fragment.domain.size}")
    if g.arity > fragment.max_arity:
        raise InputError(f"arity {g.arity} exceeds the fragment bound N={fragment.max_arity}")
    return g in fragment.members_of_arity(g.arity)


def min_arity(fragment: ClosedSetFragment) -> int:
    for n in range(1, fragment.max_arity + 1):
        if fragment.members_of_arity(n):
            return n
    raise LogicError("the fragment is empty; it has no smallest arity")


def _image_ranks(fragment: ClosedSetFragment, columns: Sequence[Tuple[int, ...]], rows: int) -> FrozenSet[int]:
    c = len(columns)
    if c > fragment.max_arity:
        raise InputError(f"a {c}-column matrix exceeds the fragment bound N={fragment.max_arity}")
    if c == 0:
        return frozenset()
    index = tuple(np.array(columns, dtype=np.intp))
    weights = fragment.domain.size ** np.arange(rows - 1, -1, -1, dtype=np.int64)
    return frozenset(int(np.dot(h.array[index].astype(np.int64), weights))
                     for h in fragment.members_of_arity(c))


def image_set(fragment: ClosedSetFragment, matrix: Matrix) -> FrozenSet[Tuple[int, ...]]:
    """F M = {hM : h a member of arity = number of columns}."""
    if matrix.domain != fragment.domain:
        raise InputError("matrix and fragment live on different domains")
    ranks = _image_ranks(fragment, matrix.columns, matrix.rows)
    return frozenset(unrank(r, matrix.rows, matrix.domain) for r in ranks)


# ---------------------------------------------------------------------------
# Closure checks
# ---------------------------------------------------------------------------
def is_closed(ops: Iterable[Operation], max_arity: int, with_delta: bool = False) -> ClosureReport:
    """Whether ``ops`` is closed under the Mal'cev operations within arity N."""
    ops = list(ops)
    if not ops:
        return ClosureReport(True, "empty set")
    domain = ops[0].domain
    _check_generators(ops, domain, max_arity)
    members = set(ops)
    ordered = sorted(members, key=Operation.sort_key)
    for i, f in enumerate(ordered):
        for h in _derived(f, ordered[: i + 1], max_arity, with_delta):
            if h not in members:
                return ClosureReport(False, f"derived operation of arity {h.arity} is missing", h)
    return ClosureReport(True, "closed")


def fragment_from_ops(ops, max_arity: int, domain: Optional[FiniteDomain] = None,
                      with_delta: bool = False) -> ClosedSetFragment:
    """Wrap an already closed set (e.g. a characterized set) as a fragment, after checking it."""
    named = tuple(ops.items()) if isinstance(ops, Mapping) else tuple(
        (f"g{i}", f) for i, f in enumerate(ops))
    if domain is None:
        if not named:
            raise InputError("fragment_from_ops needs a domain when no operations are given")
        domain = named[0][1].domain
    report = is_closed([f for _, f in named], max_arity, with_delta)
    if not report.closed:
        raise LogicError(f"not closed: {report.reason}")
    members: Dict[int, Set[Operation]] = {}
    for _, f in named:
        members.setdefault(f.arity, set()).add(f)
    frozen = {n: frozenset(members.get(n, ())) for n in range(1, max_arity + 1)}
    has_projections = all(e in frozen[n] for n in range(1, max_arity + 1)
                          for e in projections(n, domain))
    return ClosedSetFragment(domain, max_arity, named, has_projections, with_delta, frozen)


# ---------------------------------------------------------------------------
# Separating system
# ---------------------------------------------------------------------------
class _BlockImages:
    """Memoised images of column blocks (keyed by their multiset; column order is irrelevant)."""

    def __init__(self, fragment: ClosedSetFragment, rows: int):
        self.fragment = fragment
        self.rows = rows
        self._memo: Dict[Multiset, Tuple[int, ...]] = {}

    def __call__(self, block: Multiset) -> Tuple[int, ...]:
        cached = self._memo.get(block)
        if cached is None:
            columns = [unrank(p, self.rows, self.fragment.domain) for p in block.points()]
            cached = tuple(sorted(_image_ranks(self.fragment, columns, self.rows)))
            self._memo[block] = cached
        return cached

    def check_monotone(self) -> None:
        """F M' ⊆ F M whenever M' drops one column of M."""
        for block, images in list(self._memo.items()):
            if block.cardinality < 2:
                continue
            for p in block.support:
                smaller = difference(block, Multiset.from_points(block.arity, [p]))
                if not set(self(smaller)) <= set(images):
                    raise LogicError("block images are not monotone; the fragment is not closed")


def separating_system(fragment: ClosedSetFragment, g: Operation, verify: bool = True,
                      caps: Optional[Caps] = None) -> System:
    """A system preserved by every member of the fragment and violated by g.

    M is the k^n x n matrix of all n-tuples; m = k^n. The consequent holds
    (d^i, {d^j : j != i} ⊎ X) for every X ⊊ M*, every partition of M* ∖ X into blocks of
    cardinality >= μ, every choice d^j ∈ F M_j and every i; the antecedent holds the underlying
    multisets plus M* itself. The breadth bound is n.
    """
    caps = resolve(caps)
    if g.domain != fragment.domain:
        raise InputError("operation and fragment live on different domains")
    n = g.arity
    if n > fragment.max_arity:
        raise InputError(f"arity {n} exceeds the fragment bound N={fragment.max_arity}")
    if contains(fragment, g):
        raise LogicError("the operation is a member of the fragment; nothing separates it")
    domain = fragment.domain
    m = domain.size ** n
    caps.require("separation_rows", m)
    mu = min_arity(fragment) if len(fragment) else 1

    matrix = all_rows_matrix(n, domain)
    m_star = columns_multiset(matrix)
    images = _BlockImages(fragment, m)
    ante: Set[Multiset] = {m_star}
    cons: Set[PointedMultiset] = set()
    candidates = 0
    for x in enumerate_submultisets(m_star):
        if x == m_star:
            continue
        rest = difference(m_star, x)
        for partition in enumerate_partitions(rest, mu):
            choices = [images(block) for block in partition]
            for d in itertools.product(*choices):
                candidates += 1
                caps.require("separation_candidates", candidates)
                chosen = Multiset.from_points(m, d)
                ante.add(join(chosen, x))
                for i, point in enumerate(d):
                    others = Multiset.from_points(m, d[:i] + d[i + 1:])
                    cons.add(PointedMultiset(point, join(others, x)))
    result = System(domain, m, n, frozenset(ante), frozenset(cons))
    logger.info("separating system for %r: m=%d, %d candidates, |ante|=%d |cons|=%d",
                g, m, candidates, len(ante), len(cons))

    check = validate(result)
    if not check.valid:
        raise LogicError(f"constructed system is not valid ({check.reason}); the fragment is not closed")
    if verify:
        images.check_monotone()
        for f in fragment.all_members():
            if not preserves_system(f, result):
                raise LogicError(f"member {f!r} does not preserve the separating system")
        if preserves_system(g, result):
            raise LogicError(f"{g!r} preserves the separating system")
    return result
