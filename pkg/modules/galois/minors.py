"""
Minor formation schemes, the Skolem-map witness search, tight conjunctive minors, and the
restrictive / extensive / conjunctive minor checks, plus the simple-minor helpers.

A scheme with target m, indeterminates V and maps h_j : n_j -> m ∪ V turns an m-tuple a and a
Skolem map σ ∈ A^V into the n_j-tuple (a + σ)h_j. A multiset S of m-tuples belongs to the tight
minor's antecedent when the columns of S can each get their own σ so that, for every j, the
images form a member of Φ_j; the consequent is the same with the first column distinguished.
Witnesses depend only on S (or on the pointed multiset), since σ is chosen per column; equal
columns therefore only need a multiset of Skolem maps, not a sequence.

Every verdict here is relative to the stored breadth bounds.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .caps import Caps, resolve
from .domain_core import FiniteDomain, rank, unrank
from .errors import InputError
from .multisets import Multiset, PointedMultiset, bounded_count, enumerate_bounded, pointed_decompositions
from .systems import System, SystemCheck, equality_system

logger = logging.getLogger(__name__)

Image = Union[int, str]


@dataclass(frozen=True)
class Scheme:
    """Target arity, ordered indeterminates V, and the family of maps h_j (one tuple each)."""
    target: int
    indeterminates: Tuple[str, ...]
    maps: Tuple[Tuple[Image, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "indeterminates", tuple(self.indeterminates))
        object.__setattr__(self, "maps", tuple(tuple(h) for h in self.maps))
        if self.target < 1:
            raise InputError(f"scheme target must be >= 1, got {self.target}")
        if len(set(self.indeterminates)) != len(self.indeterminates):
            raise InputError(f"duplicate indeterminate in {self.indeterminates}")
        if not self.maps:
            raise InputError("a scheme needs at least one map")
        declared = set(self.indeterminates)
        for j, h in enumerate(self.maps):
            if not h:
                raise InputError(f"map {j} has empty source; n_j must be >= 1")
            for img in h:
                if isinstance(img, str):
                    if img not in declared:
                        raise InputError(f"map {j} uses undeclared indeterminate {img!r}")
                elif not 0 <= img < self.target:
                    raise InputError(f"map {j} image {img} is not a coordinate of 0..{self.target - 1}")

    @property
    def source_arities(self) -> Tuple[int, ...]:
        return tuple(len(h) for h in self.maps)


def scheme_apply(h: Sequence[Image], a: Sequence[int], sigma: Mapping[str, int]) -> Tuple[int, ...]:
    """(a + σ)h."""
    return tuple(sigma[img] if isinstance(img, str) else a[img] for img in h)


class _WitnessSearch:
    """Memoised (a + σ)h_j ranks for one (family, scheme) pair."""

    def __init__(self, family: Sequence[System], scheme: Scheme, caps: Optional[Caps]):
        caps = resolve(caps)
        family = list(family)
        if len(family) != len(scheme.maps):
            raise InputError(f"scheme has {len(scheme.maps)} maps but the family has {len(family)} systems")
        if not family:
            raise InputError("empty family")
        domain = family[0].domain
        for j, (sys_j, n_j) in enumerate(zip(family, scheme.source_arities)):
            if sys_j.domain != domain:
                raise InputError(f"family member {j} lives on k={sys_j.domain.size}, expected k={domain.size}")
            if sys_j.arity != n_j:
                raise InputError(f"family member {j} has arity {sys_j.arity} but map {j} has source {n_j}")
        caps.require("skolem_budget", domain.size ** len(scheme.indeterminates))
        self.family = family
        self.scheme = scheme
        self.domain = domain
        self.sigmas = [dict(zip(scheme.indeterminates, values))
                       for values in itertools.product(domain.elements, repeat=len(scheme.indeterminates))]
        self._images: Dict[Tuple[int, int], Tuple[int, ...]] = {}

    def images(self, point: int, sigma_index: int) -> Tuple[int, ...]:
        key = (point, sigma_index)
        cached = self._images.get(key)
        if cached is None:
            a = unrank(point, self.scheme.target, self.domain)
            sigma = self.sigmas[sigma_index]
            cached = tuple(rank(scheme_apply(h, a, sigma), self.domain) for h in self.scheme.maps)
            self._images[key] = cached
        return cached

    def _assignments(self, s: Multiset):
        """Per distinct point, a multiset of Skolem-map indices of matching size."""
        per_point = [
            [(p, combo) for combo in itertools.combinations_with_replacement(range(len(self.sigmas)), c)]
            for p, c in s.entries
        ]
        return itertools.product(*per_point)

    def _image_multisets(self, assignment) -> List[Multiset]:
        columns: List[List[int]] = [[] for _ in self.family]
        for p, combo in assignment:
            for sigma_index in combo:
                for j, img in enumerate(self.images(p, sigma_index)):
                    columns[j].append(img)
        return [Multiset.from_points(sys_j.arity, col) for sys_j, col in zip(self.family, columns)]

    def ante_witness(self, s: Multiset) -> bool:
        for assignment in self._assignments(s):
            targets = self._image_multisets(assignment)
            if all(t in sys_j.ante for t, sys_j in zip(targets, self.family)):
                return True
        return False

    def cons_witness(self, pm: PointedMultiset) -> bool:
        for point_sigma in range(len(self.sigmas)):
            heads = self.images(pm.point, point_sigma)
            for assignment in self._assignments(pm.rest):
                rests = self._image_multisets(assignment)
                if all(PointedMultiset(x, r) in sys_j.cons
                       for x, r, sys_j in zip(heads, rests, self.family)):
                    return True
        return False


def _warn_shallow(family: Sequence[System], breadth: int) -> None:
    shallow = [j for j, s in enumerate(family) if s.breadth < breadth]
    if shallow:
        logger.warning("family members %s have breadth below %d; minor verdicts are "
                       "relative to those fragments", shallow, breadth)


def tight_minor(family: Sequence[System], scheme: Scheme, breadth: int,
                caps: Optional[Caps] = None) -> System:
    """The tight conjunctive minor of ``family`` via ``scheme``, as a fragment of breadth B."""
    caps = resolve(caps)
    search = _WitnessSearch(family, scheme, caps)
    if breadth < 0:
        raise InputError(f"breadth must be >= 0, got {breadth}")
    _warn_shallow(family, breadth)
    m = scheme.target
    points = search.domain.size ** m
    caps.require("fragment_members", bounded_count(points, breadth))
    ante = [s for s in enumerate_bounded(m, range(points), breadth) if search.ante_witness(s)]
    # a consequent witness grounds in an antecedent witness with the same Skolem maps
    cons = [pm for s in ante for pm in pointed_decompositions(s) if search.cons_witness(pm)]
    logger.info("tight minor: target %d, |V|=%d, %d maps, B=%d -> |ante|=%d |cons|=%d",
                m, len(scheme.indeterminates), len(scheme.maps), breadth, len(ante), len(cons))
    return System(search.domain, m, breadth, frozenset(ante), frozenset(cons))


def _check_target(system: System, scheme: Scheme) -> None:
    if system.arity != scheme.target:
        raise InputError(f"system arity {system.arity} does not match scheme target {scheme.target}")


def is_restrictive_minor(system: System, family: Sequence[System], scheme: Scheme,
                         caps: Optional[Caps] = None) -> bool:
    """Every antecedent member of ``system`` has a witness against the family."""
    _check_target(system, scheme)
    search = _WitnessSearch(family, scheme, caps)
    for s in system.sorted_ante():
        if not search.ante_witness(s):
            logger.debug("restrictive check fails at %s", s)
            return False
    return True


def is_extensive_minor(system: System, family: Sequence[System], scheme: Scheme,
                       caps: Optional[Caps] = None) -> bool:
    """Every pointed multiset of cardinality <= B with a witness is in ``system``'s consequent."""
    _check_target(system, scheme)
    tight = tight_minor(family, scheme, system.breadth, caps)
    return tight.cons <= system.cons


def is_conjunctive_minor(system: System, family: Sequence[System], scheme: Scheme,
                         caps: Optional[Caps] = None) -> bool:
    return (is_restrictive_minor(system, family, scheme, caps)
            and is_extensive_minor(system, family, scheme, caps))


# ---------------------------------------------------------------------------
# Simple minors
# ---------------------------------------------------------------------------
def simple_minor(system: System, h: Sequence[Image], target: int,
                 indeterminates: Sequence[str] = (), breadth: Optional[int] = None,
                 caps: Optional[Caps] = None) -> System:
    scheme = Scheme(target, tuple(indeterminates), (tuple(h),))
    return tight_minor([system], scheme, system.breadth if breadth is None else breadth, caps)


def permute_args(system: System, pi: Sequence[int], caps: Optional[Caps] = None) -> System:
    """New tuples a satisfy (a[π(0)], ..., a[π(m-1)]) in ``system``."""
    m = system.arity
    if sorted(pi) != list(range(m)):
        raise InputError(f"{tuple(pi)} is not a permutation of 0..{m - 1}")
    return simple_minor(system, pi, m, caps=caps)


def identify_args(system: System, i: int, j: int, caps: Optional[Caps] = None) -> System:
    """Identify coordinate j with coordinate i; the result has arity m - 1."""
    n = system.arity
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise InputError(f"cannot identify coordinates {i} and {j} of an {n}-ary system")
    if n < 2:
        raise InputError("identification needs arity >= 2")
    kept = [c for c in range(n) if c != j]
    h = [kept.index(i) if c == j else kept.index(c) for c in range(n)]
    return simple_minor(system, h, n - 1, caps=caps)


def add_dummy_args(system: System, count: int = 1, caps: Optional[Caps] = None) -> System:
    """Append ``count`` coordinates that the system does not constrain."""
    if count < 0:
        raise InputError(f"dummy count must be >= 0, got {count}")
    n = system.arity
    return simple_minor(system, range(n), n + count, caps=caps)


def add_dummy_arg(system: System, caps: Optional[Caps] = None) -> System:
    return add_dummy_args(system, 1, caps)


def project_args(system: System, kept: Sequence[int], caps: Optional[Caps] = None) -> System:
    """Keep the listed coordinates, in that order; the dropped ones become indeterminates."""
    n = system.arity
    kept = list(kept)
    if not kept or len(set(kept)) != len(kept) or any(not 0 <= c < n for c in kept):
        raise InputError(f"invalid coordinate selection {kept} for an {n}-ary system")
    dropped = [c for c in range(n) if c not in kept]
    names = [f"v{c}" for c in dropped]
    h = [kept.index(c) if c in kept else f"v{c}" for c in range(n)]
    return simple_minor(system, h, len(kept), names, caps=caps)


def equality_chain_scheme(m: int) -> Scheme:
    """(h_i) for i < m-1, h_i(0) = i, h_i(1) = i + 1."""
    if m < 2:
        raise InputError(f"the equality chain needs m >= 2, got {m}")
    return Scheme(m, (), tuple((i, i + 1) for i in range(m - 1)))


def conjunctive_equality(m: int, breadth: int, domain: FiniteDomain,
                         caps: Optional[Caps] = None) -> System:
    """The m-ary equality system rebuilt as a conjunctive minor of the binary one."""
    binary = equality_system(2, breadth, domain, caps)
    if m == 1:
        return identify_args(binary, 0, 1, caps)
    return tight_minor([binary] * (m - 1), equality_chain_scheme(m), breadth, caps)


def closed_under_minors(systems: Sequence[System], scheme: Scheme,
                        caps: Optional[Caps] = None) -> SystemCheck:
    """Every tight minor via ``scheme`` of a family drawn from the set is in the set.

    The minor is formed at the smallest breadth of its family, the largest bound its members
    can witness.
    """
    pool = list(systems)
    members = frozenset(pool)
    slots = [[s for s in pool if s.arity == n] for n in scheme.source_arities]
    for family in itertools.product(*slots):
        if any(s.domain != family[0].domain for s in family):
            continue
        minor = tight_minor(family, scheme, min(s.breadth for s in family), caps)
        if minor not in members:
            return SystemCheck(False, "tight minor of a family of members is missing", minor)
    return SystemCheck(True, "closed under conjunctive minors")
